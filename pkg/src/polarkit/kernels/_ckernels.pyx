# cython: language_level=3
"""Compiled decoder kernels.

Mirrors python_impl.py operation for operation: same update order, same
two-operand floating-point expressions, same saturation, same tie-breaking.
With both backends built on IEEE doubles and libm, decisions and path metrics
come out bit-identical; keep the two files in lockstep when editing either.
"""

import numpy as np

from libc.math cimport exp, log1p

NAME = "cython"
SAT = 300.0

cdef double _SAT = 300.0


cdef inline double _f(double a, double b, bint min_sum) noexcept nogil:
    cdef double aa = -a if a < 0.0 else a
    cdef double ab = -b if b < 0.0 else b
    cdef double r = aa if aa < ab else ab
    cdef double s, d
    if (a < 0.0) != (b < 0.0):
        r = -r
    if not min_sum:
        s = a + b
        if s < 0.0:
            s = -s
        d = a - b
        if d < 0.0:
            d = -d
        r = r + (log1p(exp(-s)) - log1p(exp(-d)))
    if r > _SAT:
        return _SAT
    if r < -_SAT:
        return -_SAT
    return r


cdef inline double _g(double a, double b, unsigned char u) noexcept nogil:
    cdef double r = b - a if u else b + a
    if r > _SAT:
        return _SAT
    if r < -_SAT:
        return -_SAT
    return r


cdef void _refresh(double[:, ::1] llr, unsigned char[:, ::1] bit,
                   Py_ssize_t i, int n, Py_ssize_t N, bint min_sum) noexcept nogil:
    cdef int k, lg, start, lv
    cdef Py_ssize_t size, s, ls, j
    if i == 0:
        start = 1
    else:
        k = 0
        while not (i >> k) & 1:
            k += 1
        lg = n - k
        size = N >> lg
        s = (i >> k) * size
        ls = s - size
        for j in range(size):
            llr[lg, s + j] = _g(llr[lg - 1, ls + j], llr[lg - 1, s + j],
                                bit[lg, ls + j])
        start = lg + 1
    for lv in range(start, n + 1):
        size = N >> lv
        s = (i >> (n - lv)) * size
        for j in range(size):
            llr[lv, s + j] = _f(llr[lv - 1, s + j], llr[lv - 1, s + size + j],
                                min_sum)


cdef void _propagate(unsigned char[:, ::1] bit, Py_ssize_t i, int n,
                     Py_ssize_t N) noexcept nogil:
    cdef Py_ssize_t pos = i, size, s, ls, j
    cdef int lv = n
    while pos & 1:
        size = N >> lv
        s = pos * size
        ls = s - size
        for j in range(size):
            bit[lv - 1, ls + j] = bit[lv, ls + j] ^ bit[lv, s + j]
            bit[lv - 1, s + j] = bit[lv, s + j]
        pos >>= 1
        lv -= 1


def sc_decode(llrs, frozen, bint min_sum=False):
    """Successive cancellation; returns the length-N source decision vector."""
    cdef double[::1] chan = np.ascontiguousarray(llrs, dtype=np.float64)
    cdef Py_ssize_t N = chan.shape[0]
    cdef int n = 0
    while (<Py_ssize_t> 1) << n < N:
        n += 1
    cdef unsigned char[::1] froz = np.ascontiguousarray(frozen, dtype=np.uint8)
    llr_arr = np.zeros((n + 1, N), dtype=np.float64)
    bit_arr = np.zeros((n + 1, N), dtype=np.uint8)
    out_arr = np.empty(N, dtype=np.uint8)
    cdef double[:, ::1] llr = llr_arr
    cdef unsigned char[:, ::1] bit = bit_arr
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef unsigned char u
    for j in range(N):
        llr[0, j] = chan[j]
    with nogil:
        for i in range(N):
            _refresh(llr, bit, i, n, N, min_sum)
            u = 0 if froz[i] or llr[n, i] >= 0.0 else 1
            bit[n, i] = u
            out[i] = u
            _propagate(bit, i, n, N)
    return out_arr


def scl_decode(llrs, frozen, int L, bint min_sum=False, trace=None):
    """List decoding with path-metric pruning; see python_impl.scl_decode.

    The trace hook is accepted for interface parity but must be None here;
    use the python backend for traced runs.
    """
    if trace is not None:
        raise ValueError("trace hooks are only supported by the python backend")
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    chan = np.ascontiguousarray(llrs, dtype=np.float64)
    cdef Py_ssize_t N = chan.shape[0]
    cdef int n = 0
    while (<Py_ssize_t> 1) << n < N:
        n += 1
    cdef unsigned char[::1] froz = np.ascontiguousarray(frozen, dtype=np.uint8)

    llr0 = np.zeros((n + 1, N), dtype=np.float64)
    llr0[0, :] = chan
    bit0 = np.zeros((n + 1, N), dtype=np.uint8)
    llr_rows = [llr0]
    bit_rows = [bit0]
    metrics = [0.0]

    cdef double[:, ::1] lv_view
    cdef unsigned char[:, ::1] bv_view
    cdef Py_ssize_t i, rank
    cdef double leaf, pen0, pen1
    for i in range(N):
        for rank in range(len(llr_rows)):
            lv_view = llr_rows[rank]
            bv_view = bit_rows[rank]
            _refresh(lv_view, bv_view, i, n, N, min_sum)
        if froz[i]:
            moves = []
            for rank in range(len(llr_rows)):
                lv_view = llr_rows[rank]
                leaf = lv_view[n, i]
                pen0 = -leaf if leaf < 0.0 else 0.0
                moves.append((metrics[rank] + pen0, rank, 0))
        else:
            moves = []
            for rank in range(len(llr_rows)):
                lv_view = llr_rows[rank]
                leaf = lv_view[n, i]
                pen0 = -leaf if leaf < 0.0 else 0.0
                pen1 = leaf if leaf >= 0.0 else 0.0
                moves.append((metrics[rank] + pen0, rank, 0))
                moves.append((metrics[rank] + pen1, rank, 1))
            moves.sort()
            del moves[L:]
        used = [0] * len(llr_rows)
        for move in moves:
            used[<Py_ssize_t> move[1]] += 1
        new_llr = []
        new_bit = []
        new_metrics = []
        for move in moves:
            rank = <Py_ssize_t> move[1]
            used[rank] -= 1
            if used[rank]:
                la = llr_rows[rank].copy()
                ba = bit_rows[rank].copy()
            else:
                la = llr_rows[rank]
                ba = bit_rows[rank]
            ba[n, i] = move[2]
            new_llr.append(la)
            new_bit.append(ba)
            new_metrics.append(move[0])
        llr_rows = new_llr
        bit_rows = new_bit
        metrics = new_metrics
        for rank in range(len(bit_rows)):
            bv_view = bit_rows[rank]
            _propagate(bv_view, i, n, N)
    order = sorted(range(len(metrics)), key=lambda r: (metrics[r], r))
    bits = np.array([bit_rows[r][n] for r in order], dtype=np.uint8)
    out_metrics = np.array([metrics[r] for r in order], dtype=np.float64)
    return bits, out_metrics
