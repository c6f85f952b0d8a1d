"""Pure-Python decoder kernels.

This is the reference implementation and the import-time fallback when the
compiled extension is unavailable. The compiled backend reproduces the exact
floating-point operation order used here, so the two produce bit-identical
decisions and path metrics; any change to the arithmetic in this file must be
mirrored in _ckernels.pyx.

Layout: per decode, llr and bit workspaces are (n+1) rows of N entries. Row 0
holds the channel LLRs; row lv holds node vectors at depth lv, each node of
size N/2**lv occupying its own column range; row n holds leaf decisions.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "python"
SAT = 300.0


def _f(a: float, b: float, min_sum: bool) -> float:
    # sign(a)*sign(b)*min(|a|,|b|) plus the exact tanh-rule correction,
    # log1p(exp(-|a+b|)) - log1p(exp(-|a-b|)), which never overflows.
    aa = -a if a < 0.0 else a
    ab = -b if b < 0.0 else b
    r = aa if aa < ab else ab
    if (a < 0.0) != (b < 0.0):
        r = -r
    if not min_sum:
        s = a + b
        if s < 0.0:
            s = -s
        d = a - b
        if d < 0.0:
            d = -d
        r += math.log1p(math.exp(-s)) - math.log1p(math.exp(-d))
    if r > SAT:
        return SAT
    if r < -SAT:
        return -SAT
    return r


def _g(a: float, b: float, u: int) -> float:
    r = b - a if u else b + a
    if r > SAT:
        return SAT
    if r < -SAT:
        return -SAT
    return r


def _refresh(llr, bit, i: int, n: int, N: int, min_sum: bool) -> None:
    """Bring the leaf LLR at index i up to date after decision i-1."""
    if i == 0:
        start = 1
    else:
        k = (i & -i).bit_length() - 1
        lg = n - k
        size = N >> lg
        s = (i >> k) * size
        ls = s - size
        parent = llr[lg - 1]
        row = llr[lg]
        left_bits = bit[lg]
        for j in range(size):
            row[s + j] = _g(parent[ls + j], parent[s + j], left_bits[ls + j])
        start = lg + 1
    for lv in range(start, n + 1):
        size = N >> lv
        s = (i >> (n - lv)) * size
        parent = llr[lv - 1]
        row = llr[lv]
        for j in range(size):
            row[s + j] = _f(parent[s + j], parent[s + size + j], min_sum)


def _propagate(bit, i: int, n: int, N: int) -> None:
    """Fold the fresh decision into the partial sums of completed subtrees."""
    pos = i
    lv = n
    while pos & 1:
        size = N >> lv
        s = pos * size
        ls = s - size
        child = bit[lv]
        parent = bit[lv - 1]
        for j in range(size):
            parent[ls + j] = child[ls + j] ^ child[s + j]
            parent[s + j] = child[s + j]
        pos >>= 1
        lv -= 1


def _workspaces(llrs, N: int, n: int):
    llr = [[0.0] * N for _ in range(n + 1)]
    llr[0] = [float(v) for v in llrs]
    bit = [[0] * N for _ in range(n + 1)]
    return llr, bit


def sc_decode(llrs, frozen, min_sum: bool = False) -> np.ndarray:
    """Successive cancellation; returns the length-N source decision vector."""
    N = len(llrs)
    n = N.bit_length() - 1
    frozen = [int(v) for v in frozen]
    llr, bit = _workspaces(llrs, N, n)
    out = np.empty(N, dtype=np.uint8)
    leaves = llr[n]
    decisions = bit[n]
    for i in range(N):
        _refresh(llr, bit, i, n, N, min_sum)
        u = 0 if frozen[i] or leaves[i] >= 0.0 else 1
        decisions[i] = u
        out[i] = u
        _propagate(bit, i, n, N)
    return out


def scl_decode(llrs, frozen, L: int, min_sum: bool = False, trace=None):
    """List decoding with path-metric pruning.

    Returns (paths, metrics): a (P, N) uint8 array of source decisions and the
    matching metrics, sorted by metric ascending, P <= L. Ties keep the lower
    pre-sort path first, and candidate order before pruning is (parent path,
    bit value), so pruning is fully deterministic.

    trace, when given, is called as trace(i, metrics) after each decision
    index with the sorted metrics of the surviving paths (diagnostics only;
    the compiled backend does not offer it).
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    N = len(llrs)
    n = N.bit_length() - 1
    frozen = [int(v) for v in frozen]
    llr0, bit0 = _workspaces(llrs, N, n)
    paths = [{"llr": llr0, "bit": bit0, "metric": 0.0}]
    for i in range(N):
        for p in paths:
            _refresh(p["llr"], p["bit"], i, n, N, min_sum)
        if frozen[i]:
            moves = []
            for rank, p in enumerate(paths):
                leaf = p["llr"][n][i]
                pen = -leaf if leaf < 0.0 else 0.0
                moves.append((p["metric"] + pen, rank, 0))
        else:
            moves = []
            for rank, p in enumerate(paths):
                leaf = p["llr"][n][i]
                pen0 = -leaf if leaf < 0.0 else 0.0
                pen1 = leaf if leaf >= 0.0 else 0.0
                moves.append((p["metric"] + pen0, rank, 0))
                moves.append((p["metric"] + pen1, rank, 1))
            moves.sort(key=lambda t: (t[0], t[1], t[2]))
            del moves[L:]
        used = [0] * len(paths)
        for _, rank, _ in moves:
            used[rank] += 1
        survivors = []
        for metric, rank, u in moves:
            src = paths[rank]
            used[rank] -= 1
            if used[rank]:
                dst = {
                    "llr": [row[:] for row in src["llr"]],
                    "bit": [row[:] for row in src["bit"]],
                    "metric": metric,
                }
            else:
                dst = src  # last consumer of this parent reuses its arrays
                dst["metric"] = metric
            dst["bit"][n][i] = u
            survivors.append(dst)
        paths = survivors
        for p in paths:
            _propagate(p["bit"], i, n, N)
        if trace is not None:
            trace(i, sorted(p["metric"] for p in paths))
    order = sorted(range(len(paths)), key=lambda r: (paths[r]["metric"], r))
    bits = np.array([paths[r]["bit"][n] for r in order], dtype=np.uint8)
    metrics = np.array([paths[r]["metric"] for r in order], dtype=np.float64)
    return bits, metrics
