"""Independent reference implementations used to freeze expected test values.

Everything here is written in the most direct form available (dense matrices,
probability-domain recursion, integer long division, exact rationals) so that
agreement with the package is evidence, not tautology.
"""

from fractions import Fraction

import numpy as np

from polarkit.construction import phi, phi_inv
from polarkit.core import bit_reversal_permutation


def gf2_generator(n: int, apply_bit_reversal: bool) -> np.ndarray:
    """Dense GF(2) generator matrix: rows are encodings of unit vectors."""
    f = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    g = np.array([[1]], dtype=np.uint8)
    for _ in range(n):
        g = np.kron(g, f) % 2
    if apply_bit_reversal:
        g = g[bit_reversal_permutation(n)]
    return g


def encode_reference(u: np.ndarray, n: int, apply_bit_reversal: bool) -> np.ndarray:
    return (u.astype(np.uint8) @ gf2_generator(n, apply_bit_reversal)) % 2


def prob_sc_reference(llrs: np.ndarray, frozen: np.ndarray) -> np.ndarray:
    """Probability-domain successive cancellation, recursive halves."""
    p0 = 1.0 / (1.0 + np.exp(-np.asarray(llrs, dtype=np.float64)))
    probs = [(float(a), float(1.0 - a)) for a in p0]
    out: list[int] = []

    def walk(pr, fl):
        size = len(pr)
        if size == 1:
            a0, a1 = pr[0]
            bit = 0 if fl[0] else (0 if a0 >= a1 else 1)
            out.append(bit)
            return [bit]
        half = size // 2
        left = []
        for j in range(half):
            a0, a1 = pr[j]
            b0, b1 = pr[j + half]
            q0 = a0 * b0 + a1 * b1
            q1 = a0 * b1 + a1 * b0
            z = q0 + q1
            left.append((q0 / z, q1 / z))
        v = walk(left, fl[:half])
        right = []
        for j in range(half):
            a = pr[j]
            b0, b1 = pr[j + half]
            r0 = a[v[j]] * b0
            r1 = a[v[j] ^ 1] * b1
            z = r0 + r1
            right.append((r0 / z, r1 / z))
        w = walk(right, fl[half:])
        return [x ^ y for x, y in zip(v, w)] + w

    walk(probs, list(np.asarray(frozen, dtype=np.uint8)))
    return np.array(out, dtype=np.uint8)


def ga_means_reference(init, even_rule: str = "sum"):
    """Scalar per-pair mean evolution, recursive halves, copy-through at zero."""
    vals = [float(v) for v in init]

    def walk(v):
        size = len(v)
        if size == 1:
            return v
        half = size // 2
        lo, hi = [], []
        for j in range(half):
            a, b = v[j], v[j + half]
            if a == 0.0 or b == 0.0:
                lo.append(a)
                hi.append(b)
                continue
            pa, pb = phi(a), phi(b)
            lo.append(phi_inv(pa + pb - pa * pb))
            hi.append(a * b if even_rule == "product" else a + b)
        return walk(lo) + walk(hi)

    return np.array(walk(vals), dtype=np.float64)


def bec_exact_reference(z0: Fraction, n: int):
    """Exact-rational BEC recursion; z- = 2z - z^2, z+ = z^2."""
    def walk(v):
        size = len(v)
        if size == 1:
            return v
        half = size // 2
        lo = [v[j] + v[j + half] - v[j] * v[j + half] for j in range(half)]
        hi = [v[j] * v[j + half] for j in range(half)]
        return walk(lo) + walk(hi)

    return walk([Fraction(z0)] * (1 << n))


def mod2_remainder(value: int, poly: int) -> int:
    """GF(2) long division of a bit-packed integer by a polynomial."""
    width = poly.bit_length() - 1
    while value.bit_length() > width:
        value ^= poly << (value.bit_length() - width - 1)
    return value


def bits_to_int(bits) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def crc_remainder_reference(bits, poly: int, augment: bool) -> int:
    width = poly.bit_length() - 1
    value = bits_to_int(bits)
    if augment:
        value <<= width
    return mod2_remainder(value, poly)


def ml_codebook(mask, n: int):
    """All source words and codewords of the code given by a frozen mask.

    Returns (sources, words): sources is (2^K, N) u-vectors, words the
    natural-order codewords. Only sensible for small K.
    """
    from polarkit.coding import assemble_source, polar_encode

    info = mask.info_positions
    k = info.size
    count = 1 << k
    sources = np.zeros((count, mask.classes.size), dtype=np.uint8)
    words = np.zeros_like(sources)
    for m in range(count):
        payload = np.array([(m >> (k - 1 - j)) & 1 for j in range(k)], dtype=np.uint8)
        u = assemble_source(payload, mask)
        sources[m] = u
        words[m] = polar_encode(u, n, apply_bit_reversal=False).bits
    return sources, words


def ml_rank(llrs: np.ndarray, words: np.ndarray, tx_index: int) -> int:
    """1-based likelihood rank of the transmitted word; smaller metric wins."""
    metrics = words.astype(np.float64) @ np.asarray(llrs, dtype=np.float64)
    return 1 + int(np.count_nonzero(metrics < metrics[tx_index]))
