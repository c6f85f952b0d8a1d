"""Shared types and bit-level primitives for the polar-code toolkit.

Index convention used across the package: all source-domain vectors (frozen
masks, reliability vectors, source blocks) are indexed in the natural order
of the transform x = u F_2^{kron n}. The optional bit-reversal permutation is
applied explicitly by the encoder/decoder pair and never leaks into stored
masks or reliabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np


class BitClass(IntEnum):
    """Per-position classification of a source index."""

    INFO = 0
    FROZEN_RELIABILITY = 1
    FROZEN_SHORTENED = 2


def as_bits(values, length: int | None = None) -> np.ndarray:
    """Validate and convert a bit sequence to a uint8 array over {0, 1}."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"bit block must be 1D, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit block must contain only 0 and 1")
    if length is not None and arr.size != length:
        raise ValueError(f"expected {length} bits, got {arr.size}")
    return arr.astype(np.uint8)


def pack_bits(bits) -> bytes:
    """Pack a bit block into bytes (big-endian within each byte) for logging."""
    return np.packbits(as_bits(bits)).tobytes()


def unpack_bits(payload: bytes, length: int) -> np.ndarray:
    """Invert :func:`pack_bits`; `length` disambiguates the final partial byte."""
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if bits.size < length or bits.size - length >= 8:
        raise ValueError(f"packed payload holds {bits.size} bits, expected {length}")
    if bits[length:].any():
        raise ValueError("padding bits beyond the stated length must be zero")
    return bits[:length].astype(np.uint8)


def bit_reversal_permutation(n: int) -> np.ndarray:
    """Return the bit-reversal permutation on 2**n indices.

    Parameters
    ----------
    n : int
        Number of index bits, n >= 1.

    Returns
    -------
    np.ndarray
        Array p of length 2**n with p[i] = reversal of i's n-bit pattern.
        The permutation is an involution and preserves bit weight.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    size = 1 << n
    perm = np.zeros(size, dtype=np.int64)
    for i in range(size):
        perm[i] = int(format(i, f"0{n}b")[::-1], 2)
    return perm


def xor_block(a, b) -> np.ndarray:
    """Elementwise GF(2) sum of two equal-length bit blocks."""
    av = as_bits(a)
    bv = as_bits(b)
    if av.size != bv.size:
        raise ValueError(f"length mismatch: {av.size} vs {bv.size}")
    return np.bitwise_xor(av, bv)


@dataclass(frozen=True)
class CodeSpec:
    """Static description of one rate-compatible polar code.

    Parameters
    ----------
    n : int
        Mother-code exponent; the mother block length is N = 2**n.
    M : int
        Transmitted codeword length after shortening, K + crc_bits <= M <= N.
    K : int
        Number of information bits per frame (CRC excluded).
    design_snr_db : float
        Eb/N0 in dB used for code construction.
    crc_bits : int
        CRC length appended to the information bits; 0 disables the CRC.
    """

    n: int
    M: int
    K: int
    design_snr_db: float = 0.0
    crc_bits: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.crc_bits < 0:
            raise ValueError(f"crc_bits must be >= 0, got {self.crc_bits}")
        if not self.K + self.crc_bits <= self.M <= self.N:
            raise ValueError(
                f"need K + crc_bits <= M <= N, got K={self.K} "
                f"crc_bits={self.crc_bits} M={self.M} N={self.N}"
            )
        if not np.isfinite(self.design_snr_db):
            raise ValueError(f"design_snr_db must be finite, got {self.design_snr_db}")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def rate(self) -> float:
        """Code rate K/M over the transmitted bits."""
        return self.K / self.M

    @property
    def info_bits_total(self) -> int:
        """Source positions carrying payload: K information bits plus the CRC."""
        return self.K + self.crc_bits


@dataclass(frozen=True)
class FrozenMask:
    """Per-position classes for one source block, immutable once built."""

    classes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.classes, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError(f"mask must be 1D, got shape {arr.shape}")
        valid = {int(c) for c in BitClass}
        present = set(np.unique(arr).tolist())
        if not present <= valid:
            raise ValueError(f"mask holds classes outside {sorted(valid)}: {sorted(present)}")
        arr.flags.writeable = False
        object.__setattr__(self, "classes", arr)

    def __len__(self) -> int:
        return int(self.classes.size)

    @property
    def info_positions(self) -> np.ndarray:
        return np.flatnonzero(self.classes == BitClass.INFO)

    @property
    def frozen_positions(self) -> np.ndarray:
        """All non-information positions, reliability-frozen and shortened alike."""
        return np.flatnonzero(self.classes != BitClass.INFO)

    @property
    def shortened_positions(self) -> np.ndarray:
        return np.flatnonzero(self.classes == BitClass.FROZEN_SHORTENED)

    @property
    def info_count(self) -> int:
        return int(np.count_nonzero(self.classes == BitClass.INFO))
