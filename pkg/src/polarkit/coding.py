"""Encoding, source-block assembly, CRC handling, and codeword shortening.

The encoder computes x = u * G over GF(2) where G is the n-fold Kronecker
power of the 2x2 lower-triangular kernel, optionally preceded by the
bit-reversal input permutation. The butterfly runs stages with pair offset
1, 2, ..., N/2 over the natural-order vector; this computes the plain
Kronecker power, and the permutation is applied explicitly beforehand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FrozenMask, as_bits, bit_reversal_permutation
from .construction import ShorteningPattern

__all__ = [
    "Codeword",
    "ConsistencyError",
    "CrcSpec",
    "CRC_REGISTRY",
    "polar_encode",
    "assemble_source",
    "shorten_codeword",
    "crc_attach",
    "crc_check",
]


class ConsistencyError(RuntimeError):
    """Internal contract violation, e.g. a nonzero bit at a shortened position."""


@dataclass(frozen=True)
class Codeword:
    """Encoded bits; shortened codewords carry M bits instead of N."""

    bits: np.ndarray = field(repr=False)
    shortened: bool = False

    def __post_init__(self) -> None:
        arr = as_bits(self.bits)
        arr.flags.writeable = False
        object.__setattr__(self, "bits", arr)

    def __len__(self) -> int:
        return int(self.bits.size)


def _bits_of(block) -> np.ndarray:
    if isinstance(block, Codeword):
        return block.bits
    return as_bits(block)


def polar_encode(u, n: int, apply_bit_reversal: bool = True) -> Codeword:
    """Encode a length-2**n source block.

    Parameters
    ----------
    u : bit sequence
        Source block of length 2**n.
    n : int
        Number of butterfly stages.
    apply_bit_reversal : bool
        Permute the input by bit reversal first (the textbook generator).
        The decoders accept the same flag; both sides must agree.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    v = as_bits(_bits_of(u), length=1 << n).copy()
    if apply_bit_reversal:
        v = v[bit_reversal_permutation(n)]
    d = 1
    while d < v.size:
        pairs = v.reshape(-1, 2 * d)
        pairs[:, :d] ^= pairs[:, d:]
        d <<= 1
    return Codeword(v)


def assemble_source(info, mask: FrozenMask) -> np.ndarray:
    """Place info bits at the mask's INFO positions; frozen positions are 0."""
    info = as_bits(info)
    positions = mask.info_positions
    if info.size != positions.size:
        raise ValueError(f"expected {positions.size} info bits, got {info.size}")
    u = np.zeros(len(mask), dtype=np.uint8)
    u[positions] = info
    return u


def shorten_codeword(x, pattern: ShorteningPattern) -> Codeword:
    """Drop the pattern's zero positions from a mother codeword.

    Raises ConsistencyError if any dropped bit is nonzero: with a correct
    forced-frozen set those bits are structurally zero, so a nonzero value
    means the frozen mask and the pattern disagree.
    """
    bits = _bits_of(x)
    if bits.size != len(pattern):
        raise ValueError(f"codeword length {bits.size} does not match pattern {len(pattern)}")
    removed = pattern.shortened_positions
    if bits[removed].any():
        bad = removed[bits[removed] != 0]
        raise ConsistencyError(
            f"nonzero code bits at shortened positions {bad.tolist()}; "
            "the forced-frozen set does not match the pattern"
        )
    return Codeword(bits[pattern.mask == 1], shortened=True)


@dataclass(frozen=True)
class CrcSpec:
    """CRC over GF(2): MSB-first long division, zero initial state, no final XOR."""

    name: str
    bits: int
    poly: int  # includes the x**bits term

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise ValueError(f"crc bits must be >= 1, got {self.bits}")
        if self.poly.bit_length() != self.bits + 1:
            raise ValueError(
                f"poly 0x{self.poly:x} must have degree {self.bits} "
                f"(bit length {self.bits + 1})"
            )


CRC_REGISTRY = {
    "crc8": CrcSpec("crc8", 8, 0x107),
    "crc16": CrcSpec("crc16", 16, 0x11021),
    "crc24": CrcSpec("crc24", 24, 0x1864CFB),
}


def _crc_remainder(bits: np.ndarray, crc: CrcSpec, augment: bool) -> int:
    reg = 0
    mask = (1 << crc.bits) - 1
    low_poly = crc.poly & mask
    top = crc.bits - 1
    stream = bits.tolist() + ([0] * crc.bits if augment else [])
    for b in stream:
        feedback = (reg >> top) & 1
        reg = ((reg << 1) & mask) | b
        if feedback:
            reg ^= low_poly
    return reg


def crc_attach(info, crc: CrcSpec) -> np.ndarray:
    """Append the CRC remainder of the info bits, MSB first."""
    info = as_bits(info)
    rem = _crc_remainder(info, crc, augment=True)
    tail = [(rem >> (crc.bits - 1 - i)) & 1 for i in range(crc.bits)]
    return np.concatenate([info, np.asarray(tail, dtype=np.uint8)])


def crc_check(block, crc: CrcSpec) -> bool:
    """True when the block is a valid crc_attach output."""
    block = as_bits(block)
    if block.size <= crc.bits:
        raise ValueError(f"block of {block.size} bits cannot hold a {crc.bits}-bit CRC")
    return _crc_remainder(block, crc, augment=False) == 0
