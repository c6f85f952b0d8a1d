"""SC, SCL, and CRC-aided SCL decoding over channel LLRs.

All decoders take the frozen mask in source order and return source-order
decisions. The apply_bit_reversal flag must match the one used at encoding:
internally the mask is permuted into butterfly order, the kernel decodes, and
the decisions are permuted back, so the flag never leaks into stored masks.
"""

from __future__ import annotations

import numpy as np

from .coding import CrcSpec, crc_check
from .core import BitClass, FrozenMask, bit_reversal_permutation
from .kernels import backend

__all__ = ["sc_decode", "scl_decode", "ca_scl_decode"]


def _prepare(llrs, mask: FrozenMask, apply_bit_reversal: bool):
    llr = np.ascontiguousarray(
        llrs.values if hasattr(llrs, "values") else llrs, dtype=np.float64
    )
    if llr.ndim != 1:
        raise ValueError(f"llrs must be 1D, got shape {llr.shape}")
    N = llr.size
    if N < 2 or N & (N - 1):
        raise ValueError(f"llr length must be a power of two >= 2, got {N}")
    if len(mask) != N:
        raise ValueError(f"mask length {len(mask)} does not match llr length {N}")
    flags = (mask.classes != BitClass.INFO).astype(np.uint8)
    perm = None
    if apply_bit_reversal:
        perm = bit_reversal_permutation(N.bit_length() - 1)
        flags = flags[perm]
    return llr, flags, perm


def sc_decode(llrs, mask: FrozenMask, apply_bit_reversal: bool = True,
              min_sum: bool = False) -> np.ndarray:
    """Successive cancellation decode; returns the source-order decisions."""
    llr, flags, perm = _prepare(llrs, mask, apply_bit_reversal)
    u = backend.sc_decode(llr, flags, min_sum)
    return u[perm] if perm is not None else u


def scl_decode(llrs, mask: FrozenMask, L: int, apply_bit_reversal: bool = True,
               min_sum: bool = False):
    """List decode; returns [(source_bits, metric), ...] sorted by metric."""
    if not isinstance(L, (int, np.integer)) or L < 1:
        raise ValueError(f"L must be an integer >= 1, got {L!r}")
    llr, flags, perm = _prepare(llrs, mask, apply_bit_reversal)
    bits, metrics = backend.scl_decode(llr, flags, int(L), min_sum)
    if perm is not None:
        bits = bits[:, perm]
    return [(bits[k], float(metrics[k])) for k in range(bits.shape[0])]


def ca_scl_decode(llrs, mask: FrozenMask, L: int, crc: CrcSpec,
                  apply_bit_reversal: bool = True, min_sum: bool = False) -> np.ndarray:
    """CRC-aided list decode.

    Picks the best-metric path whose info bits (payload plus CRC tail) pass
    the check; falls back to the overall best path when none passes.
    """
    info_positions = mask.info_positions
    if info_positions.size <= crc.bits:
        raise ValueError(
            f"mask provides {info_positions.size} info positions, "
            f"need more than the {crc.bits} CRC bits"
        )
    paths = scl_decode(llrs, mask, L, apply_bit_reversal, min_sum)
    for bits, _ in paths:
        if crc_check(bits[info_positions], crc):
            return bits
    return paths[0][0]
