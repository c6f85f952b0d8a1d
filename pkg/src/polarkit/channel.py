"""BPSK mapping, seeded AWGN sampling, and channel LLR computation.

Noise is drawn from numpy's Generator (PCG64 via default_rng) seeded through
a SeedSequence keyed by (master_seed, point_key, frame_index). Every frame
owns an independent, reproducible stream, so Monte Carlo results do not
depend on how frames are scheduled across workers. Within a frame the info
bits are drawn before the noise, which keeps paired-seed comparisons between
two configurations aligned on identical payloads and noise.
"""

from __future__ import annotations

import numpy as np

from .construction import ShorteningPattern

__all__ = ["SAT", "noise_variance", "frame_rng", "point_key", "bpsk_awgn", "llr_expand"]

# Saturation constant for certain bits, in natural-log LLR units. Large enough
# to dominate any realistic channel LLR, small enough that f/g combining and
# path-metric sums stay comfortably inside double range.
SAT = 300.0


def noise_variance(ebno_db: float, rate: float) -> float:
    """Per-dimension AWGN variance for BPSK at a given Eb/N0 and code rate."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    ebno_db = float(ebno_db)
    if not np.isfinite(ebno_db):
        raise ValueError(f"ebno_db must be finite, got {ebno_db}")
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


def point_key(ebno_db: float) -> int:
    """Stable non-negative integer identifying one grid point (milli-dB)."""
    milli = int(round(float(ebno_db) * 1000.0))
    return milli if milli >= 0 else 2_000_000_000 - milli


def frame_rng(master_seed: int, key: int, frame_index: int) -> np.random.Generator:
    """Independent generator for one frame of one sweep point."""
    seq = np.random.SeedSequence((int(master_seed), int(key), int(frame_index)))
    return np.random.default_rng(seq)


def bpsk_awgn(x, ebno_db: float, rate: float, rng: np.random.Generator,
              noiseless: bool = False) -> np.ndarray:
    """Map bits to +/-1 (0 -> +1) and add white Gaussian noise.

    The noiseless flag is a debug override that skips the noise draw entirely,
    modelling the sigma -> 0 limit.
    """
    bits = np.asarray(x.bits if hasattr(x, "bits") else x, dtype=np.float64)
    symbols = 1.0 - 2.0 * bits
    if noiseless:
        return symbols
    sigma = np.sqrt(noise_variance(ebno_db, rate))
    return symbols + rng.normal(0.0, sigma, size=symbols.size)


def llr_expand(y, sigma2: float, pattern: ShorteningPattern) -> np.ndarray:
    """Lift M received values to N channel LLRs in natural code order.

    Transmitted positions get 2y/sigma2 (clipped to +/-SAT); shortened
    positions are known zeros and get +SAT. sigma2 = 0 models the noiseless
    limit, where only the sign of y survives.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError(f"received vector must be 1D, got shape {y.shape}")
    if y.size != pattern.transmitted_count:
        raise ValueError(
            f"received {y.size} values, pattern transmits {pattern.transmitted_count}"
        )
    sigma2 = float(sigma2)
    if sigma2 < 0 or not np.isfinite(sigma2):
        raise ValueError(f"sigma2 must be finite and >= 0, got {sigma2}")
    if sigma2 == 0.0:
        channel = np.where(y >= 0, SAT, -SAT)
    else:
        channel = np.clip(2.0 * y / sigma2, -SAT, SAT)
    llrs = np.full(len(pattern), SAT, dtype=np.float64)
    llrs[pattern.mask == 1] = channel
    return llrs
