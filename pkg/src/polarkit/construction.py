"""Reliability construction for uniform and shortened polar codes.

Three constructions are provided:

* ``bhattacharyya_construct``: exact BEC recursion on Bhattacharyya
  parameters, driven by a single erasure-style parameter z0.
* ``ga_construct``: Gaussian approximation tracking the mean of the LLR
  message distribution through the polarization butterfly via phi/phi_inv.
* ``nupga_construct``: non-uniform generalization of the GA for shortened
  codes: each leaf carries its own initial reliability (0 for shortened
  positions) and pairs with a dead member copy through unchanged.

All butterflies run coarse-first (pair offset N/2, N/4, ..., 1) over vectors
in natural index order; the pair (j, j+d) writes the degraded combine to j
and the upgraded combine to j+d, so index 0 is always the least reliable
synthesized channel and index N-1 the most reliable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import BitClass, CodeSpec, FrozenMask

__all__ = [
    "Domain",
    "ReliabilityVector",
    "ShorteningPattern",
    "PHI_CROSSOVER",
    "phi",
    "phi_inv",
    "bec_minus",
    "bec_plus",
    "bhattacharyya_construct",
    "ga_construct",
    "nupga_construct",
    "select_frozen",
    "shortening_pattern_last",
    "export_reliability_csv",
]


class Domain(Enum):
    """Value domain of a reliability vector; flips the frozen-selection order."""

    MEAN_LLR = "mean_llr"
    BHATTACHARYYA = "bhattacharyya"


@dataclass(frozen=True)
class ReliabilityVector:
    """Per-channel reliabilities plus the domain tag needed to rank them."""

    values: np.ndarray = field(repr=False)
    domain: Domain

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"reliability vector must be 1D, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("reliability values must be finite")
        if (arr < 0).any():
            raise ValueError("reliability values must be >= 0")
        if self.domain is Domain.BHATTACHARYYA and (arr > 1).any():
            raise ValueError("Bhattacharyya values must lie in [0, 1]")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def higher_is_better(self) -> bool:
        """Mean-LLR reliabilities grow with quality; Bhattacharyya shrinks."""
        return self.domain is Domain.MEAN_LLR


@dataclass(frozen=True)
class ShorteningPattern:
    """Binary mask over code-bit positions: 1 transmitted, 0 shortened."""

    mask: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.mask)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError(f"pattern mask must be non-empty 1D, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("pattern mask must contain only 0 and 1")
        arr = arr.astype(np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "mask", arr)

    def __len__(self) -> int:
        return int(self.mask.size)

    @property
    def transmitted_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def shortened_positions(self) -> np.ndarray:
        return np.flatnonzero(self.mask == 0)


# Mean-LLR tracking function phi and its inverse. Two printed branches:
# exp(-a*x^b + c) for small x, sqrt(pi/x)(1 - 10/(7x))e^(-x/4) for large x.
_A = 0.4527
_B = 0.86
_C = 0.0218

# phi(0+) limit of branch 1; also the upper end of phi_inv's domain. Branch 1
# exceeds 1 below its crossing point near x = 0.0294 and is left unclamped so
# that phi stays strictly decreasing and invertible on the whole positive axis.
PHI_MAX = math.exp(_C)


def _phi_small(x: float) -> float:
    return math.exp(-_A * x**_B + _C)


def _phi_large(x: float) -> float:
    return math.sqrt(math.pi / x) * (1.0 - 10.0 / (7.0 * x)) * math.exp(-x / 4.0)


def _solve_crossover() -> float:
    # The two branches intersect once between 10 and 20; switching exactly
    # there keeps phi continuous and strictly decreasing, which the round-trip
    # guarantee of phi_inv depends on.
    lo, hi = 10.0, 20.0  # branch 1 is below branch 2 at 10, above at 20
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _phi_small(mid) < _phi_large(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


PHI_CROSSOVER = _solve_crossover()
_PHI_AT_CROSSOVER = _phi_small(PHI_CROSSOVER)


def _check_scalar(name: str, x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x}")
    return x


def phi(x) -> float:
    """Mean-LLR to message-quality transform; strictly decreasing for x > 0.

    phi(0) is 1 by definition. Values for x below roughly 0.0294 slightly
    exceed 1; see PHI_MAX.
    """
    x = _check_scalar("x", x)
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x <= PHI_CROSSOVER:
        return _phi_small(x)
    return _phi_large(x)


def phi_inv(y) -> float:
    """Inverse of phi on (0, PHI_MAX]; phi_inv(1) is 0 by definition.

    Closed form on the small-x branch; bisection with bracket growth on the
    large-x branch, accurate to better than 1e-12 in the phi image.
    """
    y = _check_scalar("y", y)
    if y <= 0.0 or y > PHI_MAX:
        raise ValueError(f"y must lie in (0, {PHI_MAX!r}], got {y}")
    if y == 1.0:
        return 0.0
    if y >= _PHI_AT_CROSSOVER:
        return ((_C - math.log(y)) / _A) ** (1.0 / _B)
    lo = PHI_CROSSOVER
    # phi(x) < e^(-x/4) past the crossover, so -4*ln(y) bounds the root.
    hi = max(2.0 * lo, -4.0 * math.log(y) + 4.0)
    while _phi_large(hi) > y:
        hi *= 2.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if _phi_large(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bec_minus(a, b) -> float:
    """Degraded check-node combine of two erasure-style parameters."""
    a = _check_bhat("a", a)
    b = _check_bhat("b", b)
    return a + b - a * b


def bec_plus(a, b) -> float:
    """Upgraded variable-node combine of two erasure-style parameters."""
    a = _check_bhat("a", a)
    b = _check_bhat("b", b)
    return a * b


def _check_bhat(name: str, x) -> float:
    x = _check_scalar(name, x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    return x


def _require_power_of_two(N) -> int:
    if not isinstance(N, (int, np.integer)) or N < 1 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two >= 1, got {N!r}")
    return int(N)


def bhattacharyya_construct(N: int, z0: float) -> ReliabilityVector:
    """Polarize a single erasure parameter z0 through all n stages.

    The degraded branch is 2z - z^2 and the upgraded branch its exact
    complement 2z - (2z - z^2), so z_minus + z_plus reproduces 2z bit-exactly
    at every node (the subtraction is exact because z <= 2z - z^2 <= 2z).
    """
    N = _require_power_of_two(N)
    z0 = _check_bhat("z0", z0)
    v = np.full(N, z0, dtype=np.float64)
    d = N >> 1
    while d:
        for base in range(0, N, d << 1):
            for j in range(base, base + d):
                z = v[j]  # uniform start keeps every pair equal-valued
                s = z + z
                zm = s - z * z
                v[j] = zm
                v[j + d] = s - zm
        d >>= 1
    return ReliabilityVector(v, Domain.BHATTACHARYYA)


def _evolve_means(init: np.ndarray, even_rule: str) -> np.ndarray:
    """Run the mean-LLR butterfly over an initial per-leaf reliability vector.

    A pair with a dead member (exact 0) copies through unchanged, so zeros
    persist in place and never contaminate live channels. Results for repeated
    (a, b) pairs are cached; uniform inputs then cost one combine per stage.
    """
    if even_rule not in ("sum", "product"):
        raise ValueError(f"even_rule must be 'sum' or 'product', got {even_rule!r}")
    use_sum = even_rule == "sum"
    v = init.astype(np.float64).copy()
    cache: dict[tuple[float, float], tuple[float, float]] = {}
    N = v.size
    d = N >> 1
    while d:
        for base in range(0, N, d << 1):
            for j in range(base, base + d):
                a = float(v[j])
                b = float(v[j + d])
                if a == 0.0 or b == 0.0:
                    continue
                out = cache.get((a, b))
                if out is None:
                    pa = phi(a)
                    pb = phi(b)
                    worse = phi_inv(pa + pb - pa * pb)
                    better = a + b if use_sum else a * b
                    out = (worse, better)
                    cache[a, b] = out
                v[j] = out[0]
                v[j + d] = out[1]
        d >>= 1
    return v


def _init_mean(design_snr_db: float, rate: float) -> float:
    # Rate-adjusted design point: S = R * 10^(EbN0/10); initial mean is 4S.
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    design_snr_db = _check_scalar("design_snr_db", design_snr_db)
    return 4.0 * rate * 10.0 ** (design_snr_db / 10.0)


def ga_construct(N: int, design_snr_db: float, rate: float) -> ReliabilityVector:
    """Uniform Gaussian-approximation construction.

    Parameters
    ----------
    N : int
        Mother code length, a power of two.
    design_snr_db : float
        Design Eb/N0 in dB; adjusted internally by the code rate.
    rate : float
        Code rate used for the adjustment, in (0, 1].

    Returns
    -------
    ReliabilityVector
        Mean-LLR reliabilities in natural order, worst channel at index 0.
    """
    N = _require_power_of_two(N)
    m0 = _init_mean(design_snr_db, rate)
    return ReliabilityVector(_evolve_means(np.full(N, m0), "sum"), Domain.MEAN_LLR)


def nupga_construct(
    spec: CodeSpec, pattern: ShorteningPattern, even_rule: str = "sum"
) -> ReliabilityVector:
    """Non-uniform GA over a shortening pattern.

    Leaves start at 4S on transmitted positions and at 0 on shortened ones;
    the butterfly then re-polarizes the mixed vector. The default even_rule
    'sum' reduces exactly to ga_construct when the pattern is all-ones;
    'product' keeps the literal product combine for comparison runs.
    """
    if len(pattern) != spec.N:
        raise ValueError(f"pattern length {len(pattern)} does not match N={spec.N}")
    zeros = spec.N - pattern.transmitted_count
    if zeros != spec.N - spec.M:
        raise ValueError(
            f"pattern shortens {zeros} positions, spec requires {spec.N - spec.M}"
        )
    m0 = _init_mean(spec.design_snr_db, spec.rate)
    init = np.where(pattern.mask == 1, m0, 0.0)
    return ReliabilityVector(_evolve_means(init, even_rule), Domain.MEAN_LLR)


def select_frozen(reliab: ReliabilityVector, spec: CodeSpec, forced=()) -> FrozenMask:
    """Classify every input position as INFO or one of the frozen classes.

    Forced indices (the shortening-derived set) become FROZEN_SHORTENED; the
    least reliable of the remaining positions become FROZEN_RELIABILITY until
    exactly K + crc_bits INFO positions are left. Ties freeze the lower index.
    """
    N = spec.N
    if len(reliab) != N:
        raise ValueError(f"reliability length {len(reliab)} does not match N={N}")
    forced_idx = np.unique(np.asarray(sorted(int(i) for i in forced), dtype=np.int64))
    if forced_idx.size and (forced_idx[0] < 0 or forced_idx[-1] >= N):
        raise ValueError(f"forced indices out of range [0, {N})")
    n_info = spec.info_bits_total
    n_rel = N - n_info - forced_idx.size
    if n_rel < 0:
        raise ValueError(
            f"{forced_idx.size} forced positions leave fewer than "
            f"{n_info} candidates for information bits"
        )
    classes = np.full(N, BitClass.INFO, dtype=np.uint8)
    classes[forced_idx] = BitClass.FROZEN_SHORTENED
    key = reliab.values if reliab.higher_is_better else -reliab.values
    order = np.lexsort((np.arange(N), key))  # worst first, ties by lower index
    taken = 0
    for idx in order:
        if taken == n_rel:
            break
        if classes[idx] == BitClass.INFO:
            classes[idx] = BitClass.FROZEN_RELIABILITY
            taken += 1
    return FrozenMask(classes)


def shortening_pattern_last(N: int, M: int):
    """Shorten the last N-M code positions.

    Returns the pattern together with the forced-frozen input index set, which
    for this pattern is the same trailing index range: freezing those inputs
    forces the corresponding code bits to zero.
    """
    N = _require_power_of_two(N)
    if N < 2:
        raise ValueError("shortening needs N >= 2")
    if not N // 2 < M <= N:
        raise ValueError(f"M must satisfy N/2 < M <= N, got M={M} N={N}")
    mask = np.ones(N, dtype=np.uint8)
    mask[M:] = 0
    return ShorteningPattern(mask), np.arange(M, N, dtype=np.int64)


def export_reliability_csv(reliab: ReliabilityVector, mask: FrozenMask, path=None) -> str:
    """Render `index,reliability,class` rows; optionally write them to a file."""
    if len(reliab) != len(mask):
        raise ValueError(f"length mismatch: {len(reliab)} vs {len(mask)}")
    lines = ["index,reliability,class"]
    for i, (val, cls) in enumerate(zip(reliab.values, mask.classes)):
        lines.append(f"{i},{float(val)!r},{BitClass(cls).name}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
