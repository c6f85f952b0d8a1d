"""Seeded Monte Carlo BER/FER sweeps over the encode/channel/decode pipeline.

Determinism contract: every frame draws from its own generator keyed by
(master_seed, point_key, frame_index), frames are processed in index order in
fixed-size batches, and the stop rule truncates at the exact frame where the
frame-error target is reached. Results and CSV bytes are therefore identical
for any worker count; worker count and wall-clock time are deliberately kept
out of the CSV metadata.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import bpsk_awgn, frame_rng, llr_expand, noise_variance, point_key
from .coding import CRC_REGISTRY, crc_attach, polar_encode, assemble_source, shorten_codeword
from .construction import (
    ShorteningPattern,
    bhattacharyya_construct,
    ga_construct,
    nupga_construct,
    select_frozen,
    shortening_pattern_last,
)
from .core import CodeSpec, FrozenMask
from .decoder import ca_scl_decode, sc_decode, scl_decode

__all__ = ["SimConfig", "SimPoint", "run_point", "run_sweep", "presets",
           "build_code", "parse_config_file", "assemble_config", "config_to_raw"]

CONSTRUCTIONS = ("ga", "nupga", "bhattacharyya")
SHORTENINGS = ("none", "last")
DECODERS = ("sc", "scl", "cascl")
EVEN_RULES = ("sum", "product")

# Frames per scheduling batch. Fixed: results never depend on it (the error
# scan below is per-frame), it only balances dispatch overhead.
_BATCH_FRAMES = 512


@dataclass(frozen=True)
class SimConfig:
    """Full description of one sweep: code, construction, decoder, stop rule."""

    spec: CodeSpec
    ebno_grid_db: tuple
    construction: str = "ga"
    shortening: str = "none"
    even_rule: str = "sum"
    decoder: str = "sc"
    list_size: int = 1
    crc_name: str | None = None
    min_frame_errors: int = 100
    max_frames: int = 1_000_000
    master_seed: int = 0
    noiseless: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "ebno_grid_db", tuple(float(v) for v in self.ebno_grid_db))
        if not self.ebno_grid_db:
            raise ValueError("ebno_grid_db must not be empty")
        if not all(np.isfinite(self.ebno_grid_db)):
            raise ValueError(f"ebno_grid_db must be finite, got {self.ebno_grid_db}")
        for name, allowed in (("construction", CONSTRUCTIONS), ("shortening", SHORTENINGS),
                              ("even_rule", EVEN_RULES), ("decoder", DECODERS)):
            value = getattr(self, name)
            if value not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {value!r}")
        if self.shortening == "none" and self.spec.M != self.spec.N:
            raise ValueError(
                f"M={self.spec.M} < N={self.spec.N} requires shortening='last'"
            )
        if self.min_frame_errors < 1:
            raise ValueError(f"min_frame_errors must be >= 1, got {self.min_frame_errors}")
        if self.max_frames < 1:
            raise ValueError(f"max_frames must be >= 1, got {self.max_frames}")
        if self.list_size < 1:
            raise ValueError(f"list_size must be >= 1, got {self.list_size}")
        if self.decoder == "sc" and self.list_size != 1:
            raise ValueError("decoder 'sc' ignores list_size; set it to 1")
        if self.decoder == "cascl":
            if self.crc_name not in CRC_REGISTRY:
                raise ValueError(
                    f"decoder 'cascl' needs crc_name from {sorted(CRC_REGISTRY)}, "
                    f"got {self.crc_name!r}"
                )
            if CRC_REGISTRY[self.crc_name].bits != self.spec.crc_bits:
                raise ValueError(
                    f"{self.crc_name} has {CRC_REGISTRY[self.crc_name].bits} bits, "
                    f"spec.crc_bits is {self.spec.crc_bits}"
                )
        else:
            if self.crc_name is not None or self.spec.crc_bits != 0:
                raise ValueError("CRC bits are only meaningful with decoder 'cascl'")


@dataclass(frozen=True)
class SimPoint:
    """One measured grid point. Seeds: frames 0..frames-1 under point_key."""

    ebno_db: float
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    elapsed_seconds: float
    master_seed: int
    point_key: int

    def __post_init__(self) -> None:
        if self.frames < 1:
            raise ValueError("a SimPoint needs at least one frame")
        if not 0 <= self.frame_errors <= self.frames:
            raise ValueError(f"frame_errors {self.frame_errors} out of range")
        if self.bit_errors < 0:
            raise ValueError("bit_errors must be >= 0")


def build_code(cfg: SimConfig):
    """Construct the pattern, reliabilities, and frozen mask for a config.

    Any inconsistency between spec, pattern, and construction surfaces here,
    before the first simulated frame.
    """
    spec = cfg.spec
    if cfg.shortening == "last" and spec.M < spec.N:
        pattern, forced = shortening_pattern_last(spec.N, spec.M)
    else:
        pattern = ShorteningPattern(np.ones(spec.N, dtype=np.uint8))
        forced = np.empty(0, dtype=np.int64)
    if cfg.construction == "ga":
        reliab = ga_construct(spec.N, spec.design_snr_db, spec.rate)
    elif cfg.construction == "nupga":
        reliab = nupga_construct(spec, pattern, cfg.even_rule)
    else:
        # Erasure-style proxy for the design point: z0 = exp(-S) with the same
        # rate-adjusted S used by the GA initialization.
        s = spec.rate * 10.0 ** (spec.design_snr_db / 10.0)
        reliab = bhattacharyya_construct(spec.N, float(np.exp(-s)))
    mask = select_frozen(reliab, spec, forced)
    return pattern, reliab, mask


@dataclass(frozen=True)
class _Pipeline:
    """Everything a worker needs to simulate frames; plain arrays only."""

    n: int
    K: int
    rate: float
    classes: np.ndarray
    pattern_mask: np.ndarray
    decoder: str
    list_size: int
    crc_name: str | None
    master_seed: int
    noiseless: bool


def _build_pipeline(cfg: SimConfig) -> _Pipeline:
    pattern, _, mask = build_code(cfg)
    return _Pipeline(
        n=cfg.spec.n,
        K=cfg.spec.K,
        rate=cfg.spec.rate,
        classes=mask.classes,
        pattern_mask=pattern.mask,
        decoder=cfg.decoder,
        list_size=cfg.list_size,
        crc_name=cfg.crc_name,
        master_seed=cfg.master_seed,
        noiseless=cfg.noiseless,
    )


def _run_frames(pipe: _Pipeline, ebno_db: float, pkey: int, start: int,
                count: int) -> np.ndarray:
    """Simulate frames [start, start+count); returns per-frame bit-error counts."""
    mask = FrozenMask(pipe.classes)
    pattern = ShorteningPattern(pipe.pattern_mask)
    info_pos = mask.info_positions
    crc = CRC_REGISTRY[pipe.crc_name] if pipe.crc_name else None
    sigma2 = 0.0 if pipe.noiseless else noise_variance(ebno_db, pipe.rate)
    errs = np.zeros(count, dtype=np.int64)
    for t in range(count):
        rng = frame_rng(pipe.master_seed, pkey, start + t)
        payload = rng.integers(0, 2, pipe.K).astype(np.uint8)
        block = crc_attach(payload, crc) if crc else payload
        u = assemble_source(block, mask)
        x = polar_encode(u, pipe.n, apply_bit_reversal=False)
        xs = shorten_codeword(x, pattern)
        y = bpsk_awgn(xs, ebno_db, pipe.rate, rng, pipe.noiseless)
        llrs = llr_expand(y, sigma2, pattern)
        if pipe.decoder == "sc":
            uhat = sc_decode(llrs, mask, apply_bit_reversal=False)
        elif pipe.decoder == "scl":
            uhat = scl_decode(llrs, mask, pipe.list_size, apply_bit_reversal=False)[0][0]
        else:
            uhat = ca_scl_decode(llrs, mask, pipe.list_size, crc, apply_bit_reversal=False)
        errs[t] = int(np.count_nonzero(uhat[info_pos][: pipe.K] != payload))
    return errs


_WORKER_PIPE: _Pipeline | None = None


def _init_worker(pipe: _Pipeline) -> None:
    global _WORKER_PIPE
    _WORKER_PIPE = pipe


def _worker_task(args) -> np.ndarray:
    ebno_db, pkey, start, count = args
    return _run_frames(_WORKER_PIPE, ebno_db, pkey, start, count)


def _measure_point(pipe: _Pipeline, ebno_db: float, min_fe: int, max_frames: int,
                   workers: int, executor) -> SimPoint:
    pkey = point_key(ebno_db)
    t0 = time.perf_counter()
    frames = bit_errors = frame_errors = 0
    while frames < max_frames and frame_errors < min_fe:
        batch = min(_BATCH_FRAMES, max_frames - frames)
        if executor is None:
            chunks = [_run_frames(pipe, ebno_db, pkey, frames, batch)]
        else:
            step = -(-batch // workers)
            tasks = [
                (ebno_db, pkey, frames + lo, min(step, batch - lo))
                for lo in range(0, batch, step)
            ]
            chunks = list(executor.map(_worker_task, tasks))
        # Scan in frame order and truncate at the exact frame that reaches the
        # error target, so the stop point never depends on batching or workers.
        for err in np.concatenate(chunks):
            frames += 1
            if err:
                bit_errors += int(err)
                frame_errors += 1
                if frame_errors >= min_fe:
                    break
    elapsed = time.perf_counter() - t0
    return SimPoint(
        ebno_db=float(ebno_db),
        frames=frames,
        bit_errors=bit_errors,
        frame_errors=frame_errors,
        ber=bit_errors / (frames * pipe.K),
        fer=frame_errors / frames,
        elapsed_seconds=elapsed,
        master_seed=pipe.master_seed,
        point_key=pkey,
    )


def run_point(cfg: SimConfig, ebno_db: float, workers: int = 1) -> SimPoint:
    """Measure a single Eb/N0 point under the config's stop rule."""
    pipe = _build_pipeline(cfg)
    if workers <= 1:
        return _measure_point(pipe, ebno_db, cfg.min_frame_errors, cfg.max_frames, 1, None)
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(pipe,)) as pool:
        return _measure_point(pipe, ebno_db, cfg.min_frame_errors, cfg.max_frames,
                              workers, pool)


def _metadata_lines(cfg: SimConfig) -> list[str]:
    spec = cfg.spec
    meta = {
        "K": spec.K,
        "M": spec.M,
        "N": spec.N,
        "construction": cfg.construction,
        "crc": cfg.crc_name or "none",
        "decoder": cfg.decoder,
        "design_snr_db": repr(spec.design_snr_db),
        "ebno_grid_db": " ".join(repr(v) for v in cfg.ebno_grid_db),
        "even_rule": cfg.even_rule,
        "list_size": cfg.list_size,
        "master_seed": cfg.master_seed,
        "max_frames": cfg.max_frames,
        "min_frame_errors": cfg.min_frame_errors,
        "n": spec.n,
        "noiseless": cfg.noiseless,
        "shortening": cfg.shortening,
    }
    return [f"# {key}={meta[key]}" for key in sorted(meta)]


_CSV_COLUMNS = "ebno_db,frames,bit_errors,frame_errors,ber,fer"


def _csv_row(pt: SimPoint) -> str:
    return (f"{pt.ebno_db!r},{pt.frames},{pt.bit_errors},{pt.frame_errors},"
            f"{pt.ber!r},{pt.fer!r}")


def run_sweep(cfg: SimConfig, out=None, workers: int = 1):
    """Measure every grid point; returns (points, csv_text).

    When out is given the CSV streams to that path, header first, one row per
    completed point; an unwritable path therefore fails before any simulation.
    """
    pipe = _build_pipeline(cfg)
    header = _metadata_lines(cfg) + [_CSV_COLUMNS]
    fh = open(out, "w", encoding="utf-8") if out is not None else None
    try:
        if fh is not None:
            fh.write("\n".join(header) + "\n")
            fh.flush()
        pool = None
        if workers > 1:
            pool = ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                       initargs=(pipe,))
        try:
            points = []
            rows = []
            for ebno in cfg.ebno_grid_db:
                pt = _measure_point(pipe, ebno, cfg.min_frame_errors, cfg.max_frames,
                                    workers, pool)
                points.append(pt)
                rows.append(_csv_row(pt))
                if fh is not None:
                    fh.write(rows[-1] + "\n")
                    fh.flush()
        finally:
            if pool is not None:
                pool.shutdown()
    finally:
        if fh is not None:
            fh.close()
    csv_text = "\n".join(header + rows) + "\n"
    return points, csv_text


def presets() -> dict:
    """Named experiment configurations, full-scale and desk-scale."""
    full_grid = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0)
    desk_grid = (1.0, 2.0, 3.0, 4.0, 5.0)
    table = {
        "fig6": SimConfig(
            spec=CodeSpec(n=9, M=320, K=160, design_snr_db=full_grid[0]),
            ebno_grid_db=full_grid, construction="nupga", shortening="last",
            decoder="sc", master_seed=2024,
        ),
        "fig7": SimConfig(
            spec=CodeSpec(n=9, M=400, K=200, design_snr_db=full_grid[0]),
            ebno_grid_db=full_grid, construction="nupga", shortening="last",
            decoder="scl", list_size=16, master_seed=2024,
        ),
        "fig8": SimConfig(
            spec=CodeSpec(n=9, M=400, K=50, design_snr_db=full_grid[0], crc_bits=24),
            ebno_grid_db=full_grid, construction="nupga", shortening="last",
            decoder="cascl", list_size=16, crc_name="crc24", master_seed=2024,
        ),
        "fig6-desk": SimConfig(
            spec=CodeSpec(n=6, M=48, K=24, design_snr_db=desk_grid[0]),
            ebno_grid_db=desk_grid, construction="nupga", shortening="last",
            decoder="sc", max_frames=200_000, master_seed=2024,
        ),
        "fig7-desk": SimConfig(
            spec=CodeSpec(n=6, M=48, K=24, design_snr_db=desk_grid[0]),
            ebno_grid_db=desk_grid, construction="nupga", shortening="last",
            decoder="scl", list_size=16, max_frames=100_000, master_seed=2024,
        ),
        "fig8-desk": SimConfig(
            spec=CodeSpec(n=6, M=48, K=16, design_snr_db=desk_grid[0], crc_bits=8),
            ebno_grid_db=desk_grid, construction="nupga", shortening="last",
            decoder="cascl", list_size=16, crc_name="crc8",
            max_frames=100_000, master_seed=2024,
        ),
    }
    return table


# Flat key=value config files. Every key has exactly one meaning; unknown keys
# are rejected so a typo cannot silently fall back to a default.
_CONFIG_KEYS = (
    "preset", "n", "m", "k", "design_snr_db", "construction", "shortening",
    "even_rule", "decoder", "list_size", "crc", "ebno_grid_db",
    "min_frame_errors", "max_frames", "master_seed", "noiseless",
)


def parse_config_file(path) -> dict:
    """Read a flat key=value file; '#' starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(
                    f"{path}:{lineno}: unknown key {key!r}; known keys: "
                    f"{', '.join(_CONFIG_KEYS)}"
                )
            if key in values:
                raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
            values[key] = value
    return values


def config_to_raw(cfg: SimConfig) -> dict:
    """Flatten a SimConfig into config-file string values (preset expansion)."""
    return {
        "n": str(cfg.spec.n),
        "m": str(cfg.spec.M),
        "k": str(cfg.spec.K),
        "design_snr_db": repr(cfg.spec.design_snr_db),
        "construction": cfg.construction,
        "shortening": cfg.shortening,
        "even_rule": cfg.even_rule,
        "decoder": cfg.decoder,
        "list_size": str(cfg.list_size),
        "crc": cfg.crc_name or "none",
        "ebno_grid_db": ",".join(repr(v) for v in cfg.ebno_grid_db),
        "min_frame_errors": str(cfg.min_frame_errors),
        "max_frames": str(cfg.max_frames),
        "master_seed": str(cfg.master_seed),
        "noiseless": "true" if cfg.noiseless else "false",
    }


def _parse_bool(key: str, value: str) -> bool:
    low = value.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"{key} must be a boolean, got {value!r}")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{key} must be an integer, got {value!r}") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"{key} must be a number, got {value!r}") from None


def assemble_config(raw: dict) -> SimConfig:
    """Build a validated SimConfig from raw string values.

    Mandatory keys: n, m, k, ebno_grid_db. design_snr_db defaults to the
    lowest grid point. The crc key implies spec.crc_bits.
    """
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in ("n", "m", "k", "ebno_grid_db"):
        if key not in raw:
            raise ValueError(f"missing required config key {key!r}")
    grid = tuple(
        _parse_float("ebno_grid_db", part)
        for part in raw["ebno_grid_db"].replace(",", " ").split()
    )
    if not grid:
        raise ValueError("ebno_grid_db must list at least one value")
    design = (_parse_float("design_snr_db", raw["design_snr_db"])
              if "design_snr_db" in raw else min(grid))
    crc_name = raw.get("crc", "none").lower()
    if crc_name in ("", "none"):
        crc_name = None
        crc_bits = 0
    elif crc_name in CRC_REGISTRY:
        crc_bits = CRC_REGISTRY[crc_name].bits
    else:
        raise ValueError(f"crc must be 'none' or one of {sorted(CRC_REGISTRY)}")
    spec = CodeSpec(
        n=_parse_int("n", raw["n"]),
        M=_parse_int("m", raw["m"]),
        K=_parse_int("k", raw["k"]),
        design_snr_db=design,
        crc_bits=crc_bits,
    )
    return SimConfig(
        spec=spec,
        ebno_grid_db=grid,
        construction=raw.get("construction", "ga"),
        shortening=raw.get("shortening", "none" if spec.M == spec.N else "last"),
        even_rule=raw.get("even_rule", "sum"),
        decoder=raw.get("decoder", "sc"),
        list_size=_parse_int("list_size", raw.get("list_size", "1")),
        crc_name=crc_name,
        min_frame_errors=_parse_int("min_frame_errors", raw.get("min_frame_errors", "100")),
        max_frames=_parse_int("max_frames", raw.get("max_frames", "1000000")),
        master_seed=_parse_int("master_seed", raw.get("master_seed", "0")),
        noiseless=_parse_bool("noiseless", raw.get("noiseless", "false")),
    )
