"""polarkit: polar-code construction, coding, decoding, and AWGN sweeps.

The pipeline composes left to right: build a code (construction), encode and
shorten (coding), map through the channel (channel), decode (decoder), and
measure error rates over a seeded grid (harness). Hot decode kernels live in
polarkit.kernels with a compiled backend and a pure Python fallback chosen at
import time; set POLARKIT_BACKEND=python|cython to force one.
"""

from .core import (
    BitClass,
    CodeSpec,
    FrozenMask,
    as_bits,
    bit_reversal_permutation,
    pack_bits,
    unpack_bits,
    xor_block,
)
from .construction import (
    Domain,
    ReliabilityVector,
    ShorteningPattern,
    bec_minus,
    bec_plus,
    bhattacharyya_construct,
    export_reliability_csv,
    ga_construct,
    nupga_construct,
    phi,
    phi_inv,
    select_frozen,
    shortening_pattern_last,
)
from .coding import (
    CRC_REGISTRY,
    Codeword,
    ConsistencyError,
    CrcSpec,
    assemble_source,
    crc_attach,
    crc_check,
    polar_encode,
    shorten_codeword,
)
from .channel import bpsk_awgn, frame_rng, llr_expand, noise_variance, point_key
from .decoder import ca_scl_decode, sc_decode, scl_decode
from .harness import (
    SimConfig,
    SimPoint,
    build_code,
    presets,
    run_point,
    run_sweep,
)
from .kernels import available_backends, get_backend

__version__ = "0.1.0"

__all__ = [
    "BitClass", "CodeSpec", "FrozenMask", "as_bits", "bit_reversal_permutation",
    "pack_bits", "unpack_bits", "xor_block",
    "Domain", "ReliabilityVector", "ShorteningPattern", "bec_minus", "bec_plus",
    "bhattacharyya_construct", "export_reliability_csv", "ga_construct",
    "nupga_construct", "phi", "phi_inv", "select_frozen", "shortening_pattern_last",
    "CRC_REGISTRY", "Codeword", "ConsistencyError", "CrcSpec", "assemble_source",
    "crc_attach", "crc_check", "polar_encode", "shorten_codeword",
    "bpsk_awgn", "frame_rng", "llr_expand", "noise_variance", "point_key",
    "ca_scl_decode", "sc_decode", "scl_decode",
    "SimConfig", "SimPoint", "build_code", "presets", "run_point", "run_sweep",
    "available_backends", "get_backend",
    "__version__",
]
