import numpy as np
import pytest

from polarkit.core import (
    BitClass,
    CodeSpec,
    FrozenMask,
    as_bits,
    bit_reversal_permutation,
    pack_bits,
    unpack_bits,
    xor_block,
)


def test_as_bits_accepts_binary_sequences():
    out = as_bits([0, 1, 1, 0])
    assert out.dtype == np.uint8
    assert out.tolist() == [0, 1, 1, 0]


def test_as_bits_rejects_non_binary():
    with pytest.raises(ValueError):
        as_bits([0, 2, 1])
    with pytest.raises(ValueError):
        as_bits([0.5, 1.0])


def test_as_bits_length_check():
    with pytest.raises(ValueError):
        as_bits([0, 1], length=3)


def test_pack_unpack_roundtrip():
    rng = np.random.default_rng(0)
    for size in (1, 7, 8, 9, 64, 130):
        bits = rng.integers(0, 2, size).astype(np.uint8)
        assert np.array_equal(unpack_bits(pack_bits(bits), size), bits)


def test_unpack_rejects_nonzero_padding():
    packed = pack_bits(np.ones(8, dtype=np.uint8))
    with pytest.raises(ValueError):
        unpack_bits(packed, 4)


def test_bit_reversal_known_order():
    assert bit_reversal_permutation(3).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]
    assert bit_reversal_permutation(1).tolist() == [0, 1]


def test_bit_reversal_is_involution():
    for n in range(1, 9):
        perm = bit_reversal_permutation(n)
        assert np.array_equal(perm[perm], np.arange(1 << n))


def test_xor_block():
    a = np.array([1, 0, 1, 1], dtype=np.uint8)
    b = np.array([1, 1, 0, 1], dtype=np.uint8)
    assert xor_block(a, b).tolist() == [0, 1, 1, 0]


def test_codespec_properties():
    spec = CodeSpec(n=5, M=24, K=12)
    assert spec.N == 32
    assert spec.rate == 0.5
    assert spec.info_bits_total == 12
    crc_spec = CodeSpec(n=5, M=24, K=12, crc_bits=8)
    assert crc_spec.info_bits_total == 20


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=0, M=1, K=1),
        dict(n=3, M=9, K=2),          # M > N
        dict(n=3, M=8, K=0),
        dict(n=3, M=8, K=9),          # K > M
        dict(n=3, M=8, K=6, crc_bits=4),  # K + crc > M
        dict(n=3, M=8, K=4, crc_bits=-1),
        dict(n=3, M=8, K=4, design_snr_db=float("inf")),
    ],
)
def test_codespec_rejects_bad_shapes(kwargs):
    with pytest.raises(ValueError):
        CodeSpec(**kwargs)


def test_frozen_mask_positions():
    classes = np.array(
        [BitClass.FROZEN_RELIABILITY, BitClass.INFO, BitClass.FROZEN_SHORTENED,
         BitClass.INFO],
        dtype=np.uint8,
    )
    mask = FrozenMask(classes)
    assert mask.info_positions.tolist() == [1, 3]
    assert mask.frozen_positions.tolist() == [0, 2]
    assert mask.shortened_positions.tolist() == [2]
    assert mask.info_count == 2


def test_frozen_mask_is_read_only():
    mask = FrozenMask(np.zeros(4, dtype=np.uint8))
    with pytest.raises(ValueError):
        mask.classes[0] = 1
