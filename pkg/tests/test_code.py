import numpy as np
import pytest

from vtcodec.bits import BitWord
from vtcodec.code import (
    VtEncoder,
    VtParams,
    checksum,
    codebook,
    encode,
    enumerate_messages,
    enumerate_vt_set,
    extract_message,
    is_codeword,
    split_codebook,
)
from vtcodec.errors import BitValueError, LengthError, MessageLengthError


def weighted_sum_oracle(text: str, m: int) -> int:
    # independent route: numpy dot of positions with bits
    bits = np.array([int(c) for c in text])
    return int(np.arange(1, len(bits) + 1) @ bits) % m


P10 = VtParams(10, 0)
P20 = VtParams(20, 0)


class TestParams:
    def test_derived_quantities(self):
        assert P10.m == 21
        assert P10.y == 5
        assert P10.parity_positions == (1, 2, 4, 8, 10)
        assert P10.message_positions == (3, 5, 6, 7, 9)

    @pytest.mark.parametrize("n,y", [(10, 5), (20, 14), (68, 60), (120, 112)])
    def test_message_lengths_match_published_code_sizes(self, n, y):
        params = VtParams(n)
        assert params.y == y
        assert len(params.parity_positions) == n - y
        positions = set(params.parity_positions) | set(params.message_positions)
        assert positions == set(range(1, n + 1))
        assert not set(params.parity_positions) & set(params.message_positions)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            VtParams(2)
        with pytest.raises(ValueError):
            VtParams(10, a=21)
        with pytest.raises(ValueError):
            VtParams(10, a=-1)


class TestChecksum:
    def test_worked_example_word(self):
        assert checksum("0010101111", P10) == 0
        assert weighted_sum_oracle("0010101111", 21) == 0

    def test_all_zero(self):
        assert checksum("0000000000", P10) == 0

    def test_flipped_position_six(self):
        assert checksum("0010111111", P10) == 6

    def test_matches_oracle_on_random_words(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            length = int(rng.integers(0, 30))
            word = "".join(str(b) for b in rng.integers(0, 2, length))
            assert checksum(word, P20) == weighted_sum_oracle(word, 41)

    def test_single_flip_linearity(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            bits = list(rng.integers(0, 2, 20))
            i = int(rng.integers(0, 20))
            base = checksum(bits, P20)
            bits[i] ^= 1
            delta = (i + 1) if bits[i] == 1 else -(i + 1)
            assert checksum(bits, P20) == (base + delta) % 41


class TestMembership:
    def test_paper_codeword(self):
        assert is_codeword("0010101111", P10)

    def test_all_zero_word(self):
        assert is_codeword("0000000000", P10)

    def test_single_flip_leaves_code(self):
        assert not is_codeword("0010101110", P10)

    def test_wrong_length_is_not_a_codeword(self):
        assert not is_codeword("001010111", P10)


class TestEncode:
    def test_worked_example(self):
        assert encode("11011", P10).text == "0010101111"

    def test_zero_message(self):
        assert encode("00000", P10).text == "0000000000"

    def test_random_messages_land_in_code(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            u = BitWord(rng.integers(0, 2, 14))
            assert is_codeword(encode(u, P20), P20)

    def test_nonzero_residue_target(self):
        params = VtParams(10, a=5)
        rng = np.random.default_rng(3)
        for _ in range(50):
            word = encode(BitWord(rng.integers(0, 2, 5)), params)
            assert checksum(word, params) == 5

    def test_wrong_message_length(self):
        with pytest.raises(MessageLengthError):
            encode("1101", P10)

    def test_injective_and_roundtrip_exhaustive_n20(self):
        seen = set()
        for u in enumerate_messages(P20):
            v = encode(u, P20)
            assert is_codeword(v, P20)
            assert extract_message(v, P20) == u
            seen.add(v.bits)
        assert len(seen) == 2 ** 14

    def test_n10_codebook_has_32_distinct_codewords(self):
        book = codebook(P10)
        assert len(set(w.bits for w in book)) == 32
        assert all(is_codeword(w, P10) for w in book)


class TestExtract:
    def test_worked_example_inverse(self):
        assert extract_message("0010101111", P10).text == "11011"

    def test_zero_word(self):
        assert extract_message("0000000000", P10).text == "00000"

    def test_wrong_length(self):
        with pytest.raises(LengthError):
            extract_message("00000", P10)


class TestVtSetEnumeration:
    def test_full_set_size_near_expected_density(self):
        # |VT_{a,m}(n)| is within one of 2^n / m for these small codes
        vt8 = enumerate_vt_set(VtParams(8, 0))
        assert abs(len(vt8) - 2 ** 8 / 17) <= 1
        assert all(is_codeword(w, VtParams(8, 0)) for w in vt8)

    def test_contains_encoder_range(self):
        full = set(w.bits for w in enumerate_vt_set(P10))
        assert set(w.bits for w in codebook(P10)) <= full


class TestSplit:
    def test_disjoint_80_20(self):
        train, test = split_codebook(P20, 0.8, seed=11)
        assert len(train) == 13107
        assert len(test) == 3277
        assert not set(w.bits for w in train) & set(w.bits for w in test)

    def test_same_seed_same_partition(self):
        a = split_codebook(P10, 0.8, seed=5)
        b = split_codebook(P10, 0.8, seed=5)
        assert a == b


class TestBitWord:
    def test_text_roundtrip(self):
        w = BitWord.from_text("0101")
        assert w.text == "0101"
        assert len(w) == 4
        assert list(w) == [0, 1, 0, 1]

    def test_rejects_non_bits(self):
        with pytest.raises(BitValueError):
            BitWord([0, 2])
        with pytest.raises(BitValueError):
            BitWord.from_text("01x")

    def test_immutable_and_hashable(self):
        w = BitWord([1, 0])
        with pytest.raises(AttributeError):
            w.bits = (0,)
        assert hash(w) == hash(BitWord("10"))

    def test_slicing_returns_bitword(self):
        assert BitWord("10110")[1:3] == BitWord("01")


class TestEncoderEstimator:
    def test_transform_roundtrip(self):
        enc = VtEncoder(n=10)
        words = enc.transform(["11011", "00000"])
        assert [w.text for w in words] == ["0010101111", "0000000000"]
        back = enc.inverse_transform(words)
        assert [u.text for u in back] == ["11011", "00000"]

    def test_get_set_params(self):
        enc = VtEncoder(n=10, a=3)
        assert enc.get_params() == {"n": 10, "a": 3}
        enc.set_params(a=0)
        assert enc.a == 0
        with pytest.raises(ValueError):
            enc.set_params(bogus=1)
