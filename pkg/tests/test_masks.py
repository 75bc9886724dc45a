import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avrobust.masks import (
    BerFrame,
    BerUtt,
    Contiguous,
    Empty,
    Explicit,
    Full,
    Rate,
    Utterance,
    apply_mask,
    expected_keep,
    is_deterministic,
    sample_mask,
)


def make_utt(n=4, d_a=3, d_v=2, seed=0):
    rng = np.random.default_rng(seed)
    return Utterance(
        audio=rng.normal(size=(n, d_a)),
        video=rng.normal(size=(n, d_v)),
        video_present=np.ones(n, dtype=bool),
        transcript=(1, 2),
    )


DETERMINISTIC_SPECS = [
    Full(),
    Empty(),
    Explicit((1, 0, 1, 1, 0, 1, 1, 1)),
    Contiguous(0.0, 0.5),
    Contiguous(0.25, 0.75),
    Rate(0.5),
    Rate(0.0),
]


class TestSpecValidation:
    def test_bad_probability_rejected_at_construction(self):
        with pytest.raises(ValueError):
            BerUtt(1.5)
        with pytest.raises(ValueError):
            BerFrame(-0.1)

    def test_contiguous_order_enforced(self):
        with pytest.raises(ValueError):
            Contiguous(0.75, 0.25)

    def test_rate_requires_integer_reciprocal(self):
        with pytest.raises(ValueError):
            Rate(0.3)
        assert Rate(1 / 128).period == 128
        assert Rate(1.0).period == 1

    def test_explicit_bits_validated(self):
        with pytest.raises(ValueError):
            Explicit((0, 2))
        with pytest.raises(ValueError):
            Explicit(())


class TestSampleMask:
    def test_rate_half_drops_even_frames(self):
        rng = np.random.default_rng(0)
        assert sample_mask(Rate(0.5), 8, rng).tolist() == [1, 0, 1, 0, 1, 0, 1, 0]

    def test_contiguous_first_half(self):
        rng = np.random.default_rng(0)
        assert sample_mask(Contiguous(0.0, 0.5), 8, rng).tolist() == [0, 0, 0, 0, 1, 1, 1, 1]

    def test_rate_one_drops_everything(self):
        rng = np.random.default_rng(0)
        assert sample_mask(Rate(1.0), 4, rng).tolist() == [0, 0, 0, 0]

    def test_berutt_probability_one_keeps_all(self):
        rng = np.random.default_rng(0)
        assert sample_mask(BerUtt(1.0), 3, rng).tolist() == [1, 1, 1]

    def test_berutt_probability_zero_drops_all(self):
        rng = np.random.default_rng(0)
        assert sample_mask(BerUtt(0.0), 3, rng).tolist() == [0, 0, 0]

    def test_berutt_is_all_or_nothing(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            m = sample_mask(BerUtt(0.5), 6, rng)
            assert m.sum() in (0, 6)

    def test_explicit_length_mismatch_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            sample_mask(Explicit((1, 0)), 3, rng)

    @pytest.mark.parametrize("spec", DETERMINISTIC_SPECS)
    def test_deterministic_specs_ignore_rng(self, spec):
        lengths = (8,) if isinstance(spec, Explicit) else (8, 16)
        for n in lengths:
            a = sample_mask(spec, n, np.random.default_rng(1))
            b = sample_mask(spec, n, np.random.default_rng(999))
            assert (a == b).all()
            assert (a == expected_keep(spec, n)).all()


class TestExpectedKeep:
    def test_berframe_constant_vector(self):
        assert expected_keep(BerFrame(0.25), 3).tolist() == [0.25, 0.25, 0.25]

    def test_berutt_two_point_mixture(self):
        assert expected_keep(BerUtt(0.5), 2).tolist() == [0.5, 0.5]

    def test_contiguous_middle(self):
        assert expected_keep(Contiguous(0.25, 0.75), 8).tolist() == [1, 1, 0, 0, 0, 0, 1, 1]


class TestApplyMask:
    def test_full_mask_is_identity(self):
        utt = make_utt()
        out = apply_mask(utt, np.ones(4, dtype=int))
        assert np.array_equal(out.video, utt.video)
        assert out.video_present.all()
        assert np.array_equal(out.audio, utt.audio)
        assert out.transcript == utt.transcript

    def test_empty_mask_zeroes_everything(self):
        utt = make_utt()
        out = apply_mask(utt, np.zeros(4, dtype=int))
        assert not out.video.any()
        assert not out.video_present.any()
        assert np.array_equal(out.audio, utt.audio)

    def test_partial_mask(self):
        utt = make_utt(n=2)
        out = apply_mask(utt, np.array([1, 0]))
        assert np.array_equal(out.video[0], utt.video[0])
        assert not out.video[1].any()
        assert out.video_present.tolist() == [True, False]

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            apply_mask(make_utt(n=4), np.ones(3, dtype=int))

    @settings(max_examples=100)
    @given(st.lists(st.integers(0, 1), min_size=1, max_size=10),
           st.lists(st.integers(0, 1), min_size=1, max_size=10),
           st.integers(0, 2**32 - 1))
    def test_idempotent_and_composes_by_and(self, bits1, bits2, seed):
        n = min(len(bits1), len(bits2))
        m1 = np.array(bits1[:n])
        m2 = np.array(bits2[:n])
        utt = make_utt(n=n, seed=seed % 1000)

        once = apply_mask(utt, m1)
        twice = apply_mask(once, m1)
        assert np.array_equal(once.video, twice.video)
        assert np.array_equal(once.video_present, twice.video_present)

        chained = apply_mask(apply_mask(utt, m1), m2)
        direct = apply_mask(utt, m1 & m2)
        assert np.array_equal(chained.video, direct.video)
        assert np.array_equal(chained.video_present, direct.video_present)


class TestUtteranceInvariants:
    def test_frame_count_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Utterance(np.zeros((3, 2)), np.zeros((2, 2)), np.ones(3, dtype=bool), (1,))

    def test_absent_frame_with_nonzero_video_rejected(self):
        video = np.ones((2, 2))
        with pytest.raises(ValueError):
            Utterance(np.zeros((2, 2)), video, np.array([True, False]), (1,))

    def test_is_deterministic(self):
        assert is_deterministic(Full())
        assert is_deterministic(Rate(0.5))
        assert not is_deterministic(BerUtt(0.5))
        assert not is_deterministic(BerFrame(0.5))


class TestBerFrameStatistics:
    def test_monte_carlo_mean_converges(self):
        # Pooled keep rate over 60k draws; 3-sigma band around 0.6.
        rng = np.random.default_rng(2024)
        draws = np.concatenate([sample_mask(BerFrame(0.6), 600, rng) for _ in range(100)])
        sigma = np.sqrt(0.6 * 0.4 / draws.size)
        assert abs(draws.mean() - 0.6) < 3 * sigma
