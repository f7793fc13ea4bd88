import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasspixel.calibration import MeasuredSample
from grasspixel.colorcore import delta_e00
from grasspixel.errors import ValidationError
from grasspixel.repeatability import analyze_repeats

POS = (1.2, 1.0, 0.0)
CENTER = np.array([52.0, -18.0, 24.0])


def group(labs, length=7.5, pos=POS):
    return [MeasuredSample(length, lab, pos, k + 1) for k, lab in enumerate(labs)]


def symmetric_labs(radius=0.4):
    # five +/- pairs around the center: mean is exactly the center
    offs = [np.array(v, float) * radius for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, -1))]
    return [CENTER + o for o in offs] + [CENTER - o for o in offs]


def outlier_labs(target=5.0):
    # nine identical repetitions plus one shifted along a* so that its dE00
    # to the 10-sample mean is close to the target
    def de_for(shift):
        labs = [CENTER] * 9 + [CENTER + (0, shift, 0)]
        return delta_e00(np.mean(labs, axis=0), labs[-1]), labs

    lo, hi = 0.0, 100.0
    for _ in range(100):
        mid = (lo + hi) / 2
        if de_for(mid)[0] < target:
            lo = mid
        else:
            hi = mid
    return de_for(hi)[1]


class TestAnalyze:
    def test_identical_repetitions(self):
        rep = analyze_repeats(group([CENTER] * 10))
        g = rep.groups[0]
        assert (g.n_within, g.n_repetitions) == (10, 10)
        assert max(g.delta_e00) == 0.0

    def test_symmetric_reference_is_center(self):
        g = analyze_repeats(group(symmetric_labs())).groups[0]
        np.testing.assert_allclose(tuple(g.reference), CENTER, atol=1e-12)
        assert g.n_within == 10

    def test_one_outlier(self):
        labs = outlier_labs()
        g = analyze_repeats(group(labs)).groups[0]
        assert g.delta_e00[-1] == pytest.approx(5.0, abs=1e-6)
        assert (g.n_within, g.n_repetitions) == (9, 10)

    def test_reference_is_per_channel_mean(self):
        rng = np.random.default_rng(11)
        labs = CENTER + rng.normal(0, 0.5, size=(10, 3))
        g = analyze_repeats(group(list(labs))).groups[0]
        assert tuple(g.reference) == tuple(labs.mean(axis=0))

    def test_groups_split_by_position_and_length(self):
        samples = group([CENTER] * 3, 0.0) + group([CENTER] * 3, 15.0) + group([CENTER] * 2, 0.0, (1.0, 1.0, 30.0))
        rep = analyze_repeats(samples)
        assert len(rep.groups) == 3 and rep.n_total == 8

    def test_single_repetition_rejected(self):
        with pytest.raises(ValidationError):
            analyze_repeats(group([CENTER]))

    def test_bad_tolerance(self):
        with pytest.raises(ValidationError):
            analyze_repeats(group([CENTER] * 2), tolerance=0)

    def test_report_dict_and_csv(self, tmp_path):
        rep = analyze_repeats(group(outlier_labs()))
        d = rep.to_dict()
        assert (d["n_within"], d["n_total"], d["tolerance"]) == (9, 10, 2.0)
        path = tmp_path / "d.csv"
        rep.write_deltas_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "h,d,theta,length_mm,repetition,delta_e00,within"
        assert len(lines) == 11 and lines[-1].endswith(",0")


labs10 = st.lists(
    st.tuples(st.floats(20, 80), st.floats(-40, 40), st.floats(-40, 40)), min_size=2, max_size=10
)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(labs10, st.randoms(use_true_random=False))
    def test_order_invariant(self, labs, rnd):
        a = analyze_repeats(group(labs)).groups[0]
        shuffled = list(labs)
        rnd.shuffle(shuffled)
        b = analyze_repeats(group(shuffled)).groups[0]
        np.testing.assert_allclose(tuple(a.reference), tuple(b.reference), atol=1e-9)
        assert a.n_within == b.n_within

    @settings(max_examples=60, deadline=None)
    @given(labs10)
    def test_adding_the_mean_keeps_reference(self, labs):
        ref = np.mean(labs, axis=0)
        g = analyze_repeats(group(list(labs) + [ref])).groups[0]
        np.testing.assert_allclose(tuple(g.reference), ref, atol=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(labs10, st.floats(0.1, 10), st.floats(0.1, 10))
    def test_count_monotone_in_tolerance(self, labs, t1, t2):
        lo, hi = sorted((t1, t2))
        a = analyze_repeats(group(labs), lo).n_within
        b = analyze_repeats(group(labs), hi).n_within
        assert a <= b
