import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dumpgen import oracle_linreg, oracle_pearson
from fbont.stats import (
    ConstantInputError,
    DegenerateFitError,
    InsufficientDataError,
    StudyRow,
    linreg,
    pearson_r,
    run_study,
)


def random_instance(rng, n=None):
    n = n or rng.randint(3, 40)
    xs = [rng.uniform(-50, 50) for _ in range(n)]
    ys = [2.5 * x + rng.gauss(0, 10) for x in xs]
    if len(set(xs)) == 1 or len(set(ys)) == 1:
        ys[0] += 1.0
    return xs, ys


class TestPearson:
    def test_perfect_positive(self):
        assert pearson_r([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson_r([1, 2, 3], [6, 4, 2]) == pytest.approx(-1.0)

    def test_hundred_random_instances_match_oracle(self):
        rng = random.Random(101)
        for _ in range(100):
            xs, ys = random_instance(rng)
            mine = pearson_r(xs, ys)
            ref = oracle_pearson(xs, ys)
            assert mine == pytest.approx(ref, rel=1e-12, abs=1e-15)

    def test_constant_input_error(self):
        with pytest.raises(ConstantInputError):
            pearson_r([1, 1, 1], [1, 2, 3])
        with pytest.raises(ConstantInputError):
            pearson_r([1, 2, 3], [5, 5, 5])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pearson_r([1, 2], [1, 2, 3])

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            pearson_r([1], [2])

    def test_bounded(self):
        rng = random.Random(7)
        for _ in range(50):
            xs, ys = random_instance(rng)
            assert abs(pearson_r(xs, ys)) <= 1 + 1e-12

    @given(st.integers(5, 15), st.integers(0, 10_000))
    @settings(max_examples=50)
    def test_symmetry(self, n, seed):
        rng = random.Random(seed)
        xs, ys = random_instance(rng, n)
        assert pearson_r(xs, ys) == pytest.approx(pearson_r(ys, xs), rel=1e-12)


class TestLinreg:
    def test_exact_fit(self):
        slope, intercept = linreg([0, 1], [1, 3])
        assert (slope, intercept) == (2.0, 1.0)

    def test_constant_y_gives_zero_slope(self):
        slope, _ = linreg([1, 2, 3], [4, 4, 4])
        assert slope == 0.0

    def test_constant_x_degenerate(self):
        with pytest.raises(DegenerateFitError):
            linreg([2, 2, 2], [1, 2, 3])

    def test_hundred_random_instances_match_oracle(self):
        rng = random.Random(202)
        for _ in range(100):
            xs, ys = random_instance(rng)
            slope, intercept = linreg(xs, ys)
            ref_slope, ref_intercept = oracle_linreg(xs, ys)
            assert slope == pytest.approx(ref_slope, rel=1e-9)
            assert intercept == pytest.approx(ref_intercept, rel=1e-9, abs=1e-9)

    def test_billion_scale_counts_stay_exact(self):
        # integer counts at dump scale are exact in doubles; fsum keeps the
        # accumulated moments exact too
        xs = [1.0, 2.0, 3.0, 4.0]
        ys = [1_429_443_085.0, 788_652_672.0, 266_321_867.0, 209_244_812.0]
        slope, intercept = linreg(xs, ys)
        ref_slope, ref_intercept = oracle_linreg(xs, ys)
        assert slope == ref_slope
        assert intercept == ref_intercept


def study_rows():
    return [
        StudyRow("music", 209_244_812, 45.2),
        StudyRow("film", 17_319_142, 9.1),
        StudyRow("tv", 16_375_388, 8.4),
        StudyRow("location", 16_071_442, 7.9),
        StudyRow("zoo", 13_226, 1.5),
    ]


class TestRunStudy:
    def test_no_exclusions_equals_direct_computation(self):
        rows = study_rows()
        result = run_study(rows)
        xs = [r.complexity for r in rows]
        ys = [float(r.triple_count) for r in rows]
        assert result.pearson_r == pearson_r(xs, ys)
        assert (result.slope, result.intercept) == linreg(xs, ys)
        assert result.n == 5
        assert result.excluded == ()

    def test_outlier_exclusion_direction_matches_oracle(self):
        rows = study_rows()
        with_all = run_study(rows)
        without = run_study(rows, {"music"})
        xs = [r.complexity for r in rows if r.domain != "music"]
        ys = [float(r.triple_count) for r in rows if r.domain != "music"]
        assert without.pearson_r == pytest.approx(oracle_pearson(xs, ys), rel=1e-12)
        assert without.slope == pytest.approx(oracle_linreg(xs, ys)[0], rel=1e-12)
        assert without.excluded == ("music",)
        # the oracle also predicts which way r moves when the outlier drops
        all_xs = [r.complexity for r in rows]
        all_ys = [float(r.triple_count) for r in rows]
        predicted_shift = oracle_pearson(xs, ys) - oracle_pearson(all_xs, all_ys)
        actual_shift = without.pearson_r - with_all.pearson_r
        assert math.copysign(1, predicted_shift) == math.copysign(1, actual_shift)

    def test_permutation_invariance(self):
        rows = study_rows()
        rng = random.Random(4)
        for _ in range(5):
            shuffled = rows[:]
            rng.shuffle(shuffled)
            assert run_study(shuffled) == run_study(rows)

    def test_affine_invariance_of_r_and_scale_covariance_of_slope(self):
        rows = study_rows()
        base = run_study(rows)
        scaled = run_study(
            [StudyRow(r.domain, r.triple_count * 10, r.complexity) for r in rows]
        )
        assert scaled.pearson_r == pytest.approx(base.pearson_r, rel=1e-12)
        assert scaled.slope == pytest.approx(base.slope * 10, rel=1e-12)

    def test_insufficient_rows_after_exclusion(self):
        with pytest.raises(InsufficientDataError):
            run_study(study_rows()[:2], {"music"})

    def test_unknown_exclusions_not_recorded(self):
        result = run_study(study_rows(), {"nonexistent"})
        assert result.excluded == ()
        assert result.n == 5
