"""Alternating period series: closed forms, tails, bounds, counting."""

from fractions import Fraction

import pytest

from buildingkit import period
from buildingkit.coxeter import GrowthSeries, build_affine_system, growth_coefficients
from buildingkit.errors import InvalidTypeError

# closed forms frozen from the classical finite length polynomials evaluated
# at t = -1/q_F with the geometric exponent factors, independently of the
# package's own finite enumeration
FROZEN_CLOSED = {
    ("A", 1): {2: Fraction(1, 3), 3: Fraction(1, 2), 4: Fraction(3, 5),
               5: Fraction(2, 3), 7: Fraction(3, 4), 8: Fraction(7, 9),
               9: Fraction(4, 5)},
    ("A", 2): {2: Fraction(1, 3), 3: Fraction(7, 16), 4: Fraction(13, 25),
               5: Fraction(7, 12)},
    ("A", 3): {2: Fraction(5, 27), 3: Fraction(5, 16), 4: Fraction(51, 125),
               5: Fraction(13, 27)},
    ("C", 2): {2: Fraction(5, 27), 3: Fraction(5, 14), 4: Fraction(153, 325),
               5: Fraction(104, 189)},
    ("G", 2): {2: Fraction(7, 33), 3: Fraction(91, 244),
               4: Fraction(2457, 5125), 5: Fraction(868, 1563)},
}


def _series(family, rank, truncation):
    return growth_coefficients(build_affine_system(family, rank), truncation)


@pytest.mark.parametrize("q", sorted(FROZEN_CLOSED[("A", 1)]))
def test_rank1_closed_form(q):
    value = period.period_closed_form("A", 1, q)
    assert value == FROZEN_CLOSED[("A", 1)][q]
    assert value == Fraction(q - 1, q + 1)


@pytest.mark.parametrize("key", sorted(FROZEN_CLOSED))
def test_closed_form_grid(key):
    for q, expected in FROZEN_CLOSED[key].items():
        assert period.period_closed_form(*key, q) == expected


def test_series_first_terms():
    # S_0 = 1, S_1 = 1 - (d+1)/q_F, exactly
    assert period.period_series(_series("A", 1, 1), 3) == [
        Fraction(1), Fraction(1, 3)]
    assert period.period_series(_series("A", 2, 2), 3) == [
        Fraction(1), Fraction(0), Fraction(2, 3)]


def test_partial_sums_and_tail_frozen():
    res = period.evaluate_period("A", 2, 3)
    assert res.q_E == 9
    assert res.partial_sums[-1] == Fraction(25835, 59049)
    assert res.tail == Fraction(40, 1003833)
    diff = abs(res.closed_form - res.partial_sums[-1])
    assert diff == Fraction(17, 944784)
    assert diff <= res.tail

    res = period.evaluate_period("G", 2, 4)
    assert res.partial_sums[-1] == Fraction(8043249, 16777216)
    assert res.tail == Fraction(29, 41943040)
    assert abs(res.closed_form - res.partial_sums[-1]) <= res.tail


def test_tail_bound_rank1_is_geometric():
    # constant coefficients 2: ratio 1/q_F, bound 2 q^-K (1/q)/(1 - 1/q)
    series = _series("A", 1, 6)
    assert period.tail_bound(series, 2) == Fraction(2, 2**6)
    assert period.tail_bound(series, 3) == Fraction(1, 3**6)


def test_tail_bound_rejects_nondecaying_series():
    bad = GrowthSeries(family="A", rank=1, truncation=4,
                       coefficients=(1, 3, 9, 27, 81), source="enumerated")
    with pytest.raises(ValueError):
        period.tail_bound(bad, 2)


def test_theorem_bounds_applicability():
    res = period.evaluate_period("A", 1, 3)
    rep = period.check_theorem_bounds(res)
    assert rep.applicable and rep.holds
    assert rep.lower == Fraction(1, 3)
    assert rep.upper == 1
    assert 1 > rep.value > rep.lower

    # q_F <= d: out of the theorem's range, vacuously fine
    res = period.evaluate_period("A", 3, 3)
    rep = period.check_theorem_bounds(res)
    assert not rep.applicable and rep.holds
    assert rep.lower is None

    # boundary case q_F = d + 1 gives lower bound 0
    res = period.evaluate_period("A", 3, 4)
    rep = period.check_theorem_bounds(res)
    assert rep.applicable and rep.holds
    assert rep.lower == 0


def test_counting_bound_rows():
    rows = period.check_counting_bound(_series("A", 2, 8), 2)
    assert [r.k for r in rows] == list(range(1, 9))
    assert all(r.ok and r.slack == r.bound - r.coefficient for r in rows)
    assert rows[0].bound == 3 and rows[0].coefficient == 3
    # rank 1 is the equality case at every k
    rows = period.check_counting_bound(_series("A", 1, 8), 1)
    assert all(r.slack == 0 for r in rows)


def test_sphere_size():
    series = _series("A", 2, 4)
    assert period.sphere_size(series, 3, 0) == 1
    assert period.sphere_size(series, 3, 2) == 54
    with pytest.raises(ValueError):
        period.sphere_size(series, 3, 5)


def test_l1_diagnostic_converges_on_grid():
    for key in sorted(FROZEN_CLOSED):
        series = _series(*key, 8)
        for q in (2, 3):
            rep = period.l1_diagnostic(series, q)
            assert rep.converges
            sums = rep.partial_sums
            assert all(b >= a for a, b in zip(sums, sums[1:]))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27])
def test_prime_powers_accepted(q):
    period._require_prime_power(q)


@pytest.mark.parametrize("q", [-3, 0, 1, 6, 10, 12, 15])
def test_non_prime_powers_rejected(q):
    with pytest.raises(InvalidTypeError):
        period._require_prime_power(q)


def test_result_json_uses_num_den():
    data = period.evaluate_period("A", 1, 3, truncation=2).to_json_dict()
    assert data["closed_form"] == {"num": 1, "den": 2}
    assert data["partial_sums"][0] == {"num": 1, "den": 1}
    assert data["schema_version"] == 1
    assert data["q_E"] == 9


def test_series_reuse_must_match_type():
    series = _series("A", 1, 4)
    with pytest.raises(ValueError):
        period.evaluate_period("A", 2, 3, series=series)
