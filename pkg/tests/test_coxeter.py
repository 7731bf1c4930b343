"""Affine system construction, growth enumeration, finite-part data, Omega."""

import pytest

from buildingkit import coxeter
from buildingkit.coxeter import (INFINITE_ORDER, AffineMap,
                                 build_affine_system, epsilon_of_omega,
                                 exponents, growth_coefficients, omega_group,
                                 poincare_finite)
from buildingkit.errors import BudgetError, InvalidTypeError

# classical data, frozen independently of the implementation
N_POSITIVE_ROOTS = {
    ("A", 1): 1, ("A", 2): 3, ("A", 3): 6, ("A", 4): 10,
    ("B", 3): 9, ("C", 2): 4, ("C", 3): 9,
    ("D", 4): 12, ("D", 5): 20,
    ("E", 6): 36, ("E", 7): 63, ("E", 8): 120,
    ("F", 4): 24, ("G", 2): 6,
}

CLASSICAL_EXPONENTS = {
    ("A", 1): (1,), ("A", 2): (1, 2), ("A", 3): (1, 2, 3),
    ("A", 4): (1, 2, 3, 4),
    ("B", 3): (1, 3, 5), ("C", 2): (1, 3), ("C", 3): (1, 3, 5),
    ("D", 4): (1, 3, 3, 5), ("D", 5): (1, 3, 4, 5, 7),
    ("F", 4): (1, 5, 7, 11), ("G", 2): (1, 5),
}

# sphere sizes through K = 12, frozen from two independent oracles that agree:
# expansion of the classical finite length polynomial times the geometric
# factors of the exponents, and direct word-product enumeration at small k
GROWTH_K12 = {
    ("A", 1): (1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
    ("A", 2): (1, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 33, 36),
    ("A", 3): (1, 4, 10, 20, 34, 52, 74, 100, 130, 164, 202, 244, 290),
    ("C", 2): (1, 3, 5, 8, 11, 13, 16, 19, 21, 24, 27, 29, 32),
    ("G", 2): (1, 3, 5, 7, 9, 12, 15, 17, 19, 21, 24, 27, 29),
}

OMEGA_ORDERS = {
    ("A", 1): 2, ("A", 2): 3, ("A", 3): 4, ("A", 4): 5,
    ("B", 3): 2, ("C", 2): 2, ("C", 3): 2,
    ("D", 4): 4, ("D", 5): 4,
    ("E", 6): 3, ("E", 7): 2, ("E", 8): 1,
    ("F", 4): 1, ("G", 2): 1,
}


@pytest.mark.parametrize("family,rank", sorted(N_POSITIVE_ROOTS))
def test_construction_and_root_counts(family, rank):
    # build_affine_system itself asserts involutions and all pair orders
    system = build_affine_system(family, rank)
    assert system.n_positive_roots == N_POSITIVE_ROOTS[(family, rank)]
    m = system.coxeter_matrix
    assert len(m) == rank + 1
    for i in range(rank + 1):
        assert m[i][i] == 1
        for j in range(rank + 1):
            assert m[i][j] == m[j][i]
    assert len(system.generators) == rank + 1


def test_rank1_matrix_is_infinite_dihedral():
    system = build_affine_system("A", 1)
    assert INFINITE_ORDER == 0
    assert system.coxeter_matrix == ((1, INFINITE_ORDER), (INFINITE_ORDER, 1))


def test_rank2_triangle_groups():
    # affine C2 is the (4,4,2) triangle group, affine G2 the (6,3,2) one
    assert build_affine_system("C", 2).coxeter_matrix == (
        (1, 4, 2), (4, 1, 4), (2, 4, 1))
    assert build_affine_system("G", 2).coxeter_matrix == (
        (1, 2, 3), (2, 1, 6), (3, 6, 1))


def _word_oracle(family, rank, max_len):
    """Layer sizes by raw word products: length of w = first product reaching it."""
    system = build_affine_system(family, rank)
    table = {AffineMap.identity(rank): 0}
    frontier = set(table)
    for length in range(1, max_len + 1):
        new = set()
        for w in frontier:
            for g in system.generators:
                x = w * g
                if x not in table:
                    table[x] = length
                    new.add(x)
        frontier = new
    counts = [0] * (max_len + 1)
    for v in table.values():
        counts[v] += 1
    return tuple(counts)


@pytest.mark.parametrize("family,rank,max_len", [
    ("A", 1, 6), ("A", 2, 6), ("A", 3, 5), ("C", 2, 5), ("G", 2, 5),
])
def test_growth_matches_word_oracle(family, rank, max_len):
    system = build_affine_system(family, rank)
    series = growth_coefficients(system, max_len)
    assert series.coefficients == _word_oracle(family, rank, max_len)


@pytest.mark.parametrize("key", sorted(GROWTH_K12))
def test_growth_frozen_vectors(key):
    series = growth_coefficients(build_affine_system(*key), 12)
    assert series.coefficients == GROWTH_K12[key]
    assert series.source == "enumerated"
    assert series.coefficients[0] == 1
    assert series.coefficients[1] == key[1] + 1


def test_growth_budget_error_carries_complete_layers():
    system = build_affine_system("A", 2)
    with pytest.raises(BudgetError) as exc:
        growth_coefficients(system, 12, budget=50)
    err = exc.value
    assert err.budget == 50
    prefix = tuple(err.partial_coefficients)
    assert 0 < len(prefix) < 13
    assert prefix == GROWTH_K12[("A", 2)][:len(prefix)]


def test_growth_zero_truncation():
    series = growth_coefficients(build_affine_system("G", 2), 0)
    assert series.coefficients == (1,)


@pytest.mark.parametrize("family,rank", sorted(CLASSICAL_EXPONENTS))
def test_exponents_frozen(family, rank):
    assert tuple(exponents(family, rank)) == CLASSICAL_EXPONENTS[(family, rank)]


@pytest.mark.parametrize("family,rank", sorted(CLASSICAL_EXPONENTS))
def test_poincare_is_product_of_geometric_blocks(family, rank):
    # the enumerated polynomial must equal prod_i (1 + t + ... + t^{m_i})
    poly = poincare_finite(family, rank)
    expected = [1]
    for m in CLASSICAL_EXPONENTS[(family, rank)]:
        block = [1] * (m + 1)
        out = [0] * (len(expected) + len(block) - 1)
        for i, a in enumerate(expected):
            for j, b in enumerate(block):
                out[i + j] += a * b
        expected = out
    assert list(poly) == expected
    assert len(poly) - 1 == N_POSITIVE_ROOTS[(family, rank)]
    order = 1
    for m in CLASSICAL_EXPONENTS[(family, rank)]:
        order *= m + 1
    assert sum(poly) == order


def test_large_exceptional_poincare_hits_budget():
    with pytest.raises(BudgetError):
        poincare_finite("E", 7, budget=1000)
    with pytest.raises(BudgetError):
        poincare_finite("E", 8, budget=1000)


@pytest.mark.parametrize("key", sorted(OMEGA_ORDERS))
def test_omega_orders_and_homomorphism(key):
    omega = omega_group(*key)
    assert len(omega) == OMEGA_ORDERS[key]
    identity = tuple(range(key[1] + 1))
    assert identity in {el.perm for el in omega}
    for a in omega:
        for b in omega:
            assert (epsilon_of_omega(a * b)
                    == epsilon_of_omega(a) * epsilon_of_omega(b))
    ident = next(el for el in omega if el.perm == identity)
    assert epsilon_of_omega(ident) == 1


def test_omega_frozen_signs():
    a1 = omega_group("A", 1)
    swap = next(el for el in a1 if el.perm == (1, 0))
    assert epsilon_of_omega(swap) == -1
    # rank-3 rotation is a 4-cycle, hence odd
    a3 = omega_group("A", 3)
    assert -1 in {epsilon_of_omega(el) for el in a3}
    # the full flip of the C2 line (0 2) and the B3 swap (0 1) are transpositions
    c2 = omega_group("C", 2)
    assert {epsilon_of_omega(el) for el in c2} == {1, -1}
    b3 = omega_group("B", 3)
    assert {epsilon_of_omega(el) for el in b3} == {1, -1}
    # E7 flip factors into three transpositions
    e7 = omega_group("E", 7)
    assert {epsilon_of_omega(el) for el in e7} == {1, -1}
    for key in (("E", 8), ("F", 4), ("G", 2)):
        assert {epsilon_of_omega(el) for el in omega_group(*key)} == {1}


@pytest.mark.parametrize("family,rank", [
    ("A", 0), ("B", 2), ("C", 1), ("D", 3), ("E", 5), ("E", 9),
    ("F", 3), ("G", 3), ("A", 10), ("B", 50),
])
def test_invalid_types_rejected(family, rank):
    with pytest.raises(InvalidTypeError):
        build_affine_system(family, rank)


def test_invalid_family_and_rank_kind():
    with pytest.raises(InvalidTypeError):
        build_affine_system("H", 2)
    with pytest.raises(InvalidTypeError):
        build_affine_system("A", "2")


def test_b2_hint_names_family_c():
    with pytest.raises(InvalidTypeError, match="family C"):
        build_affine_system("B", 2)


def test_system_json_dict():
    data = build_affine_system("A", 1).to_json_dict()
    assert data == {
        "schema_version": 1,
        "family": "A",
        "rank": 1,
        "coxeter_matrix": [[1, 0], [0, 1]],
    }
