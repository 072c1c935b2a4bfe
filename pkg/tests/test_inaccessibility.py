import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inaccessible import inaccessibility as ia
from inaccessible import mes
from inaccessible.inaccessibility import DegenerateHierarchyError

ORDERS = (0.5, 2, 3, 5)


def probability_vectors(max_len=8):
    return st.lists(st.floats(0.01, 1.0), min_size=1, max_size=max_len).map(
        lambda xs: np.array(xs) / sum(xs)
    )


@pytest.mark.parametrize("c", ORDERS)
@pytest.mark.parametrize("d", range(1, 11))
def test_flat_counts_exactly(d, c):
    assert ia.chi_c(np.full(d, 1 / d), c) == d


def test_flat_on_support():
    assert ia.chi_c([0.5, 0, 0.5, 0], 3) == 2


@given(probability_vectors(), st.sampled_from(ORDERS))
def test_bounds(p, c):
    x = ia.chi_c(p, c)
    assert 1 - 1e-9 <= x <= len(p) + 1e-9


@given(probability_vectors(), st.sampled_from(ORDERS), st.randoms())
def test_permutation_invariant(p, c, r):
    perm = list(range(len(p)))
    r.shuffle(perm)
    assert math.isclose(ia.chi_c(p[perm], c), ia.chi_c(p, c), rel_tol=1e-12)


@settings(max_examples=50)
@given(probability_vectors(5), probability_vectors(5), st.sampled_from(ORDERS))
def test_multiplicative(p, s, c):
    assert math.isclose(ia.chi_c(np.outer(p, s).ravel(), c), ia.chi_c(p, c) * ia.chi_c(s, c), rel_tol=1e-9)


def test_chi_is_order_two():
    p = np.array([0.5, 0.3, 0.2])
    assert math.isclose(ia.chi(p), ia.chi_c(p, 2))


def test_chi_accepts_negative_entries():
    assert ia.chi([-0.0625, 0.375, -0.0625, 0.75]) == pytest.approx(1 / (2 * 0.0625**2 + 0.375**2 + 0.75**2))


@pytest.mark.parametrize("c", [0, -1, 1])
def test_invalid_order(c):
    with pytest.raises(ValueError):
        ia.chi_c([0.5, 0.5], c)


def test_not_probability():
    with pytest.raises(ValueError):
        ia.chi_c([1.2, -0.2], 2)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_order_two_from_marginals_on_arbitrary_real_states(d, rng):
    m = mes.build(d)
    for _ in range(100):
        q = rng.normal(size=d * d)
        q += (1 - q.sum()) / q.size
        got = ia.chi2_from_marginals(m, mes.marginals(m, q))
        assert abs(got - 1 / np.sum(q * q)) <= 1e-12 * max(1.0, got)


def brute_tilde_s(m, q, c):
    """Sum over blocks of (block sum)^c, expanded from scratch."""
    return sum(sum(q[i] for i in block) ** c for block in m.blocks())


def brute_e3(m, q):
    return sum(q[i] * q[j] * q[k] for block in m.blocks() for i, j, k in itertools.combinations(block, 3))


def power_sums(q, c):
    return {k: float(np.sum(q**k)) for k in range(1, c + 1)}


@pytest.mark.parametrize("d", [2, 3, 5])
def test_tilde_s_matches_direct_expansion(d, rng):
    m = mes.build(d)
    q = rng.dirichlet(np.ones(d * d))
    for c in range(2, 7):
        assert ia.tilde_s(m, q, c) == pytest.approx(brute_tilde_s(m, q, c), rel=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5, 7])
def test_order_two_identity_holds(d, rng):
    m = mes.build(d)
    for _ in range(20):
        q = rng.dirichlet(np.ones(d * d))
        S = power_sums(q, 2)
        assert abs(ia.tilde_s(m, q, 2) - ia.tilde_s_identity(S, d, 2)) < 1e-12


@pytest.mark.parametrize("c", range(2, 9))
def test_identity_holds_for_pairs_of_atoms(c, rng):
    m = mes.build(2)
    for _ in range(20):
        q = rng.dirichlet(np.ones(4))
        S = power_sums(q, c)
        assert abs(ia.tilde_s(m, q, c) - ia.tilde_s_identity(S, 2, c)) < 1e-12


@pytest.mark.parametrize("d", [3, 5])
def test_order_three_residual_is_triple_products(d, rng):
    # blocks with three or more atoms contribute 6 * e3(block) on top of the identity
    m = mes.build(d)
    for _ in range(20):
        q = rng.dirichlet(np.ones(d * d))
        S = power_sums(q, 3)
        residual = ia.tilde_s(m, q, 3) - ia.tilde_s_identity(S, d, 3)
        assert residual == pytest.approx(6 * brute_e3(m, q), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_recursive_order_two_matches_direct(d, rng):
    m = mes.build(d)
    for _ in range(20):
        q = rng.dirichlet(np.ones(d * d))
        assert ia.chi_c_recursive(m, q, 2) == pytest.approx(ia.chi_c(q, 2), rel=1e-9)


@pytest.mark.parametrize("c", [3, 4, 5])
def test_two_atom_blocks_degenerate(c):
    with pytest.raises(DegenerateHierarchyError):
        ia.chi_c_recursive(mes.build(2), np.full(4, 0.25), c)


def test_recursive_rejects_fractional_order():
    with pytest.raises(ValueError):
        ia.chi_c_recursive(mes.build(3), np.full(9, 1 / 9), 2.5)


def test_pair_terms_small_orders():
    S = {1: 1.0, 2: 0.3, 3: 0.1}
    assert ia.pair_terms(S, 2) == pytest.approx(1.0)
    assert ia.pair_terms(S, 3) == pytest.approx(3 * 0.3)
    S4 = {**S, 4: 0.05}
    assert ia.pair_terms(S4, 4) == pytest.approx(4 * 0.1 + 3 * 0.09)


def test_entropy_bridge():
    p = np.array([0.5, 0.25, 0.25])
    out = ia.entropy_bridge(p, 2)
    assert out["renyi"] == pytest.approx(math.log(1 / 0.375))
    assert out["tsallis"] == pytest.approx(0.625)
    assert out["shannon_limit"] == pytest.approx(1.5 * math.log(2))
    near_one = ia.entropy_bridge(p, 1.000001)["renyi"]
    assert near_one == pytest.approx(out["shannon_limit"], abs=1e-5)


def test_property_report_passes():
    report = ia.property_report(trials=100, seed=3)
    assert set(report) == {"counting", "symmetry", "multiplicativity", "monotonicity", "bounds", "quasi_concavity"}
    assert all(entry["passed"] for entry in report.values())
    assert report["counting"]["worst_deviation"] == 0.0


@pytest.mark.parametrize("c", ORDERS)
def test_documented_values(c):
    assert ia.chi_c([1, 0, 0, 0], c) == 1
    assert ia.chi_c([0.5, 0.5, 0, 0], c) == 2
    assert ia.chi_c(np.kron(np.full(2, 1 / 2), np.full(3, 1 / 3)), c) == pytest.approx(6)


def test_chi_examples():
    assert ia.chi([0.5, 0, 0, 0.5]) == 2
    assert ia.chi([0.25] * 4) == 4
    q = mes.bloch_to_q(np.array([1, 1, -1]) / math.sqrt(3))
    assert q.min() < 0
    assert ia.chi(q) == pytest.approx(2)


def test_order_two_from_marginals_examples():
    two, three = mes.build(2), mes.build(3)
    assert ia.chi2_from_marginals(two, mes.marginals(two, [0.5, 0.5, 0, 0])) == pytest.approx(2)
    assert ia.chi2_from_marginals(two, np.full((3, 2), 0.5)) == pytest.approx(4)
    e = np.zeros(9)
    e[0] = 1
    assert ia.chi2_from_marginals(three, mes.marginals(three, e)) == pytest.approx(1)


def test_recursive_example():
    assert ia.chi_c_recursive(mes.build(2), [0.5, 0.5, 0, 0], 2) == pytest.approx(2)


def test_entropy_examples():
    assert ia.entropy_bridge([0.5, 0.5], 2)["renyi"] == pytest.approx(math.log(2))
    assert ia.entropy_bridge([1, 0], 3) == {"renyi": 0.0, "tsallis": 0.0, "shannon_limit": 0.0}
    assert ia.chi_c([0.7, 0.3], 2) == pytest.approx(1 / 0.58)
