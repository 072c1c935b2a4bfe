import json
import math

import numpy as np
import pytest

from inaccessible import mes, qubit
from inaccessible.inaccessibility import chi
from inaccessible.qubit import PurityMode


def test_frame_sums_to_identity():
    assert np.allclose(sum(qubit.frame()), qubit.IDENTITY)


def test_frame_traces():
    for op in qubit.frame():
        assert np.trace(op) == pytest.approx(0.5)


def test_projectors_are_spin_projectors():
    for axis, sigma in zip("xyz", qubit.PAULIS):
        up, down = qubit.projectors()[axis]
        assert np.allclose(up, (qubit.IDENTITY + sigma) / 2)
        assert np.allclose(down, (qubit.IDENTITY - sigma) / 2)


def test_projectors_follow_mes_blocks():
    m = mes.build(2)
    frame = list(qubit.frame())
    for (axis, (up, _)), part in zip(qubit.projectors().items(), m.partitions):
        assert np.allclose(up, frame[part[0][0]] + frame[part[0][1]]), axis


def test_maximally_mixed():
    q = qubit.rho_to_q(qubit.IDENTITY / 2)
    assert np.allclose(q, 0.25)
    assert qubit.purity_relation(qubit.IDENTITY / 2) == {"chi2": 4.0, "two_over_purity": 4.0}


@pytest.mark.parametrize("seed", range(50))
@pytest.mark.parametrize("mode", list(PurityMode))
def test_roundtrip_and_purity(seed, mode):
    rho = qubit.random_density(seed, mode)
    q = qubit.rho_to_q(rho)
    assert math.isclose(q.sum(), 1.0)
    assert np.max(np.abs(qubit.q_to_rho(q) - rho)) < 1e-12
    rel = qubit.purity_relation(rho)
    assert abs(rel["chi2"] - rel["two_over_purity"]) < 1e-12
    if mode is PurityMode.PURE:
        assert chi(q) == pytest.approx(2.0, abs=1e-9)


def test_mub_marginals_match_block_sums():
    rho = qubit.random_density(7)
    q = qubit.rho_to_q(rho)
    assert np.allclose(qubit.mub_marginals(rho), mes.marginals(mes.build(2), q), atol=1e-12)


def test_basis_states():
    assert np.allclose(qubit.mub_marginals(qubit.from_bloch([0, 0, 1]))[2], [1, 0])
    assert np.allclose(qubit.mub_marginals(qubit.from_bloch([1, 0, 0]))[0], [1, 0])


def test_non_psd_detection():
    rho = qubit.q_to_rho(mes.bloch_to_q([1, 1, 0]))
    assert not qubit.is_psd(rho)
    assert chi(mes.bloch_to_q([1, 1, 0])) < 2
    with pytest.raises(ValueError):
        qubit.check_density(rho)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        qubit.check_density(np.eye(2))
    with pytest.raises(ValueError):
        qubit.check_density(np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(ValueError):
        qubit.q_to_rho([0.5, 0.5, 0.5])
    with pytest.raises(ValueError):
        qubit.q_to_rho([0.5, 0.5, 0.5, 0.5])


def test_eigenvalues():
    lo, hi = qubit.eigenvalues(qubit.from_bloch([0.6, 0, 0]))
    assert (lo, hi) == pytest.approx((0.2, 0.8))


def test_json_roundtrip():
    rho = qubit.random_density(3)
    back = qubit.density_from_dict(json.loads(qubit.density_to_json(rho)))
    assert np.array_equal(back, rho)
