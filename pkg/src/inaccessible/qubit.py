"""Qubit density matrices and depth-2 quasi-probability states.

The frame ``(I ± σx ± σy ± σz) / 4`` (even number of minus signs) turns a
density matrix into four real numbers summing to one. Its block sums are the
spin probabilities along x, y and z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np


TOL = 1e-9

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class PurityMode(Enum):
    PURE = "pure"
    MIXED = "mixed"


@dataclass(frozen=True)
class FrameOps:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))


def frame() -> FrameOps:
    sx, sy, sz = PAULIS
    return FrameOps(
        a=(IDENTITY + sx + sy + sz) / 4,
        b=(IDENTITY + sx - sy - sz) / 4,
        c=(IDENTITY - sx + sy - sz) / 4,
        d=(IDENTITY - sx - sy + sz) / 4,
    )


_FRAME = frame()


def projectors() -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Spin-up / spin-down projectors per axis, as sums of frame operators."""
    f = _FRAME
    return {
        "x": (f.a + f.b, f.c + f.d),
        "y": (f.a + f.c, f.b + f.d),
        "z": (f.a + f.d, f.b + f.c),
    }


def _as_matrix(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {rho.shape}")
    return rho


def check_density(rho, tol: float = TOL, require_psd: bool = True) -> np.ndarray:
    """Validate Hermiticity, unit trace and (optionally) positivity."""
    rho = _as_matrix(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError(f"trace is {np.trace(rho)}, not 1")
    if require_psd and not is_psd(rho, tol):
        raise ValueError("matrix is not positive semidefinite")
    return rho


def bloch_vector(rho) -> np.ndarray:
    rho = _as_matrix(rho)
    return np.array([np.trace(rho @ s).real for s in PAULIS])


def eigenvalues(rho) -> tuple[float, float]:
    """Closed form ``1/2 ± |r|/2`` for a Hermitian unit-trace 2x2 matrix."""
    r = float(np.linalg.norm(bloch_vector(rho)))
    return 0.5 - r / 2, 0.5 + r / 2


def is_psd(rho, tol: float = TOL) -> bool:
    return eigenvalues(rho)[0] >= -tol


def from_bloch(r) -> np.ndarray:
    x, y, z = (float(v) for v in r)
    return (IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z) / 2


def rho_to_q(rho, tol: float = TOL) -> np.ndarray:
    rho = check_density(rho, tol, require_psd=False)
    return np.array([np.trace(rho @ op).real for op in _FRAME])


def q_to_rho(q, tol: float = TOL) -> np.ndarray:
    """Unique Hermitian unit-trace matrix whose frame vector is ``q``.

    Positive semidefinite exactly when ``1 / sum(q**2) >= 2``.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ValueError("qubit states have four components")
    if abs(q.sum() - 1) > tol:
        raise ValueError(f"components sum to {q.sum()}, not 1")
    q1, q2, q3, q4 = q
    return from_bloch((q1 + q2 - q3 - q4, q1 + q3 - q2 - q4, q1 + q4 - q2 - q3))


def purity(rho) -> float:
    rho = _as_matrix(rho)
    return float(np.trace(rho @ rho).real)


def purity_relation(rho) -> dict[str, float]:
    rho = check_density(rho)
    q = rho_to_q(rho)
    return {"chi2": 1.0 / float(np.sum(q * q)), "two_over_purity": 2.0 / purity(rho)}


def mub_marginals(rho) -> np.ndarray:
    """Spin probabilities ``(up, down)`` along x, y, z, shape ``(3, 2)``."""
    rho = check_density(rho)
    return np.array(
        [[np.trace(rho @ up).real, np.trace(rho @ down).real] for up, down in projectors().values()]
    )


def random_density(seed: int, purity_mode: PurityMode = PurityMode.MIXED) -> np.ndarray:
    """Uniform point on the Bloch sphere (pure) or in the Bloch ball (mixed)."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    if purity_mode is PurityMode.MIXED:
        v *= rng.random() ** (1 / 3)
    return from_bloch(v)


def density_to_dict(rho) -> dict:
    rho = _as_matrix(rho)
    return {"re": rho.real.tolist(), "im": rho.imag.tolist()}


def density_from_dict(data: dict) -> np.ndarray:
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data.get("im", np.zeros((2, 2))), dtype=float)
    return _as_matrix(re + 1j * im)


def density_to_json(rho) -> str:
    return json.dumps(density_to_dict(rho))
