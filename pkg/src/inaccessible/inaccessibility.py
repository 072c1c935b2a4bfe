"""Inaccessibility measures.

``chi_c(p) = (sum p_i**c) ** (1 / (1 - c))`` counts on how many outcomes a
probability vector is effectively uncertain. ``chi(q) = 1 / sum q_i**2`` is
its order-2 member, which also makes sense for quasi-probability states.
"""

from __future__ import annotations

import json
import math
from math import comb

import numpy as np

from . import mes
from .mes import MesModel

SIMPLEX_TOL = 1e-9


class DegenerateHierarchyError(ValueError):
    """The recursion divides by ``d + 2 - 2**(k-1)`` and that factor vanishes."""


def _validate_order(c: float) -> float:
    c = float(c)
    if c <= 0 or c == 1:
        raise ValueError(f"order must be positive and != 1, got c={c}")
    return c


def _as_probability(p, tol: float = SIMPLEX_TOL) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be a non-empty 1-D array")
    if np.any(p < -tol) or np.any(p > 1 + tol) or abs(p.sum() - 1) > tol:
        raise ValueError("not a probability vector")
    return np.clip(p, 0.0, 1.0)


def power_sum(v, c: int) -> float:
    """``sum v_i**c`` for integer ``c`` by repeated multiplication, so negative entries stay exact."""
    v = np.asarray(v, dtype=float)
    acc = np.ones_like(v)
    for _ in range(int(c)):
        acc = acc * v
    return float(acc.sum())


def chi_c(p, c: float) -> float:
    """Order-``c`` inaccessibility of a probability vector.

    Vectors that are flat on their support return the support size exactly.
    Entries are summed in sorted order, so the result is exactly invariant
    under permutations.
    """
    c = _validate_order(c)
    p = _as_probability(p)
    support = np.sort(p[p > 0])
    if np.all(support == support[0]):
        return float(support.size)
    if c == int(c):
        s = power_sum(support, int(c))
    else:
        s = float(np.sum(support**c))
    return s ** (1.0 / (1.0 - c))


def chi(q) -> float:
    """Order-2 inaccessibility, defined for any real vector (typically summing to 1)."""
    q = np.sort(np.asarray(q, dtype=float))
    s = power_sum(q, 2)
    if s == 0:
        raise ValueError("zero vector has no inaccessibility")
    return 1.0 / s


def chi2_from_marginals(m: MesModel, am) -> float:
    """Order-2 inaccessibility of the state behind the accessible marginals.

    ``d / (sum_k 1/chi_2(p_k) - 1)``. Each ``1/chi_2(p_k)`` is evaluated as a
    plain sum of squares, so this also works for marginals of states with
    entries outside ``[0, 1]``.
    """
    p = np.asarray(am, dtype=float)
    if p.shape != (m.d + 1, m.d):
        raise ValueError(f"expected marginals of shape {(m.d + 1, m.d)}, got {p.shape}")
    return m.d / (sum(power_sum(row, 2) for row in p) - 1.0)


def tilde_s(m: MesModel, q, c: int) -> float:
    """Sum over all accessible marginals of ``sum_j p_j**c``."""
    return sum(power_sum(row, c) for row in mes.marginals(m, q))


def pair_terms(S: dict[int, float], c: int) -> float:
    """Power-sum cross terms of the recursion: ``sum_{i<c/2} C(c,i) S_i S_{c-i}`` plus the half middle term."""
    total = sum(comb(c, i) * S[i] * S[c - i] for i in range(1, (c - 1) // 2 + 1))
    if c % 2 == 0:
        total += comb(c, c // 2) * S[c // 2] ** 2 / 2
    return total


def tilde_s_identity(S: dict[int, float], d: int, c: int) -> float:
    """Right-hand side ``(d - (2**(c-1) - 2)) S_c + pair_terms`` of the marginal power-sum identity."""
    return (d - (2 ** (c - 1) - 2)) * S[c] + pair_terms(S, c)


def chi_c_recursive(m: MesModel, q, c: int) -> float:
    """Order-``c`` inaccessibility rebuilt from marginal power sums only.

    Solves the identity above for ``S_2, S_3, ..., S_c`` in turn (``S_1 = 1``)
    and returns ``S_c ** (1 / (1 - c))``.
    """
    if int(c) != c or c < 2:
        raise ValueError(f"recursive order must be an integer >= 2, got {c}")
    c = int(c)
    d = m.d
    q = mes._as_state(m, q)
    S: dict[int, float] = {1: 1.0}
    for k in range(2, c + 1):
        denom = d + 2 - 2 ** (k - 1)
        if denom == 0:
            raise DegenerateHierarchyError(
                f"hierarchy undefined at (d={d}, c={k}): denominator d + 2 - 2^(c-1) vanishes"
            )
        S[k] = (tilde_s(m, q, k) - pair_terms(S, k)) / denom
    if S[c] <= 0:
        raise ValueError(f"reconstructed S_{c} = {S[c]} is not positive")
    return S[c] ** (1.0 / (1.0 - c))


def entropy_bridge(p, c: float) -> dict[str, float]:
    """Rényi and Tsallis-type quantities derived from ``chi_c``, plus Shannon entropy."""
    c = _validate_order(c)
    p = _as_probability(p)
    support = p[p > 0]
    return {
        "renyi": math.log(chi_c(p, c)),
        "tsallis": 1.0 - float(np.sum(support**c)),
        "shannon_limit": float(-np.sum(support * np.log(support))),
    }


# --- property report ---------------------------------------------------------


def _record(report: dict, name: str, deviation: float, ok: bool) -> None:
    entry = report[name]
    entry["trials"] += 1
    entry["worst_deviation"] = max(entry["worst_deviation"], float(deviation))
    entry["passed"] = entry["passed"] and bool(ok)


def property_report(
    dims=(2, 3, 4, 5, 6),
    trials: int = 200,
    seed: int = 0,
    orders=(0.5, 2.0, 3.0, 5.0),
    tol: float = 1e-9,
) -> dict[str, dict]:
    """Sampled check of counting, symmetry, multiplicativity, monotonicity, bounds and quasi-concavity."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = ("counting", "symmetry", "multiplicativity", "monotonicity", "bounds", "quasi_concavity")
    report = {n: {"passed": True, "worst_deviation": 0.0, "trials": 0} for n in names}
    rng = np.random.default_rng(seed)

    for D in dims:
        for k in range(1, D + 1):
            flat = np.zeros(D)
            flat[:k] = 1.0 / k
            for c in orders:
                dev = abs(chi_c(flat, c) - k)
                _record(report, "counting", dev, dev == 0)

    for t in range(trials):
        D = int(dims[t % len(dims)])
        c = float(orders[t % len(orders)])
        p = rng.dirichlet(np.ones(D) * rng.uniform(0.2, 3.0))
        s = rng.dirichlet(np.ones(int(dims[(t + 1) % len(dims)])))
        x = chi_c(p, c)

        perm = rng.permutation(D)
        dev = abs(chi_c(p[perm], c) - x)
        _record(report, "symmetry", dev, dev <= tol)

        prod = np.outer(p, s).ravel()
        prod = prod / prod.sum()
        dev = abs(chi_c(prod, c) - x * chi_c(s, c))
        _record(report, "multiplicativity", dev, dev <= tol)

        uniform = chi_c(np.full(D, 1.0 / D), c)
        _record(report, "monotonicity", max(0.0, x - uniform), x <= uniform + tol)

        low, high = 1.0 - x, x - D
        _record(report, "bounds", max(0.0, low, high), low <= tol and high <= tol)

    for d in (2, 3):
        model = mes.build(d)
        states = mes.sample(model, 2 * trials, seed + d)
        for a, b in zip(states[::2], states[1::2]):
            lam = rng.random()
            mix = lam * a + (1 - lam) * b
            gap = min(chi(a), chi(b)) - chi(mix)
            _record(report, "quasi_concavity", max(0.0, gap), gap <= 1e-12)
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
