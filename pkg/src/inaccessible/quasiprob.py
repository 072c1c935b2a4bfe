"""Quasi-probability valuations over a statement lattice.

A valuation assigns a real number to each atom (summing to 1) and extends
additively to every statement. Conditionals are ratios of statement values,
and they obey the sum rule, product rule and Bayes' theorem regardless of sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import DimensionError, Statement, implies
from .mes import MesModel

DEFAULT_TOL = 1e-9


class ZeroConditionError(ValueError):
    pass


@dataclass(frozen=True)
class Valuation:
    q: tuple[float, ...]

    def __post_init__(self):
        if not self.q:
            raise ValueError("empty valuation")
        if not math.isclose(math.fsum(self.q), 1.0, abs_tol=DEFAULT_TOL):
            raise ValueError(f"atom values must sum to 1, got {math.fsum(self.q)}")

    @classmethod
    def of(cls, q) -> Valuation:
        return cls(tuple(float(v) for v in q))

    @property
    def dim(self) -> int:
        return len(self.q)


def value(v: Valuation, s: Statement) -> float:
    if s.dim != v.dim:
        raise DimensionError(f"statement over {s.dim} atoms, valuation over {v.dim}")
    if s.is_top():
        return 1.0
    return math.fsum(v.q[i] for i in s.indices)


def conditional(v: Valuation, y: Statement, x: Statement, tol: float = 0.0) -> float:
    """Value of ``y`` given ``x``: ``value(x ∧ y) / value(x)``.

    Exactly 1 when ``x`` implies ``y`` and exactly 0 when they are disjoint.
    Conditioning on a statement whose value is within ``tol`` of zero raises.
    """
    vx = value(v, x)
    if abs(vx) <= tol:
        raise ZeroConditionError(f"cannot condition on {x}: its value is {vx}")
    if implies(x, y):
        return 1.0
    both = x & y
    if both.is_bottom():
        return 0.0
    return value(v, both) / vx


@dataclass
class RuleStats:
    checked: int = 0
    skipped: int = 0
    worst_sum: float = 0.0
    worst_product: float = 0.0
    worst_bayes: float = 0.0

    def passed(self, tol: float) -> bool:
        return max(self.worst_sum, self.worst_product, self.worst_bayes) <= tol

    def as_dict(self, tol: float) -> dict:
        return {
            "checked": self.checked,
            "skipped": self.skipped,
            "worst_sum": self.worst_sum,
            "worst_product": self.worst_product,
            "worst_bayes": self.worst_bayes,
            "tol": tol,
            "passed": self.passed(tol),
        }


def rule_deviations(v: Valuation, x: Statement, y: Statement, z: Statement) -> tuple[float, float, float]:
    """Absolute residuals of the sum rule, product rule and Bayes' theorem for one triple.

    Raises :class:`ZeroConditionError` when a conditioning statement has value 0.
    """
    c = conditional
    sum_rule = c(v, x | y, z) - (c(v, x, z) + c(v, y, z) - c(v, x & y, z))
    product = c(v, x & y, z) - c(v, x, z) * c(v, y, x & z)
    bayes = c(v, y, x & z) - c(v, y, z) * c(v, x, y & z) / c(v, x, z)
    return abs(sum_rule), abs(product), abs(bayes)


def check_rules(
    v: Valuation,
    trials: int,
    seed: int,
    tol: float = 1e-12,
    min_condition: float = 0.05,
) -> RuleStats:
    """Test sum, product and Bayes rules on random statement triples.

    Triples whose conditioning values (``z``, ``x∧z``, ``y∧z`` and
    ``Q(x|z)``) fall below ``min_condition`` in magnitude are skipped and
    counted; the identities are only meaningful where they are defined.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    D = v.dim
    stats = RuleStats()
    while stats.checked < trials:
        x, y, z = (Statement(int(m), D) for m in rng.integers(0, 1 << D, size=3))
        conds = (value(v, z), value(v, x & z), value(v, y & z))
        if min(abs(c) for c in conds) < min_condition or abs(conds[1] / conds[0]) < min_condition:
            stats.skipped += 1
            if stats.skipped > 1000 * trials:
                raise RuntimeError("almost every triple has a vanishing conditioning value")
            continue
        s, p, b = rule_deviations(v, x, y, z)
        stats.checked += 1
        stats.worst_sum = max(stats.worst_sum, s)
        stats.worst_product = max(stats.worst_product, p)
        stats.worst_bayes = max(stats.worst_bayes, b)
    return stats


def accessible_restriction_ok(m: MesModel, v: Valuation, tol: float = DEFAULT_TOL) -> bool:
    """True iff every MES block gets a value in ``[0, 1]``."""
    if v.dim != m.n_atoms:
        raise DimensionError(f"valuation over {v.dim} atoms, MES model has {m.n_atoms}")
    for block in m.blocks():
        val = math.fsum(v.q[i] for i in block)
        if val < -tol or val > 1 + tol:
            return False
    return True


G_X_RANGE = (1 - math.sqrt(3), 1 + math.sqrt(3))


@dataclass(frozen=True)
class GCounterexample:
    x: float
    q: tuple[float, ...]
    qab_c: float  # Q(A∧B | C)
    qb_c: float  # Q(B | C)
    qa_bc: float  # Q(A | B∧C)


def g_state(x: float) -> tuple[float, ...]:
    return (x * (x - 1) / 4, (2 - x) / 4, -((x - 1) ** 2) / 4, 3 / 4)


def g_counterexample(x: float) -> GCounterexample:
    """Four-atom family where the product rule's combining function decreases in both arguments.

    With ``A = s0∨s1``, ``B = s0∨s2`` and ``C = s0∨s1∨s2`` the conditionals
    are ``x(x-1)``, ``x-1`` and ``x``; on ``[1-√3, 1/2]`` the first falls
    while the other two rise.
    """
    lo, hi = G_X_RANGE
    if not lo - 1e-15 <= x <= hi + 1e-15:
        raise ValueError(f"x={x} outside [1-√3, 1+√3]")
    v = Valuation.of(g_state(x))
    A, B, C = Statement.of([0, 1], 4), Statement.of([0, 2], 4), Statement.of([0, 1, 2], 4)
    if value(v, B & C) == 0:
        raise ZeroConditionError("x = 1 makes Q(B) vanish")
    return GCounterexample(
        x=x,
        q=v.q,
        qab_c=conditional(v, A & B, C),
        qb_c=conditional(v, B, C),
        qa_bc=conditional(v, A, B & C),
    )
