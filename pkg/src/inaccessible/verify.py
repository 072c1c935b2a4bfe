"""Desk-scale reproduction of the structural results, each against a brute-force oracle.

Every check returns a :class:`LemmaReport`. The oracles enumerate, search or
compute ranks; they never call the closed form they are checking.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from . import lattice, mes, models, qubit
from .inaccessibility import chi
from .lattice import Statement
from .quasiprob import G_X_RANGE, g_counterexample

MAX_D = 12


@dataclass
class LemmaReport:
    id: str
    description: str
    params: dict
    passed: bool
    worst_deviation: float = 0.0
    elapsed: float = 0.0
    counterexample: object = None
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed = time.perf_counter() - start
        if not report.passed and report.counterexample is None:
            report.counterexample = "unspecified"
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --- linear algebra oracle ---------------------------------------------------


def matrix_rank(rows, exact: bool, pivot_tol: float = 1e-9) -> int:
    """Rank by Gaussian elimination, over Fractions when ``exact`` else floats."""
    if exact:
        mat = [[Fraction(v) for v in row] for row in rows]
    else:
        mat = [[float(v) for v in row] for row in rows]
    if not mat:
        return 0
    n_cols = len(mat[0])
    rank = 0
    for col in range(n_cols):
        if exact:
            pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        else:
            best = max(range(rank, len(mat)), key=lambda r: abs(mat[r][col]), default=None)
            pivot = best if best is not None and abs(mat[best][col]) > pivot_tol else None
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            f = mat[r][col] / p
            if f:
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def rank_of_marginal_map(m: mes.MesModel, drop_partition: int | None = None) -> int:
    """Rank of ``q -> block sums`` restricted to directions inside ``sum(q) = 1``."""
    n = m.n_atoms
    basis = [[1 if j == i else (-1 if j == n - 1 else 0) for j in range(n)] for i in range(n - 1)]
    rows = []
    for k, part in enumerate(m.partitions):
        if k == drop_partition:
            continue
        for block in part:
            rows.append([sum(b[a] for a in block) for b in basis])
    return matrix_rank(rows, exact=m.d <= 3)


# --- individual checks -------------------------------------------------------


@_timed
def check_top_inaccessible(max_D: int = 5) -> LemmaReport:
    """If ⊤ is N, no admissible labelling marks anything A."""
    report = LemmaReport("L1", "top labelled N forces every statement N", {"D": [1, max_D]}, True)
    for D in range(1, max_D + 1):
        full = (1 << D) - 1
        if D <= 3:
            # every labelling of the 2^D statements
            n = 1 << D
            for bits in range(1 << n):
                acc = frozenset(mask for mask in range(n) if bits >> mask & 1)
                if full in acc or not acc:
                    continue
                cfg = lattice.Configuration(D, 1, accessible_masks=acc)
                if lattice.is_admissible_access(cfg, max_violations=1)[0]:
                    report.passed = False
                    report.counterexample = {"D": D, "accessible": sorted(acc)}
                    return report
        # an A statement drags its whole closure along, and every closure reaches ⊤
        for x in range(1 << D):
            if full not in lattice.closure([x], D):
                report.passed = False
                report.counterexample = {"D": D, "generator": x}
                return report
    return report


@_timed
def check_disjointness(max_D: int = 8) -> LemmaReport:
    """Two overlapping level-d statements cannot both be A at depth d."""
    report = LemmaReport("L2", "accessible level-d statements are pairwise disjoint", {"D": [2, max_D]}, True)
    for D in range(2, max_D + 1):
        for d in range(2, D + 1):
            level = lattice.level_masks(D, d)
            for x, y in itertools.combinations(level, 2):
                if not x & y:
                    continue
                gen = lattice.closure([x, y, 0, (1 << D) - 1], D)
                if not any(0 < g.bit_count() < d for g in gen):
                    report.passed = False
                    report.counterexample = {"D": D, "d": d, "x": x, "y": y}
                    return report
    return report


def brute_table(max_D: int) -> dict[tuple[int, int], int]:
    return {
        (D, d): lattice.max_accessible_brute(D, d)
        for D in range(1, max_D + 1)
        for d in range(1, D + 1)
    }


@_timed
def check_counting(max_D: int, table: dict | None = None) -> LemmaReport:
    """Closed-form accessible block count equals exhaustive search."""
    table = table or brute_table(max_D)
    report = LemmaReport("L3", "ideal block count formula vs exhaustive search", {"D": [1, max_D]}, True)
    for (D, d), brute in sorted(table.items()):
        formula = lattice.ideal_block_count(D, d)
        report.worst_deviation = max(report.worst_deviation, abs(formula - brute))
        if formula != brute:
            report.passed = False
            report.counterexample = {"D": D, "d": d, "formula": formula, "brute": brute}
    return report


def canonical_form(family, D: int) -> tuple[tuple[int, ...], ...]:
    """Lexicographically smallest image of a disjoint block family under atom relabelling."""
    blocks = sorted((tuple(i for i in range(D) if b >> i & 1) for b in family), key=lambda b: b[0])
    if sum(len(b) for b in blocks) != len({a for b in blocks for a in b}):
        raise ValueError("canonical_form expects pairwise-disjoint blocks")
    relabel, nxt = {}, 0
    for block in blocks:
        for atom in block:
            relabel[atom] = nxt
            nxt += 1
    return tuple(sorted(tuple(sorted(relabel[a] for a in b)) for b in blocks))


def permutation_orbit(family, D: int) -> set[frozenset[int]]:
    orbit = set()
    for perm in itertools.permutations(range(D)):
        image = []
        for b in family:
            mask = 0
            for i in range(D):
                if b >> i & 1:
                    mask |= 1 << perm[i]
            image.append(mask)
        orbit.add(frozenset(image))
    return orbit


@_timed
def check_uniqueness(max_D: int = 8) -> LemmaReport:
    """All ideal configurations at fixed (D, d) lie in one relabelling orbit."""
    report = LemmaReport("L4", "ideal configurations unique up to relabelling", {"D": [1, max_D]}, True)
    for D in range(1, max_D + 1):
        for d in range(1, D + 1):
            found = set(lattice.ideal_families_brute(D, d))
            reference = lattice.ideal_configuration(D, d).blocks
            if D <= 6:
                same = found == permutation_orbit(reference, D)
            else:
                target = canonical_form(reference, D)
                same = all(canonical_form(f, D) == target for f in found)
            if not same:
                report.passed = False
                report.counterexample = {"D": D, "d": d, "families": sorted(sorted(f) for f in found)}
                return report
    return report


@_timed
def check_inflation_sets(max_D: int, table: dict | None = None) -> LemmaReport:
    """Allowed inflation dimensions vs exhaustive block counts."""
    table = table or brute_table(max_D)
    report = LemmaReport("L5", "allowed inflation dimensions vs exhaustive search", {"D": [1, max_D]}, True)
    for d in range(1, max_D + 1):
        for m in range(1, max_D + 1):
            brute = {D for (D, dd), k in table.items() if dd == d and k == m}
            counted = {D for D in models.allowed_inflations(m, d) if D <= max_D}
            if brute != counted:
                report.passed = False
                report.counterexample = {"m": m, "d": d, "brute": sorted(brute), "counted": sorted(counted)}
                return report
            printed = {D for D in models.printed_inflation_set(m, d) if D <= max_D}
            if printed != counted:
                report.warnings.append(
                    f"m={m}, d={d}: literal union gives {sorted(printed)}, block counting gives {sorted(counted)}"
                )
    return report


@_timed
def check_inflation_composition(max_m: int = 5, max_c: int = 3) -> LemmaReport:
    report = LemmaReport(
        "L6", "inflation commutes with composition", {"m": [2, max_m], "c": [1, max_c]}, True
    )
    for m1, m2 in itertools.product(range(2, max_m + 1), repeat=2):
        for c in range(1, max_c + 1):
            if not models.inflation_compatible_with_composition(m1, m2, c):
                report.passed = False
                report.counterexample = {"m1": m1, "m2": m2, "c": c}
                return report
    return report


@_timed
def check_mes_structure(ds=(2, 3, 5, 7)) -> LemmaReport:
    report = LemmaReport("L7", "MES partitions: count, sizes, overlaps, coverage", {"d": list(ds)}, True)
    for d in ds:
        m = mes.build(d)
        ok = mes.verify_overlaps(m) and len(m.blocks()) == d * (d + 1)
        n = m.n_atoms
        for i in range(n):
            containing = [set(b) for b in m.blocks() if i in b]
            if len(containing) != d + 1:
                ok = False
            for j in range(n):
                if j != i and sum(j in b for b in containing) != 1:
                    ok = False
        if not ok:
            report.passed = False
            report.counterexample = {"d": d}
            return report
    return report


def random_affine_states(rng: np.random.Generator, n: int, count: int, lo: float = -1.0, hi: float = 2.0):
    """States with ``sum(q) = 1`` and entries inside ``[lo, hi]``, spread well beyond the simplex."""
    out = []
    centre = 1.0 / n
    while len(out) < count:
        u = rng.uniform(lo, hi, n)
        v = u - u.mean()
        room = [((hi - centre) / x if x > 0 else (lo - centre) / x) for x in v if x != 0]
        scale = min([1.0] + room)
        out.append(centre + scale * v)
    return out


@_timed
def check_bijection(ds=(2, 3, 5), samples: int = 1000, seed: int = 0) -> LemmaReport:
    report = LemmaReport(
        "L8", "marginal map is invertible and no partition can be dropped", {"d": list(ds), "samples": samples}, True
    )
    rng = np.random.default_rng(seed)
    for d in ds:
        m = mes.build(d)
        for q in random_affine_states(rng, m.n_atoms, samples):
            back = mes.reconstruct(m, mes.marginals(m, q))
            dev = float(np.max(np.abs(back - q)))
            report.worst_deviation = max(report.worst_deviation, dev)
            if dev > 1e-12:
                report.passed = False
                report.counterexample = {"d": d, "q": q.tolist()}
        full = rank_of_marginal_map(m)
        if full != m.n_atoms - 1:
            report.passed = False
            report.counterexample = {"d": d, "rank": full}
        for k in range(d + 1):
            dropped = rank_of_marginal_map(m, drop_partition=k)
            if dropped >= m.n_atoms - 1:
                report.passed = False
                report.counterexample = {"d": d, "dropped": k, "rank": dropped}
    return report


def _example_reports() -> list[LemmaReport]:
    out = []

    start = time.perf_counter()
    r = LemmaReport("E1", "two atoms: only classical or useless", {"D": 2}, True)
    counts = {d: lattice.max_accessible_brute(2, d) for d in (1, 2)}
    r.passed = counts == {1: 2, 2: 1}
    if not r.passed:
        r.counterexample = counts
    r.elapsed = time.perf_counter() - start
    out.append(r)

    start = time.perf_counter()
    r = LemmaReport("E2", "three atoms: depth 2 admits no accessible pair", {"D": 3}, True)
    counts = {d: lattice.max_accessible_brute(3, d) for d in (1, 2, 3)}
    blocked = all(
        not lattice.is_admissible_access(
            lattice.configuration_from_generators(3, 2, [Statement(mask, 3)])
        )[0]
        for mask in lattice.level_masks(3, 2)
    )
    r.passed = counts == {1: 3, 2: 0, 3: 1} and blocked
    if not r.passed:
        r.counterexample = {"counts": counts, "every_pair_blocked": blocked}
    r.elapsed = time.perf_counter() - start
    out.append(r)

    start = time.perf_counter()
    r = LemmaReport("E3", "four atoms, depth 2: three ideal configurations in one orbit", {"D": 4, "d": 2}, True)
    found = set(lattice.ideal_families_brute(4, 2))
    expected = {
        frozenset({0b0011, 0b1100}),
        frozenset({0b0101, 0b1010}),
        frozenset({0b1001, 0b0110}),
    }
    orbit = permutation_orbit(lattice.ideal_configuration(4, 2).blocks, 4)
    r.passed = found == expected == orbit
    if not r.passed:
        r.counterexample = {"found": sorted(sorted(f) for f in found)}
    r.elapsed = time.perf_counter() - start
    out.append(r)
    return out


def qtilde_exact() -> list:
    t = (3 + sympy.sqrt(33)) / 24
    quarter = sympy.Rational(1, 4)
    return [quarter - t, 0, 0, quarter, quarter, quarter, 0, 0, t]


@_timed
def check_depth3_counterexample(tol: float = 1e-12) -> LemmaReport:
    """The depth-3 state on the sphere that still breaks a block constraint."""
    report = LemmaReport("C3", "depth-3 state: normalised, on the sphere, outside the block constraints", {"d": 3}, True)
    exact = qtilde_exact()
    sum_exact = sympy.simplify(sum(exact)) == 1
    sq_exact = sympy.simplify(sum(v**2 for v in exact) - sympy.Rational(1, 3)) == 0
    q = np.array([float(v) for v in exact])
    m = mes.build(3)
    sq_dev = abs(float(np.sum(q * q)) - 1 / 3)
    first_block = q[[0, 1, 2]].sum()
    both_fail = not mes.in_mes_set(m, q, mes.Mode.BLOCKS_ONLY) and not mes.in_mes_set(m, q, mes.Mode.ALL_LEVEL_D)
    report.worst_deviation = sq_dev
    report.passed = sum_exact and sq_exact and sq_dev <= tol and first_block < 0 and both_fail
    if not report.passed:
        report.counterexample = {"q": q.tolist(), "block_012": first_block}
    return report


@_timed
def check_depth2_implication(samples: int = 100_000, seed: int = 0, tol: float = 1e-9) -> LemmaReport:
    """At depth 2 the sphere constraint implies the pair constraints; positivity matches chi >= 2."""
    report = LemmaReport("Q2", "depth 2: sphere implies pair sums, PSD iff chi >= 2", {"samples": samples}, True)
    rng = np.random.default_rng(seed)
    r = rng.uniform(-1.3, 1.3, size=(samples, 3))
    x, y, z = r.T
    q = np.stack([1 + x + y + z, 1 + x - y - z, 1 - x + y - z, 1 - x - y + z], axis=1) / 4
    sq = np.sum(q * q, axis=1)
    pairs = np.stack([q[:, i] + q[:, j] for i, j in itertools.combinations(range(4), 2)], axis=1)
    inside = sq <= 0.5
    pair_violation = np.maximum(-pairs.min(axis=1), pairs.max(axis=1) - 1)
    worst = float(np.max(pair_violation[inside], initial=0.0))
    report.worst_deviation = worst
    mismatches = 0
    for row in q[: min(samples, 20_000)]:
        psd = qubit.is_psd(qubit.q_to_rho(row), tol)
        if psd != (chi(row) >= 2 - tol):
            mismatches += 1
    report.passed = worst <= tol and mismatches == 0
    report.params["psd_samples"] = min(samples, 20_000)
    if not report.passed:
        report.counterexample = {"worst_pair_violation": worst, "psd_mismatches": mismatches}
    return report


@_timed
def check_monotonicity_counterexample(points: int = 100, tol: float = 1e-12) -> LemmaReport:
    report = LemmaReport(
        "B3", "product-rule combiner decreasing while both arguments increase", {"points": points}, True
    )
    xs = np.linspace(G_X_RANGE[0], 0.5, points)
    rows = [g_counterexample(float(x)) for x in xs]
    worst = 0.0
    for row in rows:
        x = row.x
        worst = max(
            worst,
            abs(row.qab_c - x * (x - 1)),
            abs(row.qb_c - (x - 1)),
            abs(row.qa_bc - x),
            abs(row.qab_c - row.qb_c * row.qa_bc),
        )
    composite = np.array([r.qab_c for r in rows])
    first = np.array([r.qb_c for r in rows])
    second = np.array([r.qa_bc for r in rows])
    # the last interval ends at the turning point x = 1/2 where the slope vanishes
    monotone = (
        np.all(np.diff(composite) < 0) and np.all(np.diff(first) > 0) and np.all(np.diff(second) > 0)
    )
    report.worst_deviation = worst
    report.passed = worst <= tol and bool(monotone)
    if not report.passed:
        report.counterexample = {"worst": worst, "monotone": bool(monotone)}
    return report


def run_all(max_D: int = 8, seed: int = 0) -> list[LemmaReport]:
    """Run every check; fixed order, deterministic given ``seed``."""
    if not 1 <= max_D <= MAX_D:
        raise ValueError(f"max_D must be in 1..{MAX_D}, got {max_D}")
    table = brute_table(max_D)
    reports = [
        check_top_inaccessible(min(max_D, 5)),
        check_disjointness(min(max_D, 8)),
        check_counting(max_D, table),
        check_uniqueness(min(max_D, 8)),
        check_inflation_sets(max_D, table),
        check_inflation_composition(),
        check_mes_structure(),
        check_bijection(seed=seed),
        *_example_reports(),
        check_depth3_counterexample(),
        check_depth2_implication(seed=seed),
        check_monotonicity_counterexample(),
    ]
    return reports


def reports_to_json(reports: list[LemmaReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, default=str)
