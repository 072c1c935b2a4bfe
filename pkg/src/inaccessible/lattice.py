"""Boolean lattice of statements over ``D`` mutually exclusive atoms.

Statements are bit-sets: bit ``i`` set means atom ``i`` takes part in the
disjunction. Meet, join and negation are intersection, union and complement.
On top of the lattice this module carries accessibility labels (``A``/``N``),
the admissibility check against the accessibility tables, the ideal
configurations and a Graphviz export of the Hasse diagram.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

D_MAX = 20
BRUTE_MAX_D = 12
DOT_MAX_D = 6

ACCESSIBLE = "A"
INACCESSIBLE = "N"


class DimensionError(ValueError):
    pass


class TooLargeError(ValueError):
    """Requested an explicit computation beyond its size bound."""


class UselessModelError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Statement:
    atoms: int
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError(f"dimension must be >= 0, got {self.dim}")
        if self.atoms < 0 or self.atoms >> self.dim:
            raise ValueError(f"atom mask {self.atoms:#b} does not fit in {self.dim} atoms")

    @classmethod
    def of(cls, indices: Iterable[int], dim: int) -> Statement:
        mask = 0
        for i in indices:
            if not 0 <= i < dim:
                raise ValueError(f"atom index {i} outside 0..{dim - 1}")
            mask |= 1 << i
        return cls(mask, dim)

    @classmethod
    def top(cls, dim: int) -> Statement:
        return cls((1 << dim) - 1, dim)

    @classmethod
    def bottom(cls, dim: int) -> Statement:
        return cls(0, dim)

    @classmethod
    def atom(cls, i: int, dim: int) -> Statement:
        return cls.of([i], dim)

    @property
    def level(self) -> int:
        return self.atoms.bit_count()

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.dim) if self.atoms >> i & 1)

    def is_top(self) -> bool:
        return self.atoms == (1 << self.dim) - 1

    def is_bottom(self) -> bool:
        return self.atoms == 0

    def __and__(self, other: Statement) -> Statement:
        return meet(self, other)

    def __or__(self, other: Statement) -> Statement:
        return join(self, other)

    def __invert__(self) -> Statement:
        return negate(self)

    def __str__(self) -> str:
        if self.is_bottom():
            return "⊥"
        return "{" + ",".join(map(str, self.indices)) + "}"


def _check_dims(x: Statement, y: Statement) -> None:
    if x.dim != y.dim:
        raise DimensionError(f"statements live in different lattices (D={x.dim} vs D={y.dim})")


def meet(x: Statement, y: Statement) -> Statement:
    _check_dims(x, y)
    return Statement(x.atoms & y.atoms, x.dim)


def join(x: Statement, y: Statement) -> Statement:
    _check_dims(x, y)
    return Statement(x.atoms | y.atoms, x.dim)


def negate(x: Statement) -> Statement:
    return Statement(((1 << x.dim) - 1) ^ x.atoms, x.dim)


def implies(x: Statement, y: Statement) -> bool:
    """True iff every atom of ``x`` is an atom of ``y``."""
    _check_dims(x, y)
    return x.atoms & ~y.atoms == 0


def statement_count(D: int) -> int:
    if D < 0:
        raise ValueError("D must be >= 0")
    return 1 << D


def all_statements(D: int) -> Iterator[Statement]:
    for mask in range(1 << D):
        yield Statement(mask, D)


def level_masks(D: int, level: int) -> list[int]:
    """Bit masks of all statements with exactly ``level`` atoms, in lexicographic order."""
    return [sum(1 << i for i in combo) for combo in itertools.combinations(range(D), level)]


@dataclass(frozen=True)
class TruthAssignment:
    true_atom: int
    dim: int

    def __post_init__(self):
        if not 0 <= self.true_atom < self.dim:
            raise ValueError(f"true atom {self.true_atom} outside 0..{self.dim - 1}")


def truth_of(t: TruthAssignment, s: Statement) -> bool:
    if s.dim != t.dim:
        raise DimensionError("truth assignment and statement have different D")
    return bool(s.atoms >> t.true_atom & 1)


# --- accessibility -----------------------------------------------------------


def closure(generators: Iterable[int], D: int) -> frozenset[int]:
    """Smallest set containing ``generators`` closed under meet, join and negation.

    Worklist fixpoint over bit masks: every mask is combined with everything
    found before it, so all pairs are covered once both are present.
    """
    full = (1 << D) - 1
    found: set[int] = set()
    queue = list(generators)
    while queue:
        x = queue.pop()
        if x in found:
            continue
        found.add(x)
        queue.append(full ^ x)
        for y in list(found):
            queue.append(x & y)
            queue.append(x | y)
    return frozenset(found)


def cells(generators: Iterable[int], D: int) -> list[int]:
    """Atoms of the Boolean algebra generated by ``generators``.

    Obtained by splitting the full atom set with every generator and its
    negation; every element of :func:`closure` is a union of these cells.
    """
    parts = [(1 << D) - 1] if D else []
    for g in generators:
        refined = []
        for p in parts:
            inside, outside = p & g, p & ~g
            if inside:
                refined.append(inside)
            if outside:
                refined.append(outside)
        parts = refined
    return parts


def _unions(parts: list[int]) -> frozenset[int]:
    out = [0]
    for p in parts:
        out += [u | p for u in out]
    return frozenset(out)


@dataclass(frozen=True)
class Violation:
    kind: str  # "negation", "meet", "join" or "depth"
    statements: tuple[Statement, ...]
    message: str


@dataclass(frozen=True)
class Configuration:
    """A model ``(D, d)`` together with an accessibility assignment.

    Either ``accessible_masks`` (explicit A-labelled masks, D <= D_MAX) or
    ``blocks`` (ideal configuration, labels implied by the generated algebra)
    must be given. Ideal configurations carry both once materialised.
    """

    D: int
    d: int
    accessible_masks: frozenset[int] | None = None
    blocks: tuple[int, ...] | None = None
    _cells: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.d <= self.D:
            raise ValueError(f"need 1 <= d <= D, got (D={self.D}, d={self.d})")
        if self.accessible_masks is None and self.blocks is None:
            raise ValueError("configuration needs explicit labels or an ideal block list")

    @cached_property
    def explicit(self) -> frozenset[int]:
        if self.accessible_masks is not None:
            return self.accessible_masks
        if self.D > D_MAX:
            raise TooLargeError(
                f"D={self.D} exceeds D_MAX={D_MAX}; use the implicit ideal representation"
            )
        return _unions(list(self._cells))

    def is_accessible(self, s: Statement) -> bool:
        if s.dim != self.D:
            raise DimensionError("statement and configuration have different D")
        if self.accessible_masks is not None:
            return s.atoms in self.accessible_masks
        return all(s.atoms & c in (0, c) for c in self._cells)

    def label(self, s: Statement) -> str:
        return ACCESSIBLE if self.is_accessible(s) else INACCESSIBLE

    def accessible_at_level(self, level: int) -> list[Statement]:
        if self.blocks is not None and level == self.d:
            return [Statement(b, self.D) for b in self.blocks]
        return sorted(Statement(m, self.D) for m in self.explicit if m.bit_count() == level)

    @property
    def block_count(self) -> int:
        return len(self.accessible_at_level(self.d))


def configuration_from_generators(D: int, d: int, generators: Iterable[Statement]) -> Configuration:
    """Label the closure of ``generators`` (plus ⊥ and ⊤) accessible, everything else N."""
    masks = [g.atoms for g in generators]
    if any(g.dim != D for g in generators):
        raise DimensionError("generator dimension differs from D")
    if D > D_MAX:
        raise TooLargeError(f"explicit labels limited to D <= {D_MAX}")
    acc = closure(masks + [0, (1 << D) - 1], D)
    return Configuration(D, d, accessible_masks=acc)


def is_admissible_access(cfg: Configuration, max_violations: int = 50) -> tuple[bool, list[Violation]]:
    """Check negation preservation, A-closure under meet/join and the depth floor.

    Returns the verdict and up to ``max_violations`` concrete violations.
    Meet/join violations whose forced statement sits below level ``d`` are
    reported as such, since no relabelling could then repair them.
    """
    if cfg.D > D_MAX:
        raise TooLargeError(
            f"D={cfg.D} exceeds D_MAX={D_MAX}; use the implicit ideal representation"
        )
    D, d = cfg.D, cfg.d
    full = (1 << D) - 1
    acc = cfg.explicit
    violations: list[Violation] = []

    def report(kind: str, masks: tuple[int, ...], message: str) -> bool:
        violations.append(Violation(kind, tuple(Statement(m, D) for m in masks), message))
        return len(violations) >= max_violations

    acc_sorted = sorted(acc)
    for x in acc_sorted:
        lvl = x.bit_count()
        if 0 < lvl < d:
            s = Statement(x, D)
            if report("depth", (x,), f"{s} at level {lvl} < d={d} is labelled A"):
                return False, violations
        if full ^ x not in acc:
            s = Statement(x, D)
            if report("negation", (x, full ^ x), f"{s} is A but its negation {~s} is N"):
                return False, violations
    for i, x in enumerate(acc_sorted):
        for y in acc_sorted[i + 1:]:
            for kind, z in (("meet", x & y), ("join", x | y)):
                if z in acc:
                    continue
                sx, sy, sz = Statement(x, D), Statement(y, D), Statement(z, D)
                msg = f"{kind} of {sx} and {sy} is {sz}, labelled N"
                if 0 < sz.level < d:
                    msg += f"; it would be forced A at level {sz.level} < d={d}"
                if report(kind, (x, y, z), msg):
                    return False, violations
    return not violations, violations


def ideal_block_count(D: int, d: int) -> int:
    """Number of accessible level-``d`` statements of an ideal configuration."""
    if not 1 <= d <= D:
        raise ValueError(f"need 1 <= d <= D, got (D={D}, d={d})")
    q, r = divmod(D, d)
    return q if r == 0 else q - 1


def ideal_configuration(D: int, d: int) -> Configuration:
    """Canonical ideal configuration: consecutive blocks ``{0..d-1}, {d..2d-1}, ...``.

    When ``d`` does not divide ``D`` the leftover ``d + D mod d`` atoms form a
    single inaccessible cell.
    """
    k = ideal_block_count(D, d)
    block_mask = (1 << d) - 1
    blocks = tuple(block_mask << (i * d) for i in range(k))
    used = sum(blocks)
    rest = ((1 << D) - 1) ^ used
    parts = blocks + ((rest,) if rest else ())
    return Configuration(D, d, blocks=blocks, _cells=parts)


def max_accessible_brute(D: int, d: int) -> int:
    """Largest admissible family of pairwise-disjoint level-``d`` statements, by search.

    Depth-first over disjoint families; a family is admissible when the
    algebra it generates has no non-empty element below level ``d``. Adding
    statements only refines the generated cells, so inadmissible prefixes
    are pruned. Independent of :func:`ideal_block_count`.
    """
    if D > BRUTE_MAX_D:
        raise TooLargeError(f"exhaustive search limited to D <= {BRUTE_MAX_D}")
    if not 1 <= d <= D:
        raise ValueError(f"need 1 <= d <= D, got (D={D}, d={d})")
    candidates = level_masks(D, d)
    ceiling = D // d
    best = 0

    def admissible(family: list[int]) -> bool:
        return all(c.bit_count() >= d for c in cells(family, D))

    def search(start: int, used: int, family: list[int]) -> bool:
        nonlocal best
        best = max(best, len(family))
        if best == ceiling:
            return True
        for idx in range(start, len(candidates)):
            g = candidates[idx]
            if g & used:
                continue
            family.append(g)
            if admissible(family) and search(idx + 1, used | g, family):
                return True
            family.pop()
        return False

    search(0, 0, [])
    return best


def ideal_families_brute(D: int, d: int) -> list[frozenset[int]]:
    """Every admissible family of level-``d`` statements of maximal size.

    No disjointness is assumed: overlapping statements are rejected by the
    admissibility test itself. Used as the exhaustive oracle for uniqueness.
    """
    if D > BRUTE_MAX_D:
        raise TooLargeError(f"exhaustive search limited to D <= {BRUTE_MAX_D}")
    candidates = level_masks(D, d)
    found: dict[int, list[frozenset[int]]] = {}

    def admissible(family: list[int]) -> bool:
        return all(c.bit_count() >= d for c in cells(family, D))

    def search(start: int, family: list[int]) -> None:
        found.setdefault(len(family), []).append(frozenset(family))
        for idx in range(start, len(candidates)):
            family.append(candidates[idx])
            if admissible(family):
                search(idx + 1, family)
            family.pop()

    search(0, [])
    return found[max(found)]


@dataclass(frozen=True)
class ClassicalSublattice:
    """Accessible sub-lattice of an ideal configuration, seen as a classical lattice.

    Atom ``k`` of the sub-lattice is block ``k`` of the parent configuration.
    """

    parent: Configuration
    blocks: tuple[int, ...]
    residual: int

    @property
    def dim(self) -> int:
        return len(self.blocks)

    def embed(self, s: Statement) -> Statement:
        if s.dim != self.dim:
            raise DimensionError("statement is not over the sub-lattice atoms")
        mask = 0
        for k in s.indices:
            mask |= self.blocks[k]
        return Statement(mask, self.parent.D)


def classical_sublattice(cfg: Configuration) -> ClassicalSublattice:
    blocks = tuple(s.atoms for s in cfg.accessible_at_level(cfg.d))
    if len(blocks) <= 1:
        raise UselessModelError(
            f"({cfg.D},{cfg.d}) has {len(blocks)} accessible block(s); no classical sub-lattice with m >= 2"
        )
    rest = ((1 << cfg.D) - 1) ^ sum(blocks)
    return ClassicalSublattice(cfg, blocks, rest)


def node_name(s: Statement) -> str:
    return "|".join(map(str, s.indices))


def to_dot(cfg: Configuration) -> str:
    """Hasse diagram as Graphviz DOT, one ``rank=same`` group per level."""
    D = cfg.D
    if D > DOT_MAX_D:
        raise TooLargeError(f"DOT export limited to D <= {DOT_MAX_D}")
    lines = [f'digraph "lattice_D{D}_d{cfg.d}" {{', "  rankdir=BT;"]
    for lvl in range(D + 1):
        members = [Statement(m, D) for m in level_masks(D, lvl)]
        lines.append(f"  subgraph level_{lvl} {{")
        lines.append("    rank=same;")
        for s in members:
            lbl = cfg.label(s)
            text = "⊥" if s.is_bottom() else ("⊤" if s.is_top() else str(s))
            lines.append(f'    "{node_name(s)}" [label="{text}", access="{lbl}"];')
        lines.append("  }")
    for lvl in range(D):
        for m in level_masks(D, lvl):
            for i in range(D):
                if not m >> i & 1:
                    lo, hi = Statement(m, D), Statement(m | 1 << i, D)
                    lines.append(f'  "{node_name(lo)}" -> "{node_name(hi)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
