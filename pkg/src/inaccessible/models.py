"""Model-level algebra: classification, composition and inflation of ``(D, d)`` models."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .lattice import ideal_block_count, ideal_configuration


@dataclass(frozen=True, order=True)
class Model:
    D: int
    d: int

    def __post_init__(self):
        if self.D < 1 or not 1 <= self.d <= self.D:
            raise ValueError(f"need 1 <= d <= D, got ({self.D},{self.d})")

    def __str__(self) -> str:
        return f"({self.D},{self.d})"


class Kind(enum.Enum):
    CLASSICAL = "Classical"
    USELESS = "Useless"
    NONTRIVIAL = "Nontrivial"


@dataclass(frozen=True)
class ModelClass:
    tag: Kind
    m: int | None = None


def classify(model: Model) -> ModelClass:
    if model.d == 1:
        return ModelClass(Kind.CLASSICAL, model.D)
    k = ideal_block_count(model.D, model.d)
    if k <= 1:
        return ModelClass(Kind.USELESS, None)
    return ModelClass(Kind.NONTRIVIAL, k)


@dataclass(frozen=True)
class Composition:
    """Product model with its atom pairing and the accessible blocks it inherits.

    ``pairing[(i, j)]`` is the zero-based index ``i * D2 + j`` of the product
    atom built from atom ``i`` of the first factor and atom ``j`` of the second.
    """

    model: Model
    pairing: dict[tuple[int, int], int]
    blocks: tuple[int, ...]


def composed_model(m1: Model, m2: Model) -> Model:
    """Dimensions of the product model: atoms multiply, depths multiply."""
    return Model(m1.D * m2.D, m1.d * m2.d)


def compose(m1: Model, m2: Model) -> Composition:
    model = composed_model(m1, m2)
    pairing = {(i, j): i * m2.D + j for i in range(m1.D) for j in range(m2.D)}
    b1 = ideal_configuration(m1.D, m1.d).blocks or ()
    b2 = ideal_configuration(m2.D, m2.d).blocks or ()
    blocks = []
    for x in b1:
        for y in b2:
            mask = 0
            for i in range(m1.D):
                if x >> i & 1:
                    for j in range(m2.D):
                        if y >> j & 1:
                            mask |= 1 << pairing[i, j]
            blocks.append(mask)
    return Composition(model, pairing, tuple(blocks))


def inflate(m: int, c: int) -> Model:
    """Member ``c`` of the composition-compatible inflation family: ``m -> (m^(c+1), m^c)``."""
    if m < 2 or c < 1:
        raise ValueError(f"need m >= 2 and c >= 1, got m={m}, c={c}")
    return Model(m ** (c + 1), m**c)


def allowed_inflations(m: int, d: int) -> set[int]:
    """All ``D`` whose ideal ``(D, d)`` configuration has exactly ``m`` accessible blocks.

    Candidates are bounded by ``m*d <= D < (m+2)*d``: beyond that the block
    count is already at least ``m+1``.
    """
    if m < 1 or d < 1:
        raise ValueError(f"need m >= 1 and d >= 1, got m={m}, d={d}")
    return {D for D in range(max(d, m * d), (m + 2) * d) if ideal_block_count(D, d) == m}


def printed_inflation_set(m: int, d: int) -> set[int]:
    """The literal set ``{m d} ∪ {(m+1) d + i : i = 1..m-1}``, kept for comparison."""
    return {m * d} | {(m + 1) * d + i for i in range(1, m)}


def inflation_compatible_with_composition(m1: int, m2: int, c: int) -> bool:
    inflation_of_composition = inflate(m1 * m2, c)
    composition_of_inflations = composed_model(inflate(m1, c), inflate(m2, c))
    return inflation_of_composition == composition_of_inflations
