"""Maximal expressive standard (MES) models for prime accessibility-depth ``d``.

A MES model partitions the ``d**2`` atoms in ``d + 1`` different ways into
blocks of ``d`` atoms; blocks of different partitions share at most one atom.
Block sums of a quasi-probability state ``q`` are the accessible marginals.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

DEFAULT_TOL = 1e-9
ALL_LEVEL_MAX_D = 4


class NotPrimeError(ValueError):
    pass


class InconsistentMarginalsError(ValueError):
    pass


class SamplingError(RuntimeError):
    pass


class Mode(Enum):
    BLOCKS_ONLY = "blocks"
    ALL_LEVEL_D = "all"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class MesModel:
    d: int
    partitions: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def n_atoms(self) -> int:
        return self.d * self.d

    @cached_property
    def incidence(self) -> np.ndarray:
        """0/1 array of shape ``(len(partitions), d, d**2)``; ``[k, j, i]`` is 1 iff atom i is in block j of partition k."""
        inc = np.zeros((len(self.partitions), self.d, self.n_atoms))
        for k, part in enumerate(self.partitions):
            for j, block in enumerate(part):
                inc[k, j, list(block)] = 1.0
        return inc

    @cached_property
    def block_of(self) -> np.ndarray:
        """``block_of[k, i]`` is the block of partition ``k`` holding atom ``i``."""
        return np.argmax(self.incidence, axis=1)

    def blocks(self) -> list[tuple[int, ...]]:
        return [b for part in self.partitions for b in part]

    def to_dict(self) -> dict:
        return {"d": self.d, "partitions": [[list(b) for b in part] for part in self.partitions]}

    @classmethod
    def from_dict(cls, data: dict) -> MesModel:
        parts = tuple(tuple(tuple(int(a) for a in b) for b in part) for part in data["partitions"])
        return cls(int(data["d"]), parts)


def build(d: int) -> MesModel:
    """Construct the MES model of depth ``d``.

    Partition 0 holds the consecutive blocks ``{k d, ..., k d + d - 1}``.
    Partition ``y + 1`` (``y = 0..d-1``) puts atom ``j`` in block
    ``x = (floor(j / d) * y + j mod d) mod d``.
    """
    if not is_prime(d):
        raise NotPrimeError(f"MES models need a prime depth, got d={d}")
    n = d * d
    parts = [tuple(tuple(range(k * d, k * d + d)) for k in range(d))]
    for y in range(d):
        part = tuple(
            tuple(j for j in range(n) if ((j // d) * y + j % d) % d == x) for x in range(d)
        )
        parts.append(part)
    model = MesModel(d, tuple(parts))
    if not verify_overlaps(model):  # pragma: no cover - guards the construction itself
        raise AssertionError(f"MES construction produced an invalid model for d={d}")
    return model


def verify_overlaps(m: MesModel) -> bool:
    """Exhaustively check partition coverage, block sizes, block count and overlaps."""
    d, n = m.d, m.n_atoms
    if len(m.partitions) != d + 1:
        return False
    for part in m.partitions:
        if len(part) != d or any(len(b) != d for b in part):
            return False
        if sorted(a for b in part for a in b) != list(range(n)):
            return False
    sets = [(k, set(b)) for k, part in enumerate(m.partitions) for b in part]
    if len(sets) != d * (d + 1):
        return False
    for (k1, b1), (k2, b2) in itertools.combinations(sets, 2):
        if k1 != k2 and len(b1 & b2) > 1:
            return False
    return True


def _as_state(m: MesModel, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (m.n_atoms,):
        raise ValueError(f"state must have length {m.n_atoms}, got shape {q.shape}")
    return q


def marginals(m: MesModel, q) -> np.ndarray:
    """Accessible marginals, shape ``(d + 1, d)``: row ``k`` holds the block sums of partition ``k``."""
    q = _as_state(m, q)
    return m.incidence @ q


def reconstruct(m: MesModel, am, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Invert :func:`marginals`.

    Each atom lies in exactly one block per partition, and every other atom
    shares exactly one of those blocks with it, so the ``d + 1`` block values
    containing atom ``i`` add up to ``d * q_i + 1``.
    """
    p = np.asarray(am, dtype=float)
    d = m.d
    if p.shape != (d + 1, d):
        raise ValueError(f"expected marginals of shape {(d + 1, d)}, got {p.shape}")
    if np.any(np.abs(p.sum(axis=1) - 1.0) > tol):
        raise InconsistentMarginalsError("every accessible marginal must sum to 1")
    rows = np.arange(d + 1)[:, None]
    collected = p[rows, m.block_of].sum(axis=0)
    q = (collected - 1.0) / d
    if np.max(np.abs(marginals(m, q) - p)) > tol:
        raise InconsistentMarginalsError("marginals do not come from any single state")
    return q


def _chi(q: np.ndarray) -> float:
    return 1.0 / float(np.sum(q * q))


def in_mes_set(m: MesModel, q, mode: Mode = Mode.BLOCKS_ONLY, tol: float = DEFAULT_TOL) -> bool:
    q = _as_state(m, q)
    if abs(q.sum() - 1.0) > tol:
        return False
    if mode is Mode.BLOCKS_ONLY:
        sums = marginals(m, q)
        return bool(np.all(sums >= -tol) and np.all(sums <= 1.0 + tol))
    if m.d > ALL_LEVEL_MAX_D:
        raise ValueError(
            f"all-level-d membership enumerates C({m.n_atoms},{m.d}) subsets; only d <= {ALL_LEVEL_MAX_D}"
        )
    for subset in itertools.combinations(range(m.n_atoms), m.d):
        s = q[list(subset)].sum()
        if s < -tol or s > 1.0 + tol:
            return False
    return True


def in_state_space(m: MesModel, q, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the admissible set: MES block constraints plus inaccessibility >= d."""
    q = _as_state(m, q)
    return in_mes_set(m, q, Mode.BLOCKS_ONLY, tol) and _chi(q) >= m.d - tol


def is_pure(m: MesModel, q, tol: float = DEFAULT_TOL) -> bool:
    q = _as_state(m, q)
    return in_state_space(m, q, tol) and abs(_chi(q) - m.d) <= tol


def bloch_to_q(r) -> np.ndarray:
    """Depth-2 state from a Bloch vector, ``q = (1 ± x ± y ± z) / 4`` in frame order."""
    x, y, z = (float(v) for v in r)
    return np.array(
        [1 + x + y + z, 1 + x - y - z, 1 - x + y - z, 1 - x - y + z], dtype=float
    ) / 4.0


def sample(m: MesModel, n: int, seed: int, max_attempts: int = 10_000) -> list[np.ndarray]:
    """Draw ``n`` admissible states, deterministically from ``seed``.

    d = 2 samples the Bloch ball uniformly, which is exactly the admissible
    set. Larger d draws uniformly from the ball ``sum(q**2) <= 1/d`` inside
    the ``sum(q) = 1`` hyperplane and rejects block-constraint failures;
    ``max_attempts`` bounds the proposals per accepted state.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    if m.d == 2:
        direction = rng.standard_normal((n, 3))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radius = rng.random(n) ** (1.0 / 3.0)
        return [bloch_to_q(v) for v in direction * radius[:, None]]

    dim = m.n_atoms
    centre = np.full(dim, 1.0 / dim)
    radius = math.sqrt(1.0 / m.d - 1.0 / dim)
    out = []
    for _ in range(n):
        for _ in range(max_attempts):
            v = rng.standard_normal(dim)
            v -= v.mean()
            v *= radius * rng.random() ** (1.0 / (dim - 1)) / np.linalg.norm(v)
            q = centre + v
            if in_mes_set(m, q):
                out.append(q)
                break
        else:
            raise SamplingError(f"no admissible state after {max_attempts} proposals")
    return out


def samples_to_csv(m: MesModel, states, tol: float = DEFAULT_TOL) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"q_{i}" for i in range(m.n_atoms)] + ["chi", "pure"])
    for q in states:
        writer.writerow([repr(float(v)) for v in q] + [repr(_chi(np.asarray(q))), str(is_pure(m, q, tol)).lower()])
    return buf.getvalue()


def state_to_json(q) -> str:
    return json.dumps([float(v) for v in q])
