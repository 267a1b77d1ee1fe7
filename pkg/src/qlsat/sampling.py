"""Seeded random generators of exact subspaces, projectors and commuting families.

All randomness goes through ``numpy.random.Generator`` (PCG64) seeded from a
SeedSequence built out of the user seed plus stream ids, so every draw is
reproducible across platforms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .exactla import Field, Gauss, Matrix, Projector, Subspace, conj, projector_of

DEFAULT_SEED = 20260415


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent PCG64 stream for ``(seed, *stream)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed % 2**64, *stream])))


def _rand_entry(rng: np.random.Generator, field: Field, bound: int):
    a = int(rng.integers(-bound, bound + 1))
    if field is Field.RAT:
        return Fraction(a)
    return Gauss(a, int(rng.integers(-bound, bound + 1)))


def random_vector(d: int, rng: np.random.Generator, field: Field = Field.RAT, bound: int = 2) -> list:
    while True:
        v = [_rand_entry(rng, field, bound) for _ in range(d)]
        if any(v):
            return v


def _inner(u: Sequence, v: Sequence):
    return sum((conj(a) * b for a, b in zip(u, v)), Fraction(0))


def _primitive(v: list, field: Field) -> list:
    """Rescale to coprime integer (or Gaussian integer) entries."""
    if field is Field.RAT:
        den = lcm(*(x.denominator for x in v))
        ints = [int(x * den) for x in v]
        g = gcd(*ints)
        return [Fraction(x // g) for x in ints]
    den = lcm(*(q.denominator for x in v for q in (x.re, x.im)))
    ints = [(int(x.re * den), int(x.im * den)) for x in v]
    g = gcd(*(c for pair in ints for c in pair))
    return [Gauss(a // g, b // g) for a, b in ints]


def orthogonal_basis(d: int, rng: np.random.Generator, field: Field = Field.RAT, bound: int = 2) -> list[list]:
    """A random orthogonal (not normalized) basis of F^d with small integer entries.

    Built by exact Gram-Schmidt on random integer vectors.
    """
    basis: list[list] = []
    while len(basis) < d:
        w = random_vector(d, rng, field, bound)
        u = list(w)
        for b in basis:
            c = _inner(b, w) / _inner(b, b)
            u = [x - c * y for x, y in zip(u, b)]
        if any(u):
            basis.append(_primitive(u, field))
    return basis


def rank_one_projector(b: Sequence, field: Field = Field.RAT) -> Matrix:
    col = Matrix.from_columns([list(b)], field)
    return (col @ col.H).scale(Fraction(1) / _norm2(b))


def _norm2(b: Sequence) -> Fraction:
    n = _inner(b, b)
    return n.re if isinstance(n, Gauss) else n


def spectral_projector(basis: Sequence[Sequence], subset: Sequence[int], field: Field = Field.RAT) -> Projector:
    """Projector onto the span of the chosen vectors of an orthogonal basis."""
    d = len(basis)
    m = Matrix.zeros(d, d, field)
    for k in subset:
        m = m + rank_one_projector(basis[k], field)
    return Projector(m, check=False)


@dataclass(frozen=True)
class CommutingFamily:
    """Projectors sharing an orthogonal eigenbasis; ``subsets[a]`` lists the eigenvectors of atom a."""

    basis: tuple[tuple, ...]
    subsets: tuple[tuple[int, ...], ...]
    projectors: tuple[Projector, ...]


def commuting_family(n: int, d: int, rng: np.random.Generator, field: Field = Field.RAT,
                     bound: int = 2) -> CommutingFamily:
    basis = orthogonal_basis(d, rng, field, bound)
    subsets = tuple(tuple(k for k in range(d) if rng.random() < 0.5) for _ in range(n))
    projectors = tuple(spectral_projector(basis, s, field) for s in subsets)
    return CommutingFamily(tuple(tuple(b) for b in basis), subsets, projectors)


def random_subspace(d: int, rng: np.random.Generator, field: Field = Field.RAT, dim: int | None = None,
                    bound: int = 2) -> Subspace:
    """Span of ``dim`` random integer vectors (``dim`` drawn uniformly from 0..d when omitted)."""
    if dim is None:
        dim = int(rng.integers(0, d + 1))
    while True:
        s = Subspace.from_vectors([random_vector(d, rng, field, bound) for _ in range(dim)], d, field)
        if s.dim == dim:
            return s


def random_projector(d: int, rng: np.random.Generator, field: Field = Field.RAT, bound: int = 2) -> Projector:
    return projector_of(random_subspace(d, rng, field, bound=bound))


def structured_vectors(d: int, field: Field = Field.RAT) -> list[list]:
    """e_i, then e_i + e_j and e_i - e_j for i < j, then e_i + i*e_j over Q(i)."""
    one = Gauss(1) if field is Field.GAUSS else Fraction(1)
    zero = one * 0

    def vec(pairs):
        v = [zero] * d
        for k, c in pairs:
            v[k] = c
        return v

    out = [vec([(i, one)]) for i in range(d)]
    for i, j in itertools.combinations(range(d), 2):
        out.append(vec([(i, one), (j, one)]))
        out.append(vec([(i, one), (j, -one)]))
    if field is Field.GAUSS:
        for i, j in itertools.combinations(range(d), 2):
            out.append(vec([(i, one), (j, Gauss(0, 1))]))
    return out


def structured_subspaces(d: int, k: int, field: Field = Field.RAT, cap: int = 24) -> list[Subspace]:
    """Distinct k-dimensional spans of structured vectors, at most ``cap`` of them, in a fixed order."""
    if k == 0:
        return [Subspace.zero(d, field)]
    if k == d:
        return [Subspace.full(d, field)]
    seen: dict[Subspace, None] = {}
    for combo in itertools.combinations(structured_vectors(d, field), k):
        s = Subspace.from_vectors(combo, d, field)
        if s.dim == k:
            seen.setdefault(s)
            if len(seen) >= cap:
                break
    return list(seen)
