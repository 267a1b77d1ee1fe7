"""Evaluators for the standard (STD), global commuting (COM) and partial-Boolean (PBA) semantics.

STD evaluates in the subspace lattice: ``~`` is orthocomplement, ``&`` is
intersection, ``|`` is subspace sum. COM and PBA evaluate projectors with
``~P = I - P``, ``P & Q = PQ`` and ``P | Q = P + Q - PQ``. COM demands that
the atom values of the whole formula commute pairwise; PBA instead checks at
each binary node that the two computed child values commute, and is
undefined otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, NamedTuple, Union

from .exactla import (
    DimensionMismatchError,
    FieldMismatchError,
    Matrix,
    Projector,
    ProjectorError,
    Subspace,
    commutes,
    orthocomplement,
    projector_of,
    projector_violation,
    range_of,
    subspace_intersect,
    subspace_sum,
)
from .formula import And, Atom, Formula, Neg, NodePath, Step, atoms, path_to_text

StdValuation = Mapping[int, Subspace]
ProjValuation = Mapping[int, Projector]


class MissingAtomError(KeyError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"valuation assigns nothing to atom p{index}")

    def __str__(self) -> str:
        return self.args[0]


class NotAdmissibleError(ValueError):
    def __init__(self, pair: tuple[int, int]):
        self.pair = pair
        super().__init__(f"atom values of p{pair[0]} and p{pair[1]} do not commute")


class Admissibility(NamedTuple):
    ok: bool
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Defined:
    value: Projector


@dataclass(frozen=True)
class Undefined:
    """The first binary node (in post-order) whose child values do not commute."""

    blame: NodePath
    left: Projector
    right: Projector

    def describe(self) -> str:
        return f"undefined at {path_to_text(self.blame)}: child values do not commute"


PbaOutcome = Union[Defined, Undefined]


def _check_valuation(phi: Formula, v: Mapping[int, object], d: int | None) -> int:
    """Ensure every atom of ``phi`` is assigned and all entries agree on dimension and field."""
    for i in atoms(phi):
        if i not in v:
            raise MissingAtomError(i)
    dims = {x.ambient if isinstance(x, Subspace) else x.dim for x in v.values()}
    fields = {x.field for x in v.values()}
    if d is not None:
        dims.add(d)
    if len(dims) > 1:
        raise DimensionMismatchError(f"valuation mixes dimensions {sorted(dims)}")
    if len(fields) > 1:
        raise FieldMismatchError("valuation mixes fields")
    return dims.pop() if dims else 0


# --- STD -------------------------------------------------------------------


def _std(phi: Formula, v: StdValuation, out: dict | None, path: NodePath) -> Subspace:
    if isinstance(phi, Atom):
        value = v[phi.index]
    elif isinstance(phi, Neg):
        value = orthocomplement(_std(phi.child, v, out, path + (Step.CHILD,)))
    else:
        a = _std(phi.left, v, out, path + (Step.LEFT,))
        b = _std(phi.right, v, out, path + (Step.RIGHT,))
        value = subspace_intersect(a, b) if isinstance(phi, And) else subspace_sum(a, b)
    if out is not None:
        out[path] = value
    return value


def eval_std(phi: Formula, v: StdValuation, d: int | None = None) -> Subspace:
    """Value of ``phi`` in the subspace lattice of F^d."""
    _check_valuation(phi, v, d)
    return _std(phi, v, None, ())


def eval_std_nodes(phi: Formula, v: StdValuation, d: int | None = None) -> dict[NodePath, Subspace]:
    """STD value at every node, keyed by path."""
    _check_valuation(phi, v, d)
    out: dict[NodePath, Subspace] = {}
    _std(phi, v, out, ())
    return out


# --- projector clauses -----------------------------------------------------


# Memoized on matrix values: evaluations over one valuation revisit the same values constantly.


@lru_cache(maxsize=1 << 16)
def _complement_m(m: Matrix) -> Matrix:
    return Matrix.identity(m.rows, m.field) - m


@lru_cache(maxsize=1 << 16)
def _meet_m(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


@lru_cache(maxsize=1 << 16)
def _join_m(a: Matrix, b: Matrix) -> Matrix:
    return a + b - a @ b


def _complement(p: Projector, check: bool) -> Projector:
    return _as_projector(_complement_m(p.matrix), check)


def _meet(p: Projector, q: Projector, check: bool) -> Projector:
    return _as_projector(_meet_m(p.matrix, q.matrix), check)


def _join(p: Projector, q: Projector, check: bool) -> Projector:
    return _as_projector(_join_m(p.matrix, q.matrix), check)


def _as_projector(m: Matrix, check: bool) -> Projector:
    if check:
        problem = projector_violation(m)
        if problem:
            raise ProjectorError(f"intermediate value is {problem}")
    return Projector(m, check=False)


# --- COM -------------------------------------------------------------------


def com_admissible(phi: Formula, v: ProjValuation) -> Admissibility:
    """Pairwise commutation of the atom values occurring in ``phi``; reports the first failing pair."""
    _check_valuation(phi, v, None)
    idx = atoms(phi)
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            if not commutes(v[i], v[j]):
                return Admissibility(False, (i, j))
    return Admissibility(True)


def _com(phi: Formula, v: ProjValuation, out: dict | None, path: NodePath) -> Projector:
    # check=True re-verifies projectorhood of every intermediate value.
    if isinstance(phi, Atom):
        value = v[phi.index]
    elif isinstance(phi, Neg):
        value = _complement(_com(phi.child, v, out, path + (Step.CHILD,)), True)
    else:
        a = _com(phi.left, v, out, path + (Step.LEFT,))
        b = _com(phi.right, v, out, path + (Step.RIGHT,))
        value = _meet(a, b, True) if isinstance(phi, And) else _join(a, b, True)
    if out is not None:
        out[path] = value
    return value


def eval_com(phi: Formula, v: ProjValuation) -> Projector:
    """COM value of ``phi``. Raises NotAdmissibleError when atom values fail to commute."""
    ok = com_admissible(phi, v)
    if not ok:
        raise NotAdmissibleError(ok.pair)
    return _com(phi, v, None, ())


def eval_com_nodes(phi: Formula, v: ProjValuation) -> dict[NodePath, Projector]:
    ok = com_admissible(phi, v)
    if not ok:
        raise NotAdmissibleError(ok.pair)
    out: dict[NodePath, Projector] = {}
    _com(phi, v, out, ())
    return out


# --- PBA -------------------------------------------------------------------


class _Blame(Exception):
    def __init__(self, outcome: Undefined):
        self.outcome = outcome


def _pba(phi: Formula, v: ProjValuation, out: dict | None, path: NodePath) -> Projector:
    if isinstance(phi, Atom):
        value = v[phi.index]
    elif isinstance(phi, Neg):
        value = _complement(_pba(phi.child, v, out, path + (Step.CHILD,)), False)
    else:
        a = _pba(phi.left, v, out, path + (Step.LEFT,))
        b = _pba(phi.right, v, out, path + (Step.RIGHT,))
        if not commutes(a, b):
            raise _Blame(Undefined(path, a, b))
        # Products and joins of commuting projectors are projectors.
        value = _meet(a, b, False) if isinstance(phi, And) else _join(a, b, False)
    if out is not None:
        out[path] = value
    return value


def eval_pba(phi: Formula, v: ProjValuation) -> PbaOutcome:
    """PBA value of ``phi``, or the first undefined node in post-order with its child values."""
    _check_valuation(phi, v, None)
    try:
        return Defined(_pba(phi, v, None, ()))
    except _Blame as blame:
        return blame.outcome


def eval_pba_nodes(phi: Formula, v: ProjValuation) -> tuple[PbaOutcome, dict[NodePath, Projector]]:
    """Outcome plus the values of every node evaluated before any failure."""
    _check_valuation(phi, v, None)
    out: dict[NodePath, Projector] = {}
    try:
        return Defined(_pba(phi, v, out, ())), out
    except _Blame as blame:
        return blame.outcome, out


# --- valuation maps and verdicts -------------------------------------------


def pba_valuation_to_std(v: ProjValuation) -> dict[int, Subspace]:
    """Atomwise range: u(p) = Ran(v(p))."""
    return {i: range_of(p) for i, p in v.items()}


def std_valuation_to_proj(u: StdValuation) -> dict[int, Projector]:
    return {i: projector_of(s) for i, s in u.items()}


def sat_verdict(value: Subspace | Projector | PbaOutcome) -> bool:
    """Nonzero subspace, nonzero projector, or a defined nonzero PBA value."""
    if isinstance(value, Subspace):
        return value.dim > 0
    if isinstance(value, Projector):
        return not value.is_zero()
    if isinstance(value, Defined):
        return not value.value.is_zero()
    if isinstance(value, Undefined):
        return False
    raise TypeError(f"not a semantic value: {value!r}")
