"""Satisfiability deciders and witness searchers for the three semantics.

COM is decided exactly: a pairwise-commuting family of projectors is
simultaneously diagonalizable, so every COM value is diagonal in a common
basis with each diagonal slot following the classical truth table. Hence
Sat_COM^d coincides with classical satisfiability for every d >= 1. The test
suite checks this against brute force over a finite projector family before
anything relies on it.

STD and PBA searches are heuristic. They return a witness that has been
re-verified in exact arithmetic, or UNKNOWN; they never claim UNSAT.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .exactla import Field, Gauss, Matrix, Projector, Subspace, projector_of
from .formula import And, Atom, Formula, Neg, atoms, to_text
from .sampling import (
    DEFAULT_SEED,
    make_rng,
    orthogonal_basis,
    random_subspace,
    spectral_projector,
    structured_subspaces,
)
from .semantics import Defined, com_admissible, eval_com, eval_pba, eval_std, pba_valuation_to_std

MAX_TRUTH_TABLE_ATOMS = 20
COMMUTATION_TOL = 1e-9
VALUE_NORM_TOL = 1e-6


class Verdict(str, enum.Enum):
    SAT = "SAT_with_witness"
    UNSAT = "UNSAT_proved"
    UNKNOWN = "UNKNOWN"


class SoundnessError(AssertionError):
    """A witness failed exact re-verification; this is a bug, never a verdict."""


@dataclass(frozen=True)
class SearchBudget:
    max_trials: int = 2000
    rng_seed: int = DEFAULT_SEED
    dimension: int = 2
    candidate_denominator_bound: int = 16
    field: Field = Field.RAT

    def __post_init__(self) -> None:
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.candidate_denominator_bound < 1:
            raise ValueError("candidate_denominator_bound must be >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "field", Field(self.field))


@dataclass
class SearchReport:
    formula: str
    semantics: str
    dimension: int
    verdict: Verdict
    method: str
    trials_used: int
    seed: int | None = None
    field: Field = Field.RAT
    witness: dict[int, Subspace] | dict[int, Projector] | None = None
    notes: list[str] = dc_field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT

    def summary(self) -> str:
        seed = "-" if self.seed is None else str(self.seed)
        return (f"{self.semantics} d={self.dimension}: {self.verdict.value} "
                f"(method={self.method}, trials={self.trials_used}, seed={seed})")


# --- classical truth tables ------------------------------------------------


def _atom_mask(k: int, n: int) -> int:
    """Bitmask over all 2^n assignments with bit a set iff atom k is true in assignment a."""
    period = 1 << (k + 1)
    block = ((1 << (1 << k)) - 1) << (1 << k)
    repunit = ((1 << (1 << n)) - 1) // ((1 << period) - 1)
    return block * repunit


def truth_table(phi: Formula) -> tuple[tuple[int, ...], int]:
    """``(atoms, mask)``: bit a of mask is phi's value under assignment a (atom k <- bit k of a)."""
    idx = atoms(phi)
    n = len(idx)
    if n > MAX_TRUTH_TABLE_ATOMS:
        raise ValueError(f"{n} atoms exceed the truth-table limit of {MAX_TRUTH_TABLE_ATOMS}")
    full = (1 << (1 << n)) - 1
    masks = {i: _atom_mask(k, n) for k, i in enumerate(idx)}

    def ev(f: Formula) -> int:
        if isinstance(f, Atom):
            return masks[f.index]
        if isinstance(f, Neg):
            return full ^ ev(f.child)
        if isinstance(f, And):
            return ev(f.left) & ev(f.right)
        return ev(f.left) | ev(f.right)

    return idx, ev(phi)


def classical_model(phi: Formula) -> dict[int, bool] | None:
    """First satisfying assignment in truth-table order, or None."""
    idx, mask = truth_table(phi)
    if not mask:
        return None
    a = (mask & -mask).bit_length() - 1
    return {i: bool(a >> k & 1) for k, i in enumerate(idx)}


# --- verification gate -----------------------------------------------------


def _certify(phi: Formula, report: SearchReport) -> SearchReport:
    """Exact re-verification of every SAT report before it leaves this module."""
    if report.verdict is not Verdict.SAT:
        if report.witness is not None:
            raise SoundnessError("non-SAT report carries a witness")
        return report
    w = report.witness
    if report.semantics == "STD":
        ok = not eval_std(phi, w, report.dimension).is_zero()
    elif report.semantics == "COM":
        ok = not eval_com(phi, w).is_zero()
    else:
        out = eval_pba(phi, w)
        ok = isinstance(out, Defined) and not out.value.is_zero()
    if not ok:
        raise SoundnessError(f"{report.semantics} witness for {report.formula} failed re-verification")
    return report


# --- COM -------------------------------------------------------------------


def boolean_witness(model: Mapping[int, bool], d: int, f: Field = Field.RAT) -> dict[int, Projector]:
    one = Projector(Matrix.identity(d, f), check=False)
    zero = Projector(Matrix.zeros(d, d, f), check=False)
    return {i: one if b else zero for i, b in model.items()}


def decide_com_sat(phi: Formula, d: int, field: Field | str = Field.RAT) -> SearchReport:
    """Exact COM decision by classical truth table; SAT witnesses map each atom to 0 or I."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    f = Field(field)
    idx, mask = truth_table(phi)
    text = to_text(phi)
    if not mask:
        return SearchReport(text, "COM", d, Verdict.UNSAT, "boolean-reduction", 1 << len(idx), field=f)
    first = (mask & -mask).bit_length() - 1
    model = {i: bool(first >> k & 1) for k, i in enumerate(idx)}
    report = SearchReport(text, "COM", d, Verdict.SAT, "boolean-reduction", first + 1, field=f,
                          witness=boolean_witness(model, d, f))
    return _certify(phi, report)


def oracle_family_d2(field: Field | str = Field.RAT) -> list[Projector]:
    """0, I, diag(1,0), diag(0,1) and the projectors onto span(e1+e2), span(e1-e2)."""
    f = Field(field)
    vecs = ([], [[1, 0], [0, 1]], [[1, 0]], [[0, 1]], [[1, 1]], [[1, -1]])
    return [projector_of(Subspace.from_vectors(v, 2, f)) for v in vecs]


def brute_force_com(phi: Formula, family: Sequence[Projector]) -> dict[int, Projector] | None:
    """Exhaustive COM search over valuations drawing every atom from ``family``.

    Returns the first admissible valuation with a nonzero value, or None.
    """
    idx = atoms(phi)
    for choice in itertools.product(family, repeat=len(idx)):
        v = dict(zip(idx, choice))
        if com_admissible(phi, v) and not eval_com(phi, v).is_zero():
            return v
    return None


# --- floating-point helpers ------------------------------------------------


def reconstruct_rational(x: float, denominator_bound: int) -> Fraction:
    """Closest rational with denominator <= bound (continued-fraction convergents).

    >>> reconstruct_rational(0.70710678, 50)
    Fraction(29, 41)
    """
    if denominator_bound < 1:
        raise ValueError("denominator_bound must be >= 1")
    if not math.isfinite(x):
        raise ValueError(f"cannot reconstruct non-finite value {x!r}")
    return Fraction(x).limit_denominator(denominator_bound)


def _orth(m: np.ndarray, tol: float = VALUE_NORM_TOL) -> np.ndarray:
    d = m.shape[0]
    if m.shape[1] == 0:
        return np.zeros((d, 0), dtype=m.dtype)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, : int(np.sum(s > tol))]


def _perp(q: np.ndarray, tol: float = VALUE_NORM_TOL) -> np.ndarray:
    d = q.shape[0]
    if q.shape[1] == 0:
        return np.eye(d, dtype=q.dtype)
    _, s, vh = np.linalg.svd(q.conj().T, full_matrices=True)
    r = int(np.sum(s > tol))
    return vh[r:].conj().T


def _float_std(phi: Formula, v: Mapping[int, np.ndarray]) -> np.ndarray:
    if isinstance(phi, Atom):
        return v[phi.index]
    if isinstance(phi, Neg):
        return _perp(_float_std(phi.child, v))
    a = _float_std(phi.left, v)
    b = _float_std(phi.right, v)
    if isinstance(phi, And):
        return _perp(_orth(np.hstack([_perp(a), _perp(b)])))
    return _orth(np.hstack([a, b]))


def _float_rref_rows(m: np.ndarray, tol: float = VALUE_NORM_TOL) -> np.ndarray:
    """Row-reduced echelon form with partial pivoting; zero rows dropped."""
    a = np.array(m, dtype=m.dtype)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= tol:
            continue
        a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r:
                a[i] = a[i] - a[i, c] * a[r]
        r += 1
    return a[:r]


def _reconstruct_subspace(q: np.ndarray, bound: int, f: Field) -> Subspace:
    """Snap a float subspace to a nearby exact one through its reduced basis."""
    d = q.shape[0]
    rows = _float_rref_rows(q.T) if q.shape[1] else np.zeros((0, d))
    vectors = []
    for row in rows:
        if f is Field.RAT:
            vectors.append([reconstruct_rational(float(np.real(x)), bound) for x in row])
        else:
            vectors.append([Gauss(reconstruct_rational(float(np.real(x)), bound),
                                  reconstruct_rational(float(np.imag(x)), bound)) for x in row])
    return Subspace.from_vectors(vectors, d, f)


def _exact_to_float(s: Subspace) -> np.ndarray:
    dtype = complex if s.field is Field.GAUSS else float
    cols = [[complex(x.re) + 1j * complex(x.im) if isinstance(x, Gauss) else float(x) for x in c]
            for c in s.vectors()]
    m = np.array(cols, dtype=dtype).T if cols else np.zeros((s.ambient, 0), dtype=dtype)
    return _orth(m)


def _random_frame(d: int, k: int, rng: np.random.Generator, f: Field) -> np.ndarray:
    m = rng.integers(-2, 3, size=(d, k)).astype(float) + 0.05 * rng.standard_normal((d, k))
    if f is Field.GAUSS:
        m = m + 1j * (rng.integers(-2, 3, size=(d, k)) + 0.05 * rng.standard_normal((d, k)))
    q = _orth(m)
    return q if q.shape[1] == k else _random_frame(d, k, rng, f)


def _perturb(q: np.ndarray, rng: np.random.Generator, scale: float) -> np.ndarray:
    k = q.shape[1]
    if k == 0 or k == q.shape[0]:
        return q
    noise = scale * rng.standard_normal(q.shape)
    if np.iscomplexobj(q):
        noise = noise + 1j * scale * rng.standard_normal(q.shape)
    moved = _orth(q + noise)
    return moved if moved.shape[1] == k else q


def _profiles(n: int, d: int) -> list[tuple[int, ...]]:
    """Dimension profiles, those with the most atoms of intermediate dimension first."""
    profs = list(itertools.product(range(d + 1), repeat=n))
    return sorted(profs, key=lambda p: (sum(k in (0, d) for k in p), p))


def _layered(pools_by_profile: Sequence[Sequence[Sequence]]) -> Iterator[tuple]:
    """Tuples from each profile's pools, layer by layer in the largest pool index used.

    Layer m of every profile is exhausted before any tuple reaching index m+1,
    so small structured choices are tried for all profiles first.
    """
    depth = max((len(p) for pools in pools_by_profile for p in pools), default=0)
    for m in range(depth):
        for pools in pools_by_profile:
            ranges = [range(min(m + 1, len(p))) for p in pools]
            for combo in itertools.product(*ranges):
                if max(combo, default=-1) == m:
                    yield tuple(p[c] for p, c in zip(pools, combo))


# --- STD -------------------------------------------------------------------


def search_std(phi: Formula, budget: SearchBudget,
               seeds: Sequence[Mapping[int, Subspace]] = ()) -> SearchReport:
    """Look for a standard valuation with nonzero value.

    Stages: (a) Boolean 0/H valuations from the COM decider; caller-supplied
    seed valuations; (b) enumeration over dimension profiles with structured
    rational subspaces, then random bounded-denominator ones; (c) float local
    search on the rank of the value followed by rational reconstruction.
    """
    d, f = budget.dimension, budget.field
    text = to_text(phi)
    idx = atoms(phi)
    used = 0

    def done(method: str, witness) -> SearchReport:
        return _certify(phi, SearchReport(text, "STD", d, Verdict.SAT, method, used, budget.rng_seed, f,
                                          dict(witness)))

    com = decide_com_sat(phi, d, f)
    used += com.trials_used
    if com.sat:
        return done("boolean-lift", pba_valuation_to_std(com.witness))

    for seed_val in seeds:
        used += 1
        if not eval_std(phi, seed_val, d).is_zero():
            return done("transferred-witness", seed_val)

    remaining = max(budget.max_trials - used, 0)
    structured_quota = remaining // 2

    def check(val: dict[int, Subspace]) -> bool:
        nonlocal used
        used += 1
        return not eval_std(phi, val, d).is_zero()

    # (b) structured then random exact subspaces
    pools = {k: structured_subspaces(d, k, f) for k in range(d + 1)}
    layered = _layered([[pools[k] for k in prof] for prof in _profiles(len(idx), d)])
    spent = 0
    for combo in layered:
        if spent >= structured_quota:
            break
        spent += 1
        val = dict(zip(idx, combo))
        if check(val):
            return done("structured-enumeration", val)
    rng = make_rng(budget.rng_seed, 1)
    profiles = _profiles(len(idx), d)
    while spent < structured_quota:
        spent += 1
        prof = profiles[int(rng.integers(len(profiles)))]
        val = {i: random_subspace(d, rng, f, dim=k) for i, k in zip(idx, prof)}
        if check(val):
            return done("random-rational", val)

    # (c) float local search on the rank of the value
    rng = make_rng(budget.rng_seed, 2)
    float_quota = budget.max_trials - used
    if float_quota > 0:
        found = _std_local_search(phi, idx, budget, rng, float_quota)
        if found is not None:
            val, steps = found
            used += steps
            return done("float-local-search", val)
        used += float_quota
    return _certify(phi, SearchReport(text, "STD", d, Verdict.UNKNOWN, "exhausted", used, budget.rng_seed, f))


def _std_local_search(phi: Formula, idx: Sequence[int], budget: SearchBudget, rng: np.random.Generator,
                      quota: int) -> tuple[dict[int, Subspace], int] | None:
    d, f = budget.dimension, budget.field
    steps = 0
    restart_every = 40
    while steps < quota:
        dims = [int(rng.integers(0, d + 1)) for _ in idx]
        state = {i: _random_frame(d, k, rng, f) for i, k in zip(idx, dims)}
        score = _float_std(phi, state).shape[1]
        for _ in range(restart_every):
            if steps >= quota:
                break
            steps += 1
            if score > 0:
                exact = {i: _reconstruct_subspace(q, budget.candidate_denominator_bound, f)
                         for i, q in state.items()}
                if not eval_std(phi, exact, d).is_zero():
                    return exact, steps
                # promotion failed: keep exploring from a perturbed point
            i = idx[int(rng.integers(len(idx)))]
            trial = dict(state)
            if rng.random() < 0.2:
                trial[i] = _random_frame(d, int(rng.integers(0, d + 1)), rng, f)
            else:
                trial[i] = _perturb(state[i], rng, 0.3)
            new = _float_std(phi, trial).shape[1]
            if new >= score:
                state, score = trial, new
    return None


# --- PBA -------------------------------------------------------------------


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """Set partitions in restricted-growth-string order."""
    n = len(items)
    if n == 0:
        yield []
        return

    def rgs(prefix: list[int], m: int) -> Iterator[list[int]]:
        if len(prefix) == n:
            yield prefix
            return
        for b in range(m + 2):
            yield from rgs(prefix + [b], max(m, b))

    for code in rgs([0], 0):
        blocks: dict[int, list[int]] = {}
        for item, b in zip(items, code):
            blocks.setdefault(b, []).append(item)
        yield list(blocks.values())


def _basis_pool(d: int, f: Field, rng: np.random.Generator, extra: int = 6) -> list[list[list]]:
    """Standard basis, the e_i +- e_j pairings, then random rational orthogonal bases."""
    one = Gauss(1) if f is Field.GAUSS else Fraction(1)
    zero = one * 0
    std = [[one if r == c else zero for r in range(d)] for c in range(d)]
    pool = [std]
    if d >= 2:
        rotated = []
        for c in range(0, d - 1, 2):
            plus = [zero] * d
            minus = [zero] * d
            plus[c], plus[c + 1] = one, one
            minus[c], minus[c + 1] = one, -one
            rotated += [plus, minus]
        if d % 2:
            rotated.append(std[-1])
        pool.append(rotated)
    pool.extend(orthogonal_basis(d, rng, f) for _ in range(extra))
    return pool


def search_pba(phi: Formula, budget: SearchBudget) -> SearchReport:
    """Look for a projector valuation whose PBA value is defined and nonzero.

    Stages: (a) 0/I seeds from the COM decider; (b) block-structured
    valuations, each block of atoms diagonal in its own rational orthogonal
    basis; (c) float annealing rewarding nodewise commutation and a large
    output, with rational reconstruction and exact re-verification.
    """
    d, f = budget.dimension, budget.field
    text = to_text(phi)
    idx = list(atoms(phi))
    used = 0

    def done(method: str, witness) -> SearchReport:
        return _certify(phi, SearchReport(text, "PBA", d, Verdict.SAT, method, used, budget.rng_seed, f,
                                          dict(witness)))

    def check(val: Mapping[int, Projector]) -> bool:
        nonlocal used
        used += 1
        out = eval_pba(phi, val)
        return isinstance(out, Defined) and not out.value.is_zero()

    com = decide_com_sat(phi, d, f)
    used += com.trials_used
    if com.sat:
        return done("com-seed", com.witness)

    rng = make_rng(budget.rng_seed, 3)
    remaining = max(budget.max_trials - used, 0)
    block_quota = remaining // 2
    pool = _basis_pool(d, f, rng)
    partitions = [p for p in _set_partitions(idx) if len(p) >= 2 or len(idx) < 2]
    for _ in range(block_quota):
        part = partitions[int(rng.integers(len(partitions)))]
        chosen = rng.choice(len(pool), size=min(len(part), len(pool)), replace=False)
        val: dict[int, Projector] = {}
        for b, block in enumerate(part):
            basis = pool[int(chosen[b % len(chosen)])]
            for i in block:
                subset = [k for k in range(d) if rng.random() < 0.5]
                val[i] = spectral_projector(basis, subset, f)
        if check(val):
            return done("block-structured", val)

    rng = make_rng(budget.rng_seed, 4)
    quota = budget.max_trials - used
    if quota > 0:
        found = _pba_anneal(phi, idx, budget, rng, quota)
        if found is not None:
            val, steps = found
            used += steps
            return done("float-annealing", val)
        used += quota
    return _certify(phi, SearchReport(text, "PBA", d, Verdict.UNKNOWN, "exhausted", used, budget.rng_seed, f))


def _float_pba_energy(phi: Formula, proj: Mapping[int, np.ndarray]) -> tuple[float, float]:
    """(sum of commutator norms over binary nodes, norm of the root value), ignoring definedness."""
    total = 0.0

    def ev(g: Formula) -> np.ndarray:
        nonlocal total
        if isinstance(g, Atom):
            return proj[g.index]
        if isinstance(g, Neg):
            return np.eye(proj[next(iter(proj))].shape[0]) - ev(g.child)
        a, b = ev(g.left), ev(g.right)
        total += float(np.linalg.norm(a @ b - b @ a))
        return a @ b if isinstance(g, And) else a + b - a @ b

    root = ev(phi)
    return total, float(np.linalg.norm(root))


def _pba_anneal(phi: Formula, idx: Sequence[int], budget: SearchBudget, rng: np.random.Generator,
                quota: int) -> tuple[dict[int, Projector], int] | None:
    d, f = budget.dimension, budget.field
    bound = budget.candidate_denominator_bound
    weight = 0.5
    steps = 0

    def projs(state):
        return {i: q @ q.conj().T for i, q in state.items()}

    def energy(state) -> tuple[float, float, float]:
        comm, norm = _float_pba_energy(phi, projs(state))
        return comm - weight * norm, comm, norm

    while steps < quota:
        state = {i: _random_frame(d, int(rng.integers(0, d + 1)), rng, f) for i in idx}
        e, comm, norm = energy(state)
        run = min(200, quota - steps)
        for t in range(run):
            steps += 1
            if comm < COMMUTATION_TOL and norm > VALUE_NORM_TOL:
                exact = {i: projector_of(_reconstruct_subspace(q, bound, f)) for i, q in state.items()}
                out = eval_pba(phi, exact)
                if isinstance(out, Defined) and not out.value.is_zero():
                    return exact, steps
            temp = 0.5 * (1 - t / run) + 1e-3
            i = idx[int(rng.integers(len(idx)))]
            trial = dict(state)
            move = rng.random()
            if move < 0.25:
                # snap to a nearby exact subspace
                trial[i] = _exact_to_float(_reconstruct_subspace(state[i], 4, f))
            elif move < 0.5 and len(idx) > 1:
                # align with the eigenvectors of another atom's projector
                j = idx[int(rng.integers(len(idx)))]
                _, vecs = np.linalg.eigh(state[j] @ state[j].conj().T)
                keep = [k for k in range(d) if rng.random() < 0.5]
                trial[i] = vecs[:, keep]
            elif move < 0.6:
                trial[i] = _random_frame(d, int(rng.integers(0, d + 1)), rng, f)
            else:
                trial[i] = _perturb(state[i], rng, 0.2)
            e2, c2, n2 = energy(trial)
            if e2 <= e or rng.random() < math.exp(-(e2 - e) / temp):
                state, e, comm, norm = trial, e2, c2, n2
    return None
