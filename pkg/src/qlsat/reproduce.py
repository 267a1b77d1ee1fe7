"""Executable checks of the structural results relating STD, COM and PBA.

Every check is exact and seeded. ``reproduce`` runs the battery per dimension
and returns one :class:`CheckResult` per claim:

* range identities for commuting projectors (complement, product, join)
* on commuting valuations PBA is defined and equals COM at every node
* COM-sat transfers to PBA-sat, and PBA-sat to STD-sat via ranges
* SEP-1 has no COM witness, no PBA witness, and an STD witness for d >= 2
* the two strict separations, each the conjunction of the SEP-1 checks
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .certificate import Certificate, certificate_for
from .exactla import (
    Field,
    Matrix,
    Projector,
    Subspace,
    commutes,
    orthocomplement,
    projector_of,
    range_of,
    subspace_intersect,
    subspace_sum,
)
from .formula import Formula, atoms, enumerate_formulas, parse
from .sampling import DEFAULT_SEED, commuting_family, make_rng, random_projector, random_subspace
from .search import Verdict, decide_com_sat
from .semantics import (
    Defined,
    eval_com,
    eval_com_nodes,
    eval_pba,
    eval_pba_nodes,
    eval_std,
    eval_std_nodes,
    pba_valuation_to_std,
)

SEP1_TEXT = "(p0 & (p1 | p2)) & ~((p0 & p1) | (p0 & p2))"

# Stream ids keep each check's randomness independent of the others.
_RANGE, _CHAIN, _COM, _PBA = 1, 2, 3, 4

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


def sep1() -> Formula:
    return parse(SEP1_TEXT)


def _unit(d: int, *coords: int) -> list[int]:
    v = [0] * d
    for k in coords:
        v[k] = 1
    return v


def sep1_std_witness(d: int, field: Field = Field.RAT) -> dict[int, Subspace]:
    """p0 = span(e1+e2), p1 = span(e1), p2 = span(e2); needs d >= 2."""
    if d < 2:
        raise ValueError("the SEP-1 witness needs d >= 2")
    return {
        0: Subspace.from_vectors([_unit(d, 0, 1)], d, field),
        1: Subspace.from_vectors([_unit(d, 0)], d, field),
        2: Subspace.from_vectors([_unit(d, 1)], d, field),
    }


def sep1_expected_value(d: int, field: Field = Field.RAT) -> Subspace:
    return Subspace.from_vectors([_unit(d, 0, 1)], d, field)


def sep1_noncommuting_triple(d: int, field: Field = Field.RAT) -> dict[int, Projector]:
    """Projectors onto the STD witness subspaces; p0 commutes with neither p1 nor p2."""
    return {i: projector_of(s) for i, s in sep1_std_witness(d, field).items()}


@dataclass(frozen=True)
class CheckResult:
    name: str
    dimension: int
    status: str
    count: int = 0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        text = f"{self.status:<7} d={self.dimension}  {self.name}  [{self.count} checks]"
        return text + (f"  {self.detail}" if self.detail else "")


def _result(name: str, d: int, count: int, failures: list[str]) -> CheckResult:
    if failures:
        return CheckResult(name, d, FAIL, count, f"first failure: {failures[0]} ({len(failures)} total)")
    return CheckResult(name, d, PASS, count)


# --- range identities --------------------------------------------------------


RANGE_IDENTITIES = "range identities for commuting projectors"


def check_range_identities(d: int, pairs: int, seed: int = DEFAULT_SEED) -> CheckResult:
    """Ran(I-P) = Ran(P)^perp, Ran(PQ) = Ran P meet Ran Q, Ran(P+Q-PQ) = Ran P + Ran Q."""
    rng = make_rng(seed, _RANGE, d)
    failures: list[str] = []
    ident = Matrix.identity(d)
    for t in range(pairs):
        p, q = commuting_family(2, d, rng).projectors
        a, b = range_of(p), range_of(q)
        if range_of(ident - p.matrix) != orthocomplement(a):
            failures.append(f"pair {t}: complement")
        if range_of(p.matrix @ q.matrix) != subspace_intersect(a, b):
            failures.append(f"pair {t}: product")
        if range_of(p.matrix + q.matrix - p.matrix @ q.matrix) != subspace_sum(a, b):
            failures.append(f"pair {t}: join")
    return _result(RANGE_IDENTITIES, d, 3 * pairs, failures)


# --- implication chain -------------------------------------------------------


PBA_EQUALS_COM = "PBA is defined and equals COM on commuting valuations, nodewise"
COM_TO_PBA = "COM-sat implies PBA-sat (same witness)"
PBA_TO_STD = "PBA values transfer to STD through ranges, nodewise"
CHAIN = "COM-sat implies PBA-sat implies STD-sat"


def check_chain(d: int, formulas: Sequence[Formula], valuations: int,
                seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Metamorphic chain over ``formulas`` and ``valuations`` seeded commuting families.

    The same families are reused for every formula, indexed by atom.
    """
    n = max((max(atoms(f)) + 1 for f in formulas), default=1)
    rng = make_rng(seed, _CHAIN, d)
    families = [commuting_family(n, d, rng).projectors for _ in range(valuations)]
    eq_fail: list[str] = []
    tr_fail: list[str] = []
    to_pba_fail: list[str] = []
    to_std_fail: list[str] = []
    nodes = 0
    for k, fam in enumerate(families):
        v = dict(enumerate(fam))
        u = pba_valuation_to_std(v)
        for phi in formulas:
            com = eval_com_nodes(phi, v)
            outcome, pba = eval_pba_nodes(phi, v)
            std = eval_std_nodes(phi, u, d)
            nodes += len(com)
            if not isinstance(outcome, Defined):
                eq_fail.append(f"valuation {k}: undefined on {phi}")
                continue
            if pba != com:
                eq_fail.append(f"valuation {k}: PBA differs from COM on {phi}")
            for path, value in pba.items():
                if std[path] != range_of(value):
                    tr_fail.append(f"valuation {k}: STD differs from Ran(PBA) on {phi}")
                    break
    sat_count = 0
    for phi in formulas:
        rep = decide_com_sat(phi, d)
        if rep.verdict is not Verdict.SAT:
            continue
        sat_count += 1
        out = eval_pba(phi, rep.witness)
        if not (isinstance(out, Defined) and out.value == eval_com(phi, rep.witness) and not out.value.is_zero()):
            to_pba_fail.append(f"COM witness is not a PBA witness for {phi}")
        elif eval_std(phi, pba_valuation_to_std(rep.witness), d).is_zero():
            to_std_fail.append(f"PBA witness does not transfer to STD for {phi}")
    checks = len(formulas) * valuations
    return [
        _result(PBA_EQUALS_COM, d, nodes, eq_fail),
        _result(COM_TO_PBA, d, checks + sat_count, eq_fail + to_pba_fail),
        _result(PBA_TO_STD, d, nodes + sat_count, tr_fail + to_std_fail),
        _result(CHAIN, d, checks + sat_count, eq_fail + to_pba_fail + tr_fail + to_std_fail),
    ]


# --- SEP-1 -------------------------------------------------------------------


SEP1_NO_COM = "SEP-1 has no COM witness"
SEP1_NO_PBA = "SEP-1 has no PBA witness (definedness forces commuting atoms)"
SEP1_STD = "SEP-1 is STD-satisfiable with value span(e1+e2)"
SEP_COM_STD = "strict separation: COM-sat is strictly inside STD-sat"
SEP_PBA_STD = "strict separation: PBA-sat is strictly inside STD-sat"
FULL_CHAIN = "COM-sat inside PBA-sat strictly inside STD-sat"


def check_sep1_com(d: int, trials: int, seed: int = DEFAULT_SEED) -> CheckResult:
    phi = sep1()
    failures: list[str] = []
    if decide_com_sat(phi, d).verdict is not Verdict.UNSAT:
        failures.append("decider did not prove UNSAT")
    rng = make_rng(seed, _COM, d)
    for t in range(trials):
        v = dict(enumerate(commuting_family(3, d, rng).projectors))
        if not eval_com(phi, v).is_zero():
            failures.append(f"trial {t}: nonzero COM value")
    return _result(SEP1_NO_COM, d, trials + 1, failures)


def pba_trial_valuation(d: int, rng: np.random.Generator) -> dict[int, Projector]:
    """A mix of commuting, partly commuting and unrelated projector triples."""
    mode = int(rng.integers(0, 4))
    if mode == 0:
        return dict(enumerate(commuting_family(3, d, rng).projectors))
    if mode == 1:
        return {i: random_projector(d, rng) for i in range(3)}
    if mode == 2:
        pair = commuting_family(2, d, rng).projectors
        order = [int(x) for x in rng.permutation(3)]
        return {order[0]: pair[0], order[1]: pair[1], order[2]: random_projector(d, rng)}
    # Rank-one projectors on small vectors collide and commute often.
    return {i: projector_of(random_subspace(d, rng, dim=1, bound=1)) for i in range(3)}


def check_sep1_pba(d: int, trials: int, seed: int = DEFAULT_SEED) -> CheckResult:
    phi = sep1()
    rng = make_rng(seed, _PBA, d)
    failures: list[str] = []
    for t in range(trials):
        v = pba_trial_valuation(d, rng)
        pairwise = all(commutes(v[i], v[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
        out = eval_pba(phi, v)
        if isinstance(out, Defined):
            if not pairwise:
                failures.append(f"trial {t}: defined although atoms do not commute")
            if not out.value.is_zero():
                failures.append(f"trial {t}: defined and nonzero")
        elif pairwise:
            failures.append(f"trial {t}: undefined although atoms commute")
    return _result(SEP1_NO_PBA, d, trials, failures)


def check_sep1_std(d: int) -> CheckResult:
    if d < 2:
        return CheckResult(SEP1_STD, d, SKIPPED, 0, "needs d >= 2")
    value = eval_std(sep1(), sep1_std_witness(d), d)
    if value != sep1_expected_value(d):
        return CheckResult(SEP1_STD, d, FAIL, 1, f"value is {value}")
    return CheckResult(SEP1_STD, d, PASS, 1)


def _conjunction(name: str, d: int, parts: Iterable[CheckResult]) -> CheckResult:
    parts = list(parts)
    if d < 2:
        return CheckResult(name, d, SKIPPED, 0, "needs d >= 2")
    failed = [p.name for p in parts if p.status != PASS]
    count = sum(p.count for p in parts)
    if failed:
        return CheckResult(name, d, FAIL, count, "depends on failed: " + "; ".join(failed))
    return CheckResult(name, d, PASS, count)


# --- driver ------------------------------------------------------------------


def reproduce(dims: Iterable[int], *, trials: int = 200, pairs: int = 300, chain_valuations: int = 3,
              chain_atoms: int = 3, chain_connectives: int = 3, seed: int = DEFAULT_SEED,
              progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    """Run every check for each dimension; ``progress`` sees results as they arrive."""
    formulas = list(enumerate_formulas(chain_atoms, chain_connectives)) if chain_valuations else []
    out: list[CheckResult] = []

    def emit(r: CheckResult) -> CheckResult:
        out.append(r)
        if progress:
            progress(r)
        return r

    for d in dims:
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        emit(check_range_identities(d, pairs, seed))
        chain = [emit(r) for r in check_chain(d, formulas, chain_valuations, seed)] if formulas else []
        com = emit(check_sep1_com(d, trials, seed))
        pba = emit(check_sep1_pba(d, trials, seed))
        std = emit(check_sep1_std(d))
        sep_com = emit(_conjunction(SEP_COM_STD, d, [com, std]))
        sep_pba = emit(_conjunction(SEP_PBA_STD, d, [pba, std]))
        emit(_conjunction(FULL_CHAIN, d, chain[-1:] + [sep_com, sep_pba]))
    return out


# --- shipped certificates ----------------------------------------------------------


def golden_certificates() -> dict[str, Certificate]:
    """The certificates shipped under ``qlsat/golden``, rebuilt from scratch."""
    diag = {0: Subspace.from_vectors([_unit(2, 0)], 2), 1: Subspace.from_vectors([_unit(2, 1)], 2)}
    return {
        "sep1_std_d2": certificate_for(SEP1_TEXT, "STD", 2, sep1_std_witness(2)),
        "sep1_std_d3": certificate_for(SEP1_TEXT, "STD", 3, sep1_std_witness(3)),
        "com_diag_p0_or_p1": certificate_for("p0 | p1", "COM", 2, {i: projector_of(s) for i, s in diag.items()}),
        "sep1_pba_undefined": certificate_for(SEP1_TEXT, "PBA", 2, sep1_noncommuting_triple(2)),
    }


def golden_path(name: str) -> Path:
    return Path(str(resources.files("qlsat") / "golden" / f"{name}.json"))
