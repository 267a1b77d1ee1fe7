"""Classify formulas under COM, PBA and STD, and hunt for COM-unsat PBA-sat formulas.

Each formula gets a verdict triple. The chain COM-sat => PBA-sat => STD-sat
holds for every d, so a row violating it means a bug and raises
:class:`InternalSoundnessError`. The interesting rows are the COM-unsat ones:
a PBA witness for such a formula would be a genuine finding, and comes with a
certificate that re-verifies from its JSON alone.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .certificate import Certificate, certificate_for
from .formula import Formula, enumerate_formulas, parse, to_text
from .search import SearchBudget, SearchReport, Verdict, decide_com_sat, search_pba, search_std
from .semantics import pba_valuation_to_std


class InternalSoundnessError(AssertionError):
    """A classification contradicts COM-sat => PBA-sat => STD-sat."""


@dataclass(frozen=True)
class ClassificationRow:
    formula: str
    dimension: int
    com: SearchReport
    pba: SearchReport
    std: SearchReport
    certificates: dict[str, Certificate] = field(default_factory=dict)

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.com.verdict.value, self.pba.verdict.value, self.std.verdict.value)

    @property
    def candidate(self) -> bool:
        """COM-unsat yet PBA-sat: would separate PBA from COM."""
        return self.com.verdict is Verdict.UNSAT and self.pba.verdict is Verdict.SAT

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "formula": self.formula,
            "dimension": self.dimension,
            "seed": self.std.seed,
        }
        for name, rep in (("com", self.com), ("pba", self.pba), ("std", self.std)):
            rec[name] = {"verdict": rep.verdict.value, "method": rep.method, "trials": rep.trials_used}
        if self.candidate:
            rec["finding"] = ("research-grade: COM-unsat formula with a PBA witness; "
                              "re-verify the attached certificate before believing it")
        if self.certificates:
            rec["certificates"] = {k: c.to_json() for k, c in self.certificates.items()}
        return rec

    def to_json_line(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


def check_chain(com: Verdict, pba: Verdict, std: Verdict) -> None:
    if com is Verdict.SAT and pba is not Verdict.SAT:
        raise InternalSoundnessError(f"COM is SAT but PBA is {pba.value}")
    if pba is Verdict.SAT and std is not Verdict.SAT:
        raise InternalSoundnessError(f"PBA is SAT but STD is {std.value}")


def classify(phi: Formula | str, d: int, budget: SearchBudget | None = None) -> ClassificationRow:
    """Verdicts under all three semantics; witnesses attached as certificates for COM-unsat formulas."""
    if isinstance(phi, str):
        phi = parse(phi)
    budget = budget or SearchBudget(dimension=d)
    if budget.dimension != d:
        budget = SearchBudget(budget.max_trials, budget.rng_seed, d, budget.candidate_denominator_bound, budget.field)
    com = decide_com_sat(phi, d, budget.field)
    pba = search_pba(phi, budget)
    seeds = [pba_valuation_to_std(pba.witness)] if pba.sat else []
    std = search_std(phi, budget, seeds=seeds)
    check_chain(com.verdict, pba.verdict, std.verdict)
    text = to_text(phi)
    certs: dict[str, Certificate] = {}
    if com.verdict is Verdict.UNSAT:
        for name, rep in (("pba", pba), ("std", std)):
            if rep.sat:
                certs[name] = certificate_for(text, rep.semantics, d, rep.witness, budget.field)
    return ClassificationRow(text, d, com, pba, std, certs)


@dataclass
class HuntSummary:
    formulas: int = 0
    com_unsat: int = 0
    candidates: list[str] = field(default_factory=list)
    triples: Counter = field(default_factory=Counter)

    def add(self, row: ClassificationRow) -> None:
        self.formulas += 1
        self.triples[row.triple] += 1
        if row.com.verdict is Verdict.UNSAT:
            self.com_unsat += 1
            if row.candidate:
                self.candidates.append(row.formula)

    def to_record(self) -> dict[str, Any]:
        return {
            "summary": True,
            "formulas": self.formulas,
            "com_unsat": self.com_unsat,
            "candidates": self.candidates,
            "triples": {"/".join(k): v for k, v in sorted(self.triples.items())},
            "conclusion": self.conclusion(),
        }

    def conclusion(self) -> str:
        if self.candidates:
            return (f"{len(self.candidates)} open-problem candidate(s) found; each carries a PBA certificate "
                    "and is a research-grade claim until independently checked")
        return ("no COM-unsat formula was shown PBA-sat; PBA UNKNOWN is not evidence of PBA-unsat")


def explore(formulas: Iterable[Formula | str], d: int, budget: SearchBudget | None = None,
            summary: HuntSummary | None = None) -> Iterator[ClassificationRow]:
    """Classify each formula in order, tallying into ``summary`` when given."""
    for phi in formulas:
        row = classify(phi, d, budget)
        if summary is not None:
            summary.add(row)
        yield row


def hunt_open_problem(max_atoms: int, max_connectives: int, d: int, budget: SearchBudget | None = None,
                      *, commutative: bool = True, formulas: Iterable[Formula | str] | None = None,
                      summary: HuntSummary | None = None) -> Iterator[ClassificationRow]:
    """Classify every formula of the family and yield the COM-unsat rows.

    Counts accumulate in ``summary`` (pass one in to read them afterwards).
    """
    family = formulas if formulas is not None else enumerate_formulas(max_atoms, max_connectives,
                                                                       commutative=commutative)
    for row in explore(family, d, budget, summary):
        if row.com.verdict is Verdict.UNSAT:
            yield row
