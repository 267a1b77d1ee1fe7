"""Self-contained witness certificates and their exact verification.

A certificate is a JSON document::

    {
      "format_version": 1,
      "formula": "(p0 & (p1 | p2)) & ~((p0 & p1) | (p0 & p2))",
      "semantics": "STD",
      "field": "RAT",
      "dimension": 2,
      "valuation": {"p0": {"basis": [["1", "1"]]}, ...},
      "claimed_verdict": "SAT",
      "claimed_value": {"basis": [["1", "1"]]}
    }

Subspaces are given as lists of basis vectors, projectors as row-major
matrices. Every scalar is exact text (``n/d`` or ``a/b+c/di``); floats are
rejected. ``claimed_verdict`` is SAT or UNSAT for the value under this one
valuation, or UNDEFINED for a PBA evaluation, optionally with
``claimed_blame`` naming the first failing node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from .exactla import (
    DimensionMismatchError,
    Field,
    Matrix,
    Projector,
    Subspace,
    parse_scalar,
    projector_of,
    projector_violation,
    range_of,
)
from .exactla.linalg import rank
from .formula import atoms, parse, path_from_text, path_to_text
from .semantics import (
    Defined,
    Undefined,
    com_admissible,
    eval_com,
    eval_pba,
    eval_std,
)

FORMAT_VERSION = 1
SEMANTICS = ("STD", "COM", "PBA")
VERDICTS = ("SAT", "UNSAT", "UNDEFINED")


class CertificateFormatError(ValueError):
    """The document is not a well-formed certificate."""


@dataclass(frozen=True)
class Entry:
    """One valuation entry: ``kind`` is "basis" (rows are vectors) or "matrix" (rows are rows)."""

    kind: str
    rows: tuple[tuple[str, ...], ...]

    @classmethod
    def of_subspace(cls, s: Subspace) -> Entry:
        cols = s.basis.to_text_rows()
        return cls("basis", tuple(tuple(cols[i][j] for i in range(s.ambient)) for j in range(s.dim)))

    @classmethod
    def of_matrix(cls, m: Matrix | Projector) -> Entry:
        m = m.matrix if isinstance(m, Projector) else m
        return cls("matrix", tuple(tuple(r) for r in m.to_text_rows()))

    def to_json(self) -> dict[str, Any]:
        return {self.kind: [list(r) for r in self.rows]}


@dataclass(frozen=True)
class Certificate:
    semantics: str
    field: Field
    dimension: int
    valuation: Mapping[int, Entry]
    formula: str | None = None
    claimed_verdict: str | None = None
    claimed_value: Entry | None = None
    claimed_blame: str | None = None
    format_version: int = FORMAT_VERSION

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"format_version": self.format_version}
        if self.formula is not None:
            doc["formula"] = self.formula
        doc["semantics"] = self.semantics
        doc["field"] = self.field.value
        doc["dimension"] = self.dimension
        doc["valuation"] = {f"p{i}": self.valuation[i].to_json() for i in sorted(self.valuation)}
        if self.claimed_verdict is not None:
            doc["claimed_verdict"] = self.claimed_verdict
        if self.claimed_value is not None:
            doc["claimed_value"] = self.claimed_value.to_json()
        if self.claimed_blame is not None:
            doc["claimed_blame"] = self.claimed_blame
        return doc


def dumps(cert: Certificate) -> str:
    """Canonical text: one top-level key per line, one valuation entry per line."""
    lines = []
    for key, value in cert.to_json().items():
        if key == "valuation" and value:
            inner = [f"    {json.dumps(k)}: {json.dumps(v)}" for k, v in value.items()]
            lines.append('  "valuation": {\n' + ",\n".join(inner) + "\n  }")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _entry(raw: Any, where: str) -> Entry:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise CertificateFormatError(f"{where}: expected {{\"basis\": ...}} or {{\"matrix\": ...}}")
    (kind, rows), = raw.items()
    if kind not in ("basis", "matrix"):
        raise CertificateFormatError(f"{where}: unknown entry kind {kind!r}")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise CertificateFormatError(f"{where}: {kind} must be a list of lists")
    for r in rows:
        for x in r:
            if not isinstance(x, (str, int)) or isinstance(x, bool):
                raise CertificateFormatError(f"{where}: scalars must be exact text, got {x!r}")
    return Entry(kind, tuple(tuple(str(x) for x in r) for r in rows))


def from_json(doc: Any) -> Certificate:
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise CertificateFormatError(f"unsupported format_version {version!r}")
    semantics = doc.get("semantics", "STD")
    if semantics not in SEMANTICS:
        raise CertificateFormatError(f"semantics must be one of {SEMANTICS}, got {semantics!r}")
    try:
        field = Field(str(doc.get("field", "RAT")).upper())
    except ValueError:
        raise CertificateFormatError(f"unknown field {doc.get('field')!r}") from None
    d = doc.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise CertificateFormatError(f"dimension must be a positive integer, got {d!r}")
    raw_val = doc.get("valuation")
    if not isinstance(raw_val, dict):
        raise CertificateFormatError("valuation must be an object mapping atoms to entries")
    valuation: dict[int, Entry] = {}
    for key, raw in raw_val.items():
        if not (isinstance(key, str) and key.startswith("p") and key[1:].isdigit()):
            raise CertificateFormatError(f"bad atom name {key!r}")
        valuation[int(key[1:])] = _entry(raw, key)
    verdict = doc.get("claimed_verdict")
    if verdict is not None and verdict not in VERDICTS:
        raise CertificateFormatError(f"claimed_verdict must be one of {VERDICTS}")
    value = doc.get("claimed_value")
    formula = doc.get("formula")
    if formula is not None and not isinstance(formula, str):
        raise CertificateFormatError("formula must be a string")
    blame = doc.get("claimed_blame")
    if blame is not None:
        path_from_text(blame)
    return Certificate(semantics, field, d, valuation, formula, verdict,
                       _entry(value, "claimed_value") if value is not None else None, blame, version)


def loads(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFormatError(f"not valid JSON: {e}") from None
    return from_json(doc)


def load(path: str) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# --- decoding entries into exact values -------------------------------------


def _rows(entry: Entry, field: Field) -> list[list]:
    try:
        return [[parse_scalar(x, field) for x in r] for r in entry.rows]
    except ValueError as e:
        raise CertificateFormatError(str(e)) from None


def entry_subspace(entry: Entry, d: int, field: Field, name: str = "entry") -> Subspace:
    """Decode an entry as a subspace; a matrix entry must be a projector and stands for its range."""
    if entry.kind == "matrix":
        return range_of(entry_projector(entry, d, field, name))
    vectors = _rows(entry, field)
    if any(len(v) != d for v in vectors):
        raise DimensionMismatchError(f"{name}: basis vectors must have {d} coordinates")
    return Subspace.from_vectors(vectors, d, field)


def entry_projector(entry: Entry, d: int, field: Field, name: str = "entry") -> Projector:
    if entry.kind == "basis":
        return projector_of(entry_subspace(entry, d, field, name))
    rows = _rows(entry, field)
    if len(rows) != d or any(len(r) != d for r in rows):
        raise DimensionMismatchError(f"{name}: matrix must be {d}x{d}")
    return Projector(Matrix.from_rows(rows, field))


def entry_problem(entry: Entry, d: int, field: Field) -> str | None:
    """The first violated subspace/projector invariant of an entry, if any."""
    if entry.kind == "basis":
        vectors = _rows(entry, field)
        if any(len(v) != d for v in vectors):
            raise DimensionMismatchError(f"basis vectors must have {d} coordinates")
        if vectors and rank(Matrix.from_columns(vectors, field)) != len(vectors):
            return "subspace invariant: basis vectors are linearly dependent"
        return None
    rows = _rows(entry, field)
    if len(rows) != d or any(len(r) != d for r in rows):
        raise DimensionMismatchError(f"matrix must be {d}x{d}")
    problem = projector_violation(Matrix.from_rows(rows, field))
    return f"projector invariant: {problem}" if problem else None


def std_valuation(cert: Certificate) -> dict[int, Subspace]:
    return {i: entry_subspace(e, cert.dimension, cert.field, f"p{i}") for i, e in cert.valuation.items()}


def proj_valuation(cert: Certificate) -> dict[int, Projector]:
    return {i: entry_projector(e, cert.dimension, cert.field, f"p{i}") for i, e in cert.valuation.items()}


# --- building certificates ---------------------------------------------------


def certificate_for(formula: str, semantics: str, d: int, valuation: Mapping[int, Subspace | Projector],
                    field: Field = Field.RAT, *, claim: bool = True) -> Certificate:
    """Certificate for ``valuation`` with the verdict (and value) computed exactly when ``claim``."""
    entries = {i: Entry.of_subspace(x) if isinstance(x, Subspace) else Entry.of_matrix(x)
               for i, x in valuation.items()}
    cert = Certificate(semantics, Field(field), d, entries, formula)
    if not claim:
        return cert
    ev = evaluate(cert)
    return Certificate(semantics, cert.field, d, entries, formula, ev.verdict,
                       ev.value_entry, ev.blame_text)


@dataclass(frozen=True)
class Evaluation:
    semantics: str
    value: Subspace | Projector | None
    verdict: str
    blame: Undefined | None = None

    @property
    def value_entry(self) -> Entry | None:
        if self.value is None:
            return None
        return Entry.of_subspace(self.value) if isinstance(self.value, Subspace) else Entry.of_matrix(self.value)

    @property
    def blame_text(self) -> str | None:
        return path_to_text(self.blame.blame) if self.blame is not None else None


def evaluate(cert: Certificate, formula: str | None = None, semantics: str | None = None) -> Evaluation:
    """Evaluate the certificate's formula (or ``formula``) under its valuation.

    Raises ParseError, MissingAtomError, DimensionMismatchError,
    FieldMismatchError or NotAdmissibleError (COM) on bad input.
    """
    text = formula if formula is not None else cert.formula
    if text is None:
        raise CertificateFormatError("no formula given")
    phi = parse(text)
    sem = semantics or cert.semantics
    d = cert.dimension
    needed = {i: cert.valuation[i] for i in atoms(phi) if i in cert.valuation}
    view = Certificate(cert.semantics, cert.field, d, needed)
    if sem == "STD":
        value = eval_std(phi, std_valuation(view), d)
        return Evaluation(sem, value, "SAT" if value.dim else "UNSAT")
    v = proj_valuation(view)
    if sem == "COM":
        value = eval_com(phi, v)
        return Evaluation(sem, value, "UNSAT" if value.is_zero() else "SAT")
    out = eval_pba(phi, v)
    if isinstance(out, Defined):
        return Evaluation(sem, out.value, "UNSAT" if out.value.is_zero() else "SAT")
    return Evaluation(sem, None, "UNDEFINED", out)


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failures: tuple[str, ...]
    evaluation: Evaluation | None = None

    @property
    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None


def verify(cert: Certificate) -> VerifyResult:
    """Check invariants, admissibility/definedness and the claims, in that order."""
    failures: list[str] = []
    if cert.formula is None:
        return VerifyResult(False, ("certificate has no formula",))
    if cert.claimed_verdict is None:
        return VerifyResult(False, ("certificate has no claimed_verdict",))
    phi = parse(cert.formula)
    for i in atoms(phi):
        if i in cert.valuation:
            problem = entry_problem(cert.valuation[i], cert.dimension, cert.field)
            if problem:
                failures.append(f"{problem} (p{i})")
    if failures:
        return VerifyResult(False, tuple(failures))
    if cert.semantics == "COM":
        v = proj_valuation(Certificate(cert.semantics, cert.field, cert.dimension,
                                       {i: cert.valuation[i] for i in atoms(phi) if i in cert.valuation}))
        adm = com_admissible(phi, v)
        if not adm:
            return VerifyResult(False, (f"COM admissibility: p{adm.pair[0]} and p{adm.pair[1]} do not commute",))
    if cert.claimed_verdict == "UNDEFINED" and cert.semantics != "PBA":
        return VerifyResult(False, ("verdict mismatch: UNDEFINED is only meaningful for PBA",))
    ev = evaluate(cert)
    if ev.verdict != cert.claimed_verdict:
        failures.append(f"verdict mismatch: claimed {cert.claimed_verdict}, computed {ev.verdict}")
    if cert.claimed_value is not None:
        if ev.value is None:
            failures.append("value mismatch: claimed a value but the evaluation is undefined")
        else:
            claimed = (entry_subspace(cert.claimed_value, cert.dimension, cert.field, "claimed_value")
                       if isinstance(ev.value, Subspace)
                       else entry_projector(cert.claimed_value, cert.dimension, cert.field, "claimed_value"))
            if claimed != ev.value:
                failures.append("value mismatch: recomputed value differs from claimed_value")
    if cert.claimed_blame is not None and ev.blame_text != cert.claimed_blame:
        failures.append(f"blame mismatch: claimed {cert.claimed_blame}, computed {ev.blame_text}")
    return VerifyResult(not failures, tuple(failures), ev)


def format_value(value: Subspace | Projector | None) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, Subspace):
        return str(value)
    return str(value.matrix)
