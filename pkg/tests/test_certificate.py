import json

import pytest
from hypothesis import given, settings, strategies as st

from qlsat.certificate import (
    Certificate,
    CertificateFormatError,
    Entry,
    certificate_for,
    dumps,
    evaluate,
    loads,
    verify,
)
from qlsat.exactla import DimensionMismatchError, Field, Gauss, Subspace, projector_of
from qlsat.reproduce import SEP1_TEXT, golden_certificates, golden_path, sep1_std_witness
from qlsat.sampling import make_rng, random_projector, random_subspace
from qlsat.semantics import MissingAtomError

GOLDEN = ["sep1_std_d2", "sep1_std_d3", "com_diag_p0_or_p1", "sep1_pba_undefined"]


def golden_text(name):
    return golden_path(name).read_text(encoding="utf-8")


@pytest.mark.parametrize("name", GOLDEN)
def test_golden_files_verify_and_are_canonical(name):
    text = golden_text(name)
    cert = loads(text)
    assert verify(cert).ok
    assert dumps(cert) == text
    assert dumps(golden_certificates()[name]) == text


def test_golden_pba_evidence_blames_p_and_q():
    cert = loads(golden_text("sep1_pba_undefined"))
    assert cert.claimed_verdict == "UNDEFINED" and cert.claimed_blame == "/R/C/L"
    ev = evaluate(cert)
    assert ev.blame is not None and ev.value is None


def _edit(name, **changes):
    doc = json.loads(golden_text(name))
    doc.update(changes)
    return loads(json.dumps(doc))


def test_flipped_verdict_is_a_verdict_mismatch():
    res = verify(_edit("sep1_std_d2", claimed_verdict="UNSAT"))
    assert not res.ok and res.first_failure.startswith("verdict mismatch")


def test_non_idempotent_matrix_violates_the_projector_invariant():
    doc = json.loads(golden_text("com_diag_p0_or_p1"))
    doc["valuation"]["p0"] = {"matrix": [["2", "0"], ["0", "0"]]}
    res = verify(loads(json.dumps(doc)))
    assert not res.ok and res.first_failure.startswith("projector invariant: not idempotent")


def test_dependent_basis_violates_the_subspace_invariant():
    doc = json.loads(golden_text("sep1_std_d2"))
    doc["valuation"]["p0"] = {"basis": [["1", "1"], ["2", "2"]]}
    res = verify(loads(json.dumps(doc)))
    assert res.first_failure.startswith("subspace invariant")


def test_wrong_claimed_value_and_blame():
    assert verify(_edit("sep1_std_d2", claimed_value={"basis": [["1", "0"]]})).first_failure.startswith(
        "value mismatch")
    assert verify(_edit("sep1_pba_undefined", claimed_blame="/L")).first_failure.startswith("blame mismatch")
    assert verify(_edit("sep1_pba_undefined", claimed_verdict="UNSAT")).first_failure.startswith("verdict mismatch")


def test_com_certificate_checks_admissibility():
    doc = json.loads(golden_text("sep1_pba_undefined"))
    doc["semantics"] = "COM"
    doc["claimed_verdict"] = "UNSAT"
    doc.pop("claimed_blame")
    res = verify(loads(json.dumps(doc)))
    assert res.first_failure == "COM admissibility: p0 and p1 do not commute"


def test_undefined_claim_outside_pba_is_rejected():
    assert not verify(_edit("sep1_std_d2", claimed_verdict="UNDEFINED", claimed_value=None)).ok


def test_operational_errors_are_exceptions():
    doc = json.loads(golden_text("sep1_std_d2"))
    del doc["valuation"]["p2"]
    with pytest.raises(MissingAtomError):
        verify(loads(json.dumps(doc)))
    doc = json.loads(golden_text("sep1_std_d2"))
    doc["dimension"] = 3
    with pytest.raises(DimensionMismatchError):
        verify(loads(json.dumps(doc)))


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(format_version=2),
    lambda d: d.update(semantics="XYZ"),
    lambda d: d.update(field="REAL"),
    lambda d: d.update(dimension=0),
    lambda d: d.update(valuation=[]),
    lambda d: d["valuation"].update(q0={"basis": [["1", "0"]]}),
    lambda d: d["valuation"].update(p0={"vector": [["1", "0"]]}),
    lambda d: d["valuation"].update(p0={"basis": [[0.5, "0"]]}),
    lambda d: d["valuation"].update(p0={"basis": [["1.5", "0"]]}),
    lambda d: d.update(claimed_verdict="MAYBE"),
])
def test_malformed_documents(mutate):
    doc = json.loads(golden_text("sep1_std_d2"))
    mutate(doc)
    with pytest.raises(CertificateFormatError):
        cert = loads(json.dumps(doc))
        verify(cert)


def test_not_json():
    with pytest.raises(CertificateFormatError):
        loads("{not json")


def test_missing_semantics_defaults_to_std():
    doc = json.loads(golden_text("sep1_std_d2"))
    del doc["semantics"]
    assert loads(json.dumps(doc)).semantics == "STD"


def test_gauss_certificate_round_trip():
    u = {0: Subspace.from_vectors([[Gauss(1), Gauss(0, 1)]], 2, Field.GAUSS)}
    cert = certificate_for("p0 & ~~p0", "STD", 2, u, Field.GAUSS)
    text = dumps(cert)
    assert '"0+1i"' in text
    assert dumps(loads(text)) == text and verify(loads(text)).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["STD", "COM", "PBA"]), st.integers(1, 3),
       st.sampled_from([Field.RAT, Field.GAUSS]))
def test_round_trip_and_verification_of_random_certificates(seed, semantics, d, field):
    rng = make_rng(seed)
    text = "(p0 | ~p1) & ~(p0 & p1)"
    if semantics == "STD":
        v = {i: random_subspace(d, rng, field) for i in range(2)}
    elif semantics == "COM":
        p = random_projector(d, rng, field)
        v = {0: p, 1: projector_of(Subspace.full(d, field))}
    else:
        v = {i: random_projector(d, rng, field) for i in range(2)}
    cert = certificate_for(text, semantics, d, v, field)
    s = dumps(cert)
    again = loads(s)
    assert dumps(again) == s
    assert again == cert
    assert verify(again).ok


def test_entry_of_subspace_lists_basis_vectors():
    e = Entry.of_subspace(sep1_std_witness(3)[0])
    assert e.kind == "basis" and e.rows == (("1", "1", "0"),)
    assert Certificate("STD", Field.RAT, 3, {0: e}, SEP1_TEXT).formula == SEP1_TEXT
