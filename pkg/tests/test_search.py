import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import qlsat.search as search
from qlsat.exactla import Field, Matrix, Projector, Subspace
from qlsat.formula import And, Atom, Neg, Or, atoms, enumerate_formulas, parse
from qlsat.sampling import commuting_family, make_rng, spectral_projector
from qlsat.search import (
    SearchBudget,
    SearchReport,
    SoundnessError,
    Verdict,
    brute_force_com,
    classical_model,
    decide_com_sat,
    oracle_family_d2,
    reconstruct_rational,
    search_pba,
    search_std,
    truth_table,
)
from qlsat.semantics import Defined, eval_com, eval_pba, eval_std

SEP1 = parse("(p0 & (p1 | p2)) & ~((p0 & p1) | (p0 & p2))")


def classical(phi, assignment):
    if isinstance(phi, Atom):
        return assignment[phi.index]
    if isinstance(phi, Neg):
        return not classical(phi.child, assignment)
    a, b = classical(phi.left, assignment), classical(phi.right, assignment)
    return (a and b) if isinstance(phi, And) else (a or b)


def test_budget_validation():
    for bad in (dict(max_trials=0), dict(dimension=0), dict(candidate_denominator_bound=0), dict(rng_seed=-1),
                dict(rng_seed=2**64)):
        with pytest.raises(ValueError):
            SearchBudget(**bad)
    assert SearchBudget(field="GAUSS").field is Field.GAUSS


# --- truth tables and the COM decider ------------------------------------------------


@pytest.mark.parametrize("phi", list(enumerate_formulas(3, 2)))
def test_truth_table_matches_direct_evaluation(phi):
    idx, mask = truth_table(phi)
    for a in range(1 << len(idx)):
        assignment = {i: bool(a >> k & 1) for k, i in enumerate(idx)}
        assert bool(mask >> a & 1) == classical(phi, assignment)


def test_truth_table_limit():
    big = Atom(0)
    for i in range(1, 21):
        big = And(big, Atom(i))
    with pytest.raises(ValueError):
        truth_table(big)


def test_decide_com_examples():
    for d in (1, 2, 3, 5):
        rep = decide_com_sat(SEP1, d)
        assert rep.verdict is Verdict.UNSAT and rep.witness is None and rep.method == "boolean-reduction"
    rep = decide_com_sat(parse("p0"), 1)
    assert rep.sat and rep.witness[0].matrix == Matrix.identity(1)
    rep = decide_com_sat(parse("~p0 & p1"), 3)
    assert rep.witness[0].is_zero() and rep.witness[1].matrix == Matrix.identity(3)
    assert not eval_com(parse("~p0 & p1"), rep.witness).is_zero()
    with pytest.raises(ValueError):
        decide_com_sat(SEP1, 0)


def test_classical_model():
    assert classical_model(SEP1) is None
    m = classical_model(parse("p1 & ~p4"))
    assert m == {1: True, 4: False}


def test_com_decider_agrees_with_finite_family_brute_force():
    """Both directions on every raw tree with <= 2 atoms and <= 3 connectives, d = 2."""
    family = oracle_family_d2()
    assert len(family) == 6
    boolean = family[:2]
    checked = 0
    for phi in enumerate_formulas(2, 3):
        decided = decide_com_sat(phi, 2).sat
        found = brute_force_com(phi, family)
        assert decided == (found is not None), phi
        # decided SAT must already be witnessed by simultaneous 0/I diagonal valuations
        assert decided == (brute_force_com(phi, boolean) is not None), phi
        checked += 1
    assert checked == 1112


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4), st.sampled_from(list(enumerate_formulas(3, 3))))
def test_com_value_is_the_spectral_truth_table(seed, d, phi):
    """On a commuting family the COM value projects onto the eigenvectors where phi is classically true."""
    fam = commuting_family(3, d, make_rng(seed))
    v = dict(enumerate(fam.projectors))
    true_slots = [k for k in range(d) if classical(phi, {i: k in fam.subsets[i] for i in range(3)})]
    assert eval_com(phi, v) == spectral_projector(fam.basis, true_slots)


# --- rational reconstruction ------------------------------------------------------


def test_reconstruct_rational_examples():
    assert reconstruct_rational(0.5, 10) == Fraction(1, 2)
    assert reconstruct_rational(1 / 3, 10) == Fraction(1, 3)
    assert reconstruct_rational(0.70710678, 50) == Fraction(29, 41)
    assert reconstruct_rational(-2.0, 1) == -2
    for bad in (math.nan, math.inf):
        with pytest.raises(ValueError):
            reconstruct_rational(bad, 10)
    with pytest.raises(ValueError):
        reconstruct_rational(0.5, 0)


@given(st.fractions(-5, 5, max_denominator=12))
def test_reconstruct_recovers_small_rationals(q):
    assert reconstruct_rational(float(q), 12) == q


# --- STD search ---------------------------------------------------------------------


def _std_ok(phi, rep):
    return rep.sat and not eval_std(phi, rep.witness, rep.dimension).is_zero()


@pytest.mark.parametrize("d", [2, 3, 4])
def test_search_std_finds_sep1_witness(d):
    rep = search_std(SEP1, SearchBudget(dimension=d))
    assert _std_ok(SEP1, rep)
    assert rep.method in ("structured-enumeration", "random-rational", "float-local-search")


def test_search_std_never_claims_unsat():
    rep = search_std(parse("p0 & ~p0"), SearchBudget(max_trials=150))
    assert rep.verdict is Verdict.UNKNOWN and rep.witness is None
    for trials in (1, 2, 5, 20):
        rep = search_std(SEP1, SearchBudget(max_trials=trials))
        assert rep.verdict in (Verdict.SAT, Verdict.UNKNOWN)


@pytest.mark.parametrize("text", ["p0", "p0 & ~p1", "(p0 | p1) & ~(p0 & p2)", "~(p0 | ~p1)"])
def test_classically_satisfiable_lifts_within_truth_table_trials(text):
    phi = parse(text)
    rep = search_std(phi, SearchBudget(dimension=3, max_trials=50))
    assert rep.method == "boolean-lift" and rep.trials_used <= 2 ** len(atoms(phi))
    assert _std_ok(phi, rep)


def test_search_std_uses_seed_valuations():
    seeds = [{0: Subspace.from_vectors([[1, 1]], 2), 1: Subspace.from_vectors([[1, 0]], 2),
              2: Subspace.from_vectors([[0, 1]], 2)}]
    rep = search_std(SEP1, SearchBudget(), seeds=seeds)
    assert rep.method == "transferred-witness" and rep.witness == seeds[0]


def test_search_std_gauss_field():
    rep = search_std(SEP1, SearchBudget(field=Field.GAUSS))
    assert _std_ok(SEP1, rep) and rep.field is Field.GAUSS


def test_search_is_deterministic():
    b = SearchBudget(dimension=3, max_trials=300, rng_seed=7)
    assert search_std(SEP1, b) == search_std(SEP1, b)
    assert search_pba(SEP1, b) == search_pba(SEP1, b)


# --- PBA search ---------------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3])
def test_search_pba_returns_no_witness_for_sep1(d):
    rep = search_pba(SEP1, SearchBudget(dimension=d, max_trials=400))
    assert rep.verdict is Verdict.UNKNOWN and rep.witness is None


def test_search_pba_trivial():
    rep = search_pba(parse("p0"), SearchBudget(dimension=2))
    assert rep.sat and rep.method == "com-seed" and rep.witness[0].matrix == Matrix.identity(2)


@pytest.fixture
def com_blind(monkeypatch):
    """Pretend the COM decider found nothing, forcing the later search stages to run."""
    real = search.decide_com_sat

    def fake(phi, d, field=Field.RAT):
        r = real(phi, d, field)
        return SearchReport(r.formula, "COM", d, Verdict.UNSAT, "forced", 1, field=r.field)

    monkeypatch.setattr(search, "decide_com_sat", fake)


@pytest.mark.parametrize("text", ["p0 & p1", "(p0 | p1) & ~(p0 & p2)"])
def test_later_stages_produce_verified_witnesses(com_blind, text):
    phi = parse(text)
    pba = search_pba(phi, SearchBudget(dimension=3, max_trials=400))
    assert pba.method == "block-structured"
    out = eval_pba(phi, pba.witness)
    assert isinstance(out, Defined) and not out.value.is_zero()
    std = search_std(phi, SearchBudget(dimension=3, max_trials=400))
    assert std.method == "structured-enumeration" and _std_ok(phi, std)


@pytest.mark.parametrize("text", ["p0 & p1", "~p0 & (p1 | p2)"])
def test_float_stages_reconstruct_exact_witnesses(text):
    phi = parse(text)
    idx = list(atoms(phi))
    b = SearchBudget(dimension=3)
    found = search._pba_anneal(phi, idx, b, make_rng(1), 2000)
    assert found is not None
    out = eval_pba(phi, found[0])
    assert isinstance(out, Defined) and not out.value.is_zero()
    found = search._std_local_search(phi, idx, b, make_rng(1), 2000)
    assert found is not None and not eval_std(phi, found[0], 3).is_zero()


def test_certification_rejects_a_bogus_witness():
    zero = Projector(Matrix.zeros(2, 2), check=False)
    fake = SearchReport("p0", "PBA", 2, Verdict.SAT, "bogus", 1, witness={0: zero})
    with pytest.raises(SoundnessError):
        search._certify(parse("p0"), fake)
    fake = SearchReport("p0", "STD", 2, Verdict.UNKNOWN, "bogus", 1, witness={0: Subspace.full(2)})
    with pytest.raises(SoundnessError):
        search._certify(parse("p0"), fake)
