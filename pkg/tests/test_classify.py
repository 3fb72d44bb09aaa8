import random

import pytest

from pclab import catalog
from pclab import tensors as T
from pclab.classify import (
    KMFit,
    PreconditionError,
    Verdict,
    check_eq4,
    check_kno1,
    check_kparacontact_identities,
    classify,
    eta_einstein_fit,
    is_H_paracontact,
    is_harmonic_map,
    is_iht,
    is_K_paracontact,
    is_paraSasakian,
    km_fit,
    soliton_solve,
)
from pclab.conditions import ConditionSet, vanishing
from pclab.curvature import Geometry
from pclab.scalar import parse_expr

FAMILIES3 = ("g2", "g3", "g4", "g5g6", "g7")


def geo(entry, assignment=None):
    return Geometry(catalog.instantiate(entry, assignment))


def nz(entry):
    return catalog.get_entry(entry).nonzero


def locus(entry, *eqs):
    params = catalog.get_entry(entry).params
    return vanishing(params, [parse_expr(e, params) for e in eqs], nonzero=nz(entry))


def P(entry, text):
    return parse_expr(text, catalog.get_entry(entry).params)


# -- K-paracontact / paraSasakian ---------------------------------------------------


def test_K_paracontact_examples():
    assert is_K_paracontact(geo("g5g6")).holds
    assert is_K_paracontact(geo("g3")).conditions.equivalent(locus("g3", "beta - gamma"))
    assert is_K_paracontact(geo("g2"), nz("g2")).status == "fails"


def test_paraSasakian_examples():
    assert is_paraSasakian(geo("heisenberg")).holds
    assert is_paraSasakian(geo("g4")).status == "fails"
    assert is_paraSasakian(geo("g3")).conditions.equivalent(locus("g3", "beta - gamma"))


@pytest.mark.parametrize("entry", FAMILIES3)
def test_3d_paraSasakian_iff_K(entry):
    g = geo(entry)
    assert is_paraSasakian(g, nz(entry)).conditions.equivalent(is_K_paracontact(g, nz(entry)).conditions)


def test_eq4_examples():
    g = geo("eq4_nonsasakian")
    assert check_eq4(g).holds
    assert is_paraSasakian(g).status == "fails"
    assert check_eq4(geo("heisenberg")).holds
    assert check_eq4(geo("flat_e2")).status == "fails"


# -- eta-Einstein, (kappa, mu) ----------------------------------------------------------


def test_eta_einstein_examples():
    fit = eta_einstein_fit(geo("g5g6"))
    assert fit.verdict.holds
    assert fit.a == P("g5g6", "delta^2 + 2") and fit.b == P("g5g6", "-delta^2 - 4")
    fit = eta_einstein_fit(geo("heisenberg"))
    assert fit.verdict.holds and str(fit.a) == "2" and str(fit.b) == "-4"
    v = eta_einstein_fit(geo("g2"), nz("g2")).verdict
    assert not v.holds_at({"beta": 0, "gamma": 1})
    assert v.conditions.equivalent(locus("g2", "beta - 1"))


def test_km_examples():
    fit = km_fit(geo("km5d"))
    assert fit.verdict.holds and str(fit.kappa) == "-1" and str(fit.mu) == "2"
    fit = km_fit(geo("eq4_nonsasakian"))
    assert fit.verdict.holds and str(fit.kappa) == "-1" and str(fit.mu) == "0"
    fit = km_fit(geo("heisenberg"))
    assert fit.verdict.holds and str(fit.kappa) == "-1" and fit.mu_unconstrained


@pytest.mark.parametrize("entry", FAMILIES3 + ("km5d",))
def test_km_crosschecks(entry):
    fit = km_fit(geo(entry), nz(entry))
    assert fit.verdict.holds
    assert all(fit.crosschecks.values())


def test_kno1_flat_case():
    g = geo("flat_e2")
    fit = km_fit(g)
    assert str(fit.kappa) == "0"
    assert not T.is_zero_mat(g.frame.h)
    assert check_kno1(g, fit).holds


@pytest.mark.parametrize("entry", ("g2", "g3"))
def test_kno1_symbolic(entry):
    g = geo(entry)
    assert check_kno1(g, km_fit(g, nz(entry)), nz(entry)).holds


def test_kno1_without_kappa_factor_fails():
    g = geo("flat_e2")
    assert check_kno1(g, km_fit(g), literal=True).status == "fails"


def test_kno1_preconditions():
    g = geo("km5d")
    with pytest.raises(PreconditionError):
        check_kno1(g, km_fit(g))
    params = g.frame.params
    failed = KMFit(Verdict("km_space", ConditionSet.never(params)), None, None)
    with pytest.raises(PreconditionError):
        check_kno1(g, failed)


# -- harmonicity ------------------------------------------------------------------


@pytest.mark.parametrize("entry", FAMILIES3 + ("km5d",))
def test_H_paracontact_everywhere(entry):
    assert is_H_paracontact(geo(entry), nz(entry)).holds


@pytest.mark.parametrize("entry", ("g3", "g5g6"))
def test_harmonic_map(entry):
    assert is_harmonic_map(geo(entry), nz(entry)).holds


def test_iht_examples():
    assert is_iht(geo("g3")).conditions.equivalent(locus("g3", "beta - gamma"))
    for entry in ("g4", "g5g6", "g7"):
        assert is_iht(geo(entry), nz(entry)).holds
    assert is_iht(geo("g2"), nz("g2")).status == "fails"
    assert geo("g2").trace_h2 == P("g2", "-2*gamma^2")


# -- solitons ------------------------------------------------------------------------


def test_soliton_examples():
    sol = soliton_solve(geo("hyp3"))
    assert sol.verdict.holds and str(sol.lam) == "-2" and sol.trivial
    assert soliton_solve(geo("flat_e2")).lam is None
    assert soliton_solve(geo("g2"), nz("g2")).verdict.status == "fails"
    assert soliton_solve(geo("g5g6"), nz("g5g6")).verdict.status == "fails"


@pytest.mark.parametrize("entry", FAMILIES3 + ("km5d",))
def test_soliton_lambda_is_minus_2n(entry):
    g = geo(entry)
    sol = soliton_solve(g, nz(entry))
    if sol.lam is not None:
        assert sol.verdict.conditions.reduce(sol.lam + 2 * g.frame.n).is_zero()


# -- K-paracontact curvature identities ---------------------------------------------


def test_kparacontact_identities():
    assert check_kparacontact_identities(geo("g5g6")).holds
    g = geo("g3")
    on = locus("g3", "beta - gamma")
    assert check_kparacontact_identities(g, on).holds
    with pytest.raises(PreconditionError):
        check_kparacontact_identities(geo("g4"))


# -- classification invariants --------------------------------------------------------


@pytest.mark.parametrize("entry", FAMILIES3 + ("km5d",))
def test_classification_invariants(entry):
    c = classify(geo(entry), nz(entry))
    f = c.flags
    assert f["paraSasakian"].conditions.implies(f["K_paracontact"].conditions)
    # K-paracontact gives Q xi = -2n xi, hence IHT
    assert f["K_paracontact"].conditions.implies(f["iht"].conditions)
    assert f["soliton"].conditions.implies(f["iht"].conditions)
    assert f["harmonic_map"].conditions.implies(f["H_paracontact"].conditions)


@pytest.mark.parametrize("entry", FAMILIES3)
def test_verdicts_agree_with_specializations(entry):
    rng = random.Random(f"cls-{entry}")
    sym = classify(geo(entry), nz(entry))
    for _ in range(3):
        a = catalog.random_assignment(entry, rng)
        num = classify(geo(entry, a))
        for name in ("K_paracontact", "eq4_holds", "iht", "eta_einstein"):
            assert sym.flags[name].holds_at(a) == num.flags[name].holds, (name, a)


def test_km5d_summary():
    g = geo("km5d")
    c = classify(g)
    assert not T.is_zero_mat(g.frame.h)
    assert T.is_zero_mat(T.mat_mul(g.frame.h, g.frame.h))
    assert c.flags["K_paracontact"].status == "fails"
    assert c.flags["iht"].holds
