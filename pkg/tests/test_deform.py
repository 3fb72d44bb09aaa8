from fractions import Fraction

import pytest

from pclab import catalog
from pclab.classify import is_H_paracontact
from pclab.curvature import Geometry
from pclab.deform import (
    DegenerateDeformedMetric,
    DeformationParams,
    check_deformed_ricci_relation,
    check_restricted_curvature_relation,
    compose_matches,
    d_homothety,
    deformed_spec,
)
from pclab.frame import ValidationError

FAMILIES3 = ("g2", "g3", "g4", "g5g6", "g7")


def nz(entry):
    return catalog.get_entry(entry).nonzero


def deform(entry, t, eps=1, assignment=None):
    frame = catalog.instantiate(entry, assignment)
    return frame, d_homothety(frame, DeformationParams(t, eps))


def test_identity_deformation():
    for entry in FAMILIES3 + ("km5d",):
        spec = catalog.get_entry(entry).spec
        out = deformed_spec(spec, DeformationParams(1))
        assert (out.brackets, out.metric, out.phi, out.xi_index) == \
            (spec.brackets, spec.metric, spec.phi, spec.xi_index)


def test_heisenberg_t2():
    _, d = deform("heisenberg", 2)
    assert d.metric[0][0] == 1
    # [e, phi e] = 2 xi = 4 xi_t
    assert str(d.spec.brackets[1][2][0]) == "4"


def test_case1_stays_H_paracontact():
    orig, d = deform("g2", 2, assignment={"gamma": 1, "beta": 0})
    assert is_H_paracontact(Geometry(orig)).holds
    assert is_H_paracontact(Geometry(d)).holds


@pytest.mark.parametrize("entry,t", [("g3", 2), ("g2", 3), ("g7", 1), ("km5d", 2)])
def test_ricci_relation(entry, t):
    orig, d = deform(entry, t)
    assert check_deformed_ricci_relation(Geometry(orig), Geometry(d), t) == []


@pytest.mark.parametrize("entry,t,assignment", [
    ("heisenberg", 4, None),
    ("g7", 2, {"delta": 1, "beta": 1}),
    ("g4", 1, None),
    ("g2", Fraction(1, 2), None),
    ("km5d", 3, None),
])
def test_restricted_curvature_relation(entry, t, assignment):
    orig, d = deform(entry, t, assignment=assignment)
    assert check_restricted_curvature_relation(Geometry(orig), Geometry(d), t) == []


@pytest.mark.parametrize("entry", FAMILIES3)
@pytest.mark.parametrize("t", [2, 3, Fraction(1, 2), -1])
def test_H_paracontact_locus_invariant(entry, t):
    orig, d = deform(entry, t)
    before = is_H_paracontact(Geometry(orig), nz(entry)).conditions
    after = is_H_paracontact(Geometry(d), nz(entry)).conditions
    assert before.equivalent(after)


@pytest.mark.parametrize("entry", FAMILIES3)
def test_composition(entry):
    frame = catalog.instantiate(entry)
    assert compose_matches(frame, 2, 3)
    assert compose_matches(frame, Fraction(1, 2), 2)
    assert compose_matches(frame, -1, -1)


def test_bad_params():
    with pytest.raises(ValueError):
        DeformationParams(0)
    with pytest.raises(ValueError):
        DeformationParams(2, eps=0)


def test_negative_eps_breaks_unit_reeb():
    frame = catalog.instantiate("heisenberg")
    # g_t(xi_t, xi_t) = (t - t(t-1)) / t^2 = 2/t - 1
    with pytest.raises(DegenerateDeformedMetric):
        d_homothety(frame, DeformationParams(2, -1))
    with pytest.raises(ValidationError):
        d_homothety(frame, DeformationParams(3, -1))
    assert d_homothety(frame, DeformationParams(1, -1)).spec.brackets == frame.spec.brackets
