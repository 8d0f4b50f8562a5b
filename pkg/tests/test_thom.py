from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from charclass.algebra import RingPresentation, bso, poly_reduce, pontryagin_ring
from charclass.errors import DegreeMismatchError, ModelError, ParseError, PresentationMismatchError
from charclass.fixtures import load_model
from charclass.genus import characteristic_sequence
from charclass.thom import (
    ThomElement,
    eta_restrict,
    fiber_integrate,
    mmm_class,
    mtso_basis,
    parse_thom,
    projective_bundle_model,
    restrict_bso,
    signature_via_L,
    sphere_bundle_model,
    tangent_class,
    thom_promote,
    transfer_pullback_check,
    transfer_sides,
    trivial_bundle_model,
)
from conftest import polys, small_ints

MODELS = {name: load_model(name) for name in ("sphere-S3-rank4", "cp1-bundle", "trivial-M3", "cp1-over-point")}
B4 = bso(4)


# -- Thom elements --------------------------------------------------------------

def test_parse_and_print():
    e = parse_thom("u_-4*p1*p2 - 2*u_-4", B4)
    assert str(e) == "-2*u_-4 + u_-4*p1*p2"
    assert e.label == "u_-4"
    assert sorted(e.components()) == [-4, 8]  # total degree -4 + payload degree
    assert e.components()[8].degree() == 8
    assert str(parse_thom("0", B4, shift=-4)) == "0"
    with pytest.raises(ParseError):
        parse_thom("u_-4*p1 + u_-3*p1", B4)
    with pytest.raises(ParseError):
        parse_thom("p1", B4)


def test_module_structure():
    u = thom_promote(B4.one(), 4)
    x = u * B4.gen("p1") + u * B4.gen("chi")
    assert str(x) == "u_-4*chi + u_-4*p1"
    assert str(x - x) == "0"
    with pytest.raises(PresentationMismatchError):
        x + ThomElement(-3, bso(3).one())


def test_eta_restriction():
    assert str(eta_restrict(parse_thom("u_-4*p1*p2", B4))) == "0"
    assert str(eta_restrict(parse_thom("u_-4", B4))) == "u_-3"
    assert str(eta_restrict(parse_thom("u_-4*chi", B4))) == "0"
    assert str(eta_restrict(parse_thom("u_-4*p1 + u_-4*p1^2", B4))) == "u_-3*p1 + u_-3*p1^2"
    assert str(restrict_bso(bso(5).parse("p1 + p2"), 3)) == "p1"


def test_json_round_trip():
    e = parse_thom("u_-4*p1 - 1/3*u_-4*chi", B4)
    assert ThomElement.from_dict(e.to_dict()) == e


def test_mtso_basis():
    assert [str(b) for b in mtso_basis(3, 1).basis] == ["u_-3*p1"]
    assert [str(b) for b in mtso_basis(4, 4).basis] == ["u_-4*p2", "u_-4*p1*chi", "u_-4*p1^2"]
    assert len(mtso_basis(3, 2)) == 0


# -- bundle models ---------------------------------------------------------------

def test_sphere_bundle_vanishing():
    model = MODELS["sphere-S3-rank4"]
    L = characteristic_sequence("L", model.vertical_ring, 64)
    for d, comp in L.components().items():
        if d:
            assert not mmm_class(model, comp)
    assert signature_via_L(model) == 0


def test_quaternionic_plane_base():
    model = MODELS["sphere-S3-rank4"]
    L = tangent_class(model, "L")
    assert str(L) == "1 + 2/3*h + h^2"
    assert L.coefficient(model.fundamental) == 1  # sign(HP^2)


def test_projective_bundle_integrals():
    model = MODELS["cp1-bundle"]
    assert str(model.integrate(model.element("4*z^2"))) == "-4*h"
    assert str(mmm_class(model, model.vertical_ring.parse("chi^2"))) == "0"
    assert str(mmm_class(model, model.vertical_ring.parse("chi"))) == "2"
    assert model.fibre_basis_labels() == ["1", "z"]
    lhs, rhs = transfer_sides(model, model.vertical_ring.one())
    assert str(lhs) == str(rhs) == "2"
    assert signature_via_L(model) == 0  # Hirzebruch surface


def test_constructor_matches_fixture():
    fixture = MODELS["cp1-bundle"]
    built = projective_bundle_model(fixture.base, "h")
    for g in ("chi", "p1"):
        assert str(built.vertical[g]) == str(fixture.vertical[g])


def test_sphere_over_point_has_euler_number_two():
    model = MODELS["cp1-over-point"]
    assert str(mmm_class(model, model.vertical_ring.parse("chi"))) == "2"
    assert model.fibre_euler_characteristic() == 2


def test_odd_rank_sphere_bundle():
    model = sphere_bundle_model(3, bso(3, truncation=12), {"p1": "p1"})
    assert str(model.vertical["chi"]) == "2*z"
    assert str(model.element("z^2")) == "1/4*p1"
    # f_!(chi^3) = f_!(8 z^3) = 8 * p1/4 = 2 p1
    assert str(mmm_class(model, model.vertical_ring.parse("chi^3"))) == "2*p1"


def test_model_validation():
    base = RingPresentation([("h", 2)], [("h", 2, 0)])
    with pytest.raises(ModelError):
        sphere_bundle_model(2, base, {"p1": "h^2"}, "h")  # e != 0 needs the Gysin relation
    with pytest.raises(DegreeMismatchError):
        sphere_bundle_model(4, base, {"p1": "h"})
    with pytest.raises(ModelError):
        trivial_bundle_model(base, [("w", 3)], [], 3)  # no relation on w
    with pytest.raises(ModelError):
        trivial_bundle_model(base, [("w", 3)], [("w", 2, "0")], 2)  # wrong fibre dimension
    two = RingPresentation([("a", 2), ("b", 2)], [("a", 2, 0), ("b", 2, 0)])
    with pytest.raises(ModelError):
        trivial_bundle_model(two, [("w", 3)], [("w", 2, "0")], 3, fundamental=(1, 0))
    with pytest.raises(ModelError):
        signature_via_L(trivial_bundle_model(base, [("w", 3)], [("w", 2, "0")], 3))


def test_transfer_identity_needs_even_fibre():
    with pytest.raises(ModelError):
        transfer_sides(MODELS["sphere-S3-rank4"], MODELS["sphere-S3-rank4"].vertical_ring.one())


# -- properties -----------------------------------------------------------------------

@settings(max_examples=500)
@given(st.sampled_from(sorted(MODELS)), st.data())
def test_projection_formula(name, data):
    model = MODELS[name]
    b = data.draw(polys(model.base, 8, small_ints))
    x = data.draw(polys(model.total, 11, small_ints))
    assert fiber_integrate(model, model.pullback(b) * x) == b * fiber_integrate(model, x)


@settings(max_examples=60)
@given(st.sampled_from(["cp1-bundle", "cp1-over-point"]), st.data())
def test_transfer_identity_for_pontryagin_polynomials(name, data):
    # p1(T_v) vanishes on both models, so every y in p1 passes
    model = MODELS[name]
    y = poly_reduce(data.draw(polys(pontryagin_ring(1), 8, small_ints)), model.vertical_ring)
    assert transfer_pullback_check(model, y)


def test_transfer_detects_non_pulled_back_classes():
    model = MODELS["cp1-bundle"]
    assert not transfer_pullback_check(model, model.vertical_ring.parse("chi"))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_thom_isomorphism_is_degreewise_bijective(n):
    ring = bso(n)
    for d in range(-20, 21):
        basis = mtso_basis(n, d).basis
        monos = ring.normal_monomials(d + n) if d + n >= 0 else []
        assert len(basis) == len(monos)
        assert {str(b) for b in basis} == {str(thom_promote(ring.monomial(e), n)) for e in monos}


@settings(max_examples=60)
@given(st.data())
def test_eta_restriction_is_module_map(data):
    a = data.draw(polys(B4, 8, small_ints))
    b = data.draw(polys(B4, 8, small_ints))
    u = thom_promote(B4.one(), 4)
    lhs = eta_restrict(u * (a * b))
    rhs = eta_restrict(u * a) * restrict_bso(b, 3)
    assert str(lhs) == str(rhs)


@settings(max_examples=60)
@given(st.data())
def test_integration_is_linear(data):
    model = MODELS["cp1-bundle"]
    x = data.draw(polys(model.total, 6, small_ints))
    y = data.draw(polys(model.total, 6, small_ints))
    c = data.draw(st.fractions(min_value=-3, max_value=3, max_denominator=5))
    assert model.integrate(x + y * c) == model.integrate(x) + model.integrate(y) * c
