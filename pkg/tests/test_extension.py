from fractions import Fraction

import pytest

from dolbeault_deform.algebra import (BundleSpec, evaluate, parse_form, parse_tensor_form,
                                      scalar_to_tensor)
from dolbeault_deform.calculus import delbar, pairing
from dolbeault_deform.deformed import complete_point
from dolbeault_deform.extension import (canonical_deformation, holomorphic_section_deformation,
                                        obstruction_matrix, poly_gcd_univariate,
                                        pullback_series, vt_analysis)
from dolbeault_deform.hodge import delbar_star, green, harmonic_basis
from dolbeault_deform.kuranishi import beltrami_series
from dolbeault_deform.models import builtin
from dolbeault_deform.scalars import GaussRational, Poly

IW = builtin("iwasawa")
S = beltrami_series(IW)
O1, O2 = BundleSpec((1,)), BundleSpec((2,))
HALF = Fraction(1, 2)


def closedness_residual(rep):
    t = rep.total()
    return delbar(t) - pairing(S.total(), t)


def test_holomorphic_two_form_is_rigid():
    rep = canonical_deformation(parse_tensor_form("f1 ^ f2", IW, O2), S)
    assert rep.unobstructed and rep.is_constant() and rep.terminated
    assert not closedness_residual(rep)


def test_obstruction_generators():
    rep = canonical_deformation(parse_tensor_form("f2 ^ f3", IW, O2), S)
    assert [g.to_string() for g in rep.bv_generators] == ["-t21", "-t22"]
    rep = canonical_deformation(parse_tensor_form("f1 ^ f3", IW, O2), S)
    assert [g.to_string() for g in rep.bv_generators] == ["-t11", "-t12"]


def test_obstructed_class_closes_on_its_locus():
    rep = canonical_deformation(parse_tensor_form("f2 ^ f3", IW, O2), S)
    res = closedness_residual(rep)
    assert res
    pt = complete_point(S.params, {"t11": HALF, "t31": 3, "t12": -1})
    assert not evaluate(res, pt)
    pt = complete_point(S.params, {"t21": HALF})
    assert evaluate(res, pt)


def test_nonconstant_unobstructed_class():
    sigma0 = scalar_to_tensor(parse_form("f3 ^ fb1", IW), O1)
    rep = canonical_deformation(sigma0, S)
    assert rep.unobstructed and not rep.is_constant()
    assert not closedness_residual(rep)


def test_recursion_first_part_identity():
    # sigma(t) = H sigma(t) + delbar* G <phi | sigma(t)>, degree by degree
    sigma0 = scalar_to_tensor(parse_form("f3 ^ fb1", IW), O1)
    rep = canonical_deformation(sigma0, S)
    phis = S.pieces
    for k, piece in rep.pieces.items():
        if k == 0:
            continue
        acc = None
        for i in range(1, k + 1):
            if i in phis and k - i in rep.pieces:
                t = pairing(phis[i], rep.pieces[k - i])
                acc = t if acc is None else acc + t
        assert piece == delbar_star(green(acc, 2), 2)


def test_gauge_flags_and_report():
    rep = canonical_deformation(scalar_to_tensor(parse_form("f3 ^ fb1", IW), O1), S)
    assert rep.gauge_flags() == (True, True)
    d = rep.to_dict()
    assert d["unobstructed"] and d["caveats"] == [] and d["q"] == 1


def test_non_harmonic_input_is_projected():
    sigma0 = scalar_to_tensor(parse_form("f1 ^ f3 ^ fb3", IW), O2)
    rep = canonical_deformation(sigma0, S)
    assert rep.diagnostics and "harmonic projection" in rep.diagnostics[0]


def test_holomorphic_section_requires_q0():
    with pytest.raises(ValueError):
        holomorphic_section_deformation(scalar_to_tensor(parse_form("f1 ^ fb1", IW), O1), S)
    rep = holomorphic_section_deformation(parse_tensor_form("f1 ^ f2", IW, O2), S)
    assert rep.precertified is False


def test_vt_analysis_h20():
    basis = harmonic_basis(IW, O2, 0)
    pts = [{}, {"t11": HALF}, {"t11": HALF, "t22": HALF}]
    an = vt_analysis(basis, S, pts)
    assert an.full
    assert [r.dim_vt for r in an.rows] == [3, 2, 1]
    assert all(r.certified for r in an.rows)
    T = obstruction_matrix(an.reports)
    assert len(T) == 6 and len(T[0]) == 3


def test_pullback_and_gcd():
    rep = canonical_deformation(parse_tensor_form("f2 ^ f3", IW, O2), S)
    s = Poly.var(("s",), "s")
    pulled = pullback_series(rep, {"t21": s * s, "t22": s * s * s}, ("s",))
    assert poly_gcd_univariate(pulled.bv_generators) == s * s
    with pytest.raises(ValueError, match="h\\(0\\) = 0"):
        pullback_series(rep, {"t21": s + Poly.constant(("s",), GaussRational(1))}, ("s",))


def test_pullback_of_beltrami_series():
    s = Poly.var(("s",), "s")
    pulled = pullback_series(S, {p: s for p in S.params}, ("s",))
    assert pulled.mc_certified


def test_gcd_of_coprime_is_one():
    s = Poly.var(("s",), "s")
    one = Poly.constant(("s",), GaussRational(1))
    assert poly_gcd_univariate([s, s + one]) == one
    assert poly_gcd_univariate([]) is None
