from fractions import Fraction
from math import comb

import pytest

from dolbeault_deform.algebra import BundleSpec
from dolbeault_deform.deformed import (DeformedComplex, NonIntegrablePoint, check_integrable,
                                       complete_point, deformed_cohomology_dim,
                                       deformed_harmonics, rebigrade_crosscheck)
from dolbeault_deform.hodge import cohomology_dim
from dolbeault_deform.kuranishi import BeltramiSeries, beltrami_series, solve_mc
from dolbeault_deform.linalg import Matrix
from dolbeault_deform.models import builtin

HALF = Fraction(1, 2)
IW = builtin("iwasawa")
S = beltrami_series(IW)
POINTS = [{}, {"t31": HALF}, {"t11": HALF}, {"t11": HALF, "t22": HALF}]


def test_complete_point():
    pt = complete_point(("a", "b"), {"a": 1})
    assert pt["b"] == 0
    with pytest.raises(KeyError):
        complete_point(("a",), {"z": 1})


@pytest.mark.parametrize("pt", POINTS)
def test_zero_point_matches_undeformed_and_functions_rigid(pt):
    # del kills every fb-word, so <phi| vanishes on scalar (0,q)-forms
    o0 = BundleSpec(())
    for q in range(4):
        assert deformed_cohomology_dim(IW, o0, q, pt, S) == cohomology_dim(IW, o0, q)


def test_at_zero_everything_matches():
    for spec in ("O^1", "O^2", "T", "K", "T*O^1"):
        b = BundleSpec.parse(spec, 3)
        for q in range(4):
            assert deformed_cohomology_dim(IW, b, q, {}, S) == cohomology_dim(IW, b, q)


def test_torus_dimensions_constant():
    t = builtin("torus:2")
    s = beltrami_series(t)
    pt = {"t11": HALF, "t12": Fraction(1, 3), "t21": 2, "t22": -1}
    for spec, rank in (("O^0", 1), ("O^1", 2), ("T", 2), ("K", 1)):
        b = BundleSpec.parse(spec, 2)
        for q in range(3):
            assert deformed_cohomology_dim(t, b, q, pt, s) == rank * comb(2, q)


def test_h20_jumps():
    o2 = BundleSpec((2,))
    dims = [deformed_cohomology_dim(IW, o2, 0, p, S) for p in POINTS]
    assert dims == [3, 3, 2, 1]


@pytest.mark.parametrize("spec", ["O^1", "T", "T*O^1"])
def test_squares_to_zero(spec):
    for pt in POINTS:
        assert DeformedComplex(IW, BundleSpec.parse(spec, 3), pt, S).squares_to_zero()


def test_deformed_hodge_identities():
    cx = DeformedComplex(IW, BundleSpec((1,)), {"t11": HALF, "t22": HALF}, S)
    for q in range(4):
        box, H, G, ker = cx.hodge(q)
        I = Matrix.identity(cx.dims[q])
        assert (cx.mats[q] @ H).is_zero()
        assert (G @ H).is_zero()
        assert box @ G == I - H
        assert len(ker) == cx.cohomology_dim(q)


def test_deformed_harmonics_flags():
    basis, flags = deformed_harmonics(IW, BundleSpec((2,)), 0, {"t11": HALF}, S)
    assert len(basis) == 2 and len(flags) == 2


def test_obstructed_point_refused():
    nak = builtin("nakamura_iii_3b")
    s = solve_mc(nak, order=4)
    with pytest.raises(NonIntegrablePoint):
        check_integrable(s, {"t11": HALF, "t12": HALF})
    assert check_integrable(s, {})


def test_truncated_series_refused_away_from_zero():
    s = BeltramiSeries(IW, S.params, dict(S.pieces), 3, False)
    with pytest.raises(NonIntegrablePoint, match="truncated"):
        DeformedComplex(IW, BundleSpec(()), {"t11": HALF}, s)
    DeformedComplex(IW, BundleSpec(()), {}, s)


@pytest.mark.parametrize("spec", ["O^0", "O^1", "O^2", "T", "K"])
def test_crosscheck_dimensions(spec):
    b = BundleSpec.parse(spec, 3)
    for pt in POINTS:
        for q in range(4):
            r = rebigrade_crosscheck(IW, b, q, pt, S)
            assert r.equal and r.delbar_t_squared_zero
