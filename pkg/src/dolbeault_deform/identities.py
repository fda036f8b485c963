"""Seeded random checks of the structural identities on a model.

Every check draws small invariant inputs with exact Gaussian-rational
coefficients from a ``random.Random`` seeded by the caller, so a run is
reproducible case for case.
"""

import random
from fractions import Fraction

from .algebra import BundleSpec, Form, TensorForm, VectorForm, evaluate, rho_extend, \
    rho_inverse, wedge
from .calculus import certify_bracket, delbar, delbar_phi, fn_bracket_general, lie10, \
    pairing
from .hodge import hodge_package
from .kuranishi import HALF, beltrami_series
from .scalars import GaussRational

__all__ = ["IdentityResult", "run_identity_suite", "IDENTITIES", "DEFAULT_CASES"]

DEFAULT_CASES = 50


class IdentityResult:
    def __init__(self, name, model, cases, failures, example=None, skipped=None):
        self.name = name
        self.skipped = skipped
        self.model = model
        self.cases = cases
        self.failures = failures
        self.example = example

    @property
    def passed(self):
        return self.failures == 0 and self.cases > 0

    @property
    def ok(self):
        """Passed, or skipped for a documented reason."""
        return self.passed or (self.skipped is not None and self.failures == 0)

    def to_dict(self):
        out = {"identity": self.name, "model": self.model, "cases": self.cases,
               "failures": self.failures, "passed": self.passed}
        if self.example is not None:
            out["first_failure"] = self.example
        if self.skipped is not None:
            out["skipped"] = self.skipped
        return out


class _Gen:
    """Random invariant objects on one model."""

    def __init__(self, model, rng):
        self.m = model
        self.rng = rng
        n = model.n
        self.bundles = [BundleSpec(()), BundleSpec((1,)), BundleSpec((n,)), BundleSpec(("T",))]
        if n >= 2:
            self.bundles.append(BundleSpec(("T", 1)))

    def coeff(self):
        r = self.rng
        a = Fraction(r.randint(-3, 3), r.randint(1, 3))
        b = Fraction(r.randint(-2, 2), r.randint(1, 3)) if r.random() < 0.4 else 0
        if not a and not b:
            a = Fraction(1)
        return GaussRational(a, b)

    def word(self, gens, k):
        return tuple(sorted(self.rng.sample(list(gens), k)))

    def form(self, degree=None, terms=3):
        n2 = 2 * self.m.n
        k = self.rng.randint(0, min(n2, 3)) if degree is None else degree
        return Form(self.m, {self.word(range(n2), k): self.coeff()
                             for _ in range(self.rng.randint(1, terms))})

    def vector(self, degree=None, kind="any", terms=3):
        n = self.m.n
        n2 = 2 * n
        k = self.rng.randint(0, 2) if degree is None else degree
        out = {}
        for _ in range(self.rng.randint(1, terms)):
            if kind == "beltrami":
                w, a = self.word(range(n, n2), k), self.rng.randrange(n)
            else:
                w, a = self.word(range(n2), k), self.rng.randrange(n2)
            out[(w, a)] = self.coeff()
        return VectorForm(self.m, out)

    def tensor(self, bundle=None, q=None):
        n = self.m.n
        bundle = bundle or self.rng.choice(self.bundles)
        q = self.rng.randint(0, n) if q is None else q
        keys = bundle.basis(n, q)
        if not keys:
            return TensorForm(self.m, bundle)
        picks = [self.rng.choice(keys) for _ in range(self.rng.randint(1, 3))]
        return TensorForm(self.m, bundle, {k: self.coeff() for k in picks})


def _run(name, model, cases, body):
    failures = 0
    example = None
    for i in range(cases):
        ok, info = body()
        if not ok:
            failures += 1
            if example is None:
                example = "case %d: %s" % (i, info)
    return IdentityResult(name, model.name, cases, failures, example)


def check_delbar_phi_squared(model, g, cases, series):
    phi = series.total()
    if not series.mc_certified:
        return IdentityResult("delbar_phi^2 = 0", model.name, 0, 0,
                              skipped="Maurer-Cartan not certified")

    def body():
        s = g.tensor()
        r = delbar_phi(phi, delbar_phi(phi, s))
        return (not r), s.to_string()
    return _run("delbar_phi^2 = 0", model, cases, body)


def check_delbar_lie(model, g, cases):
    def body():
        phi = g.vector(kind="beltrami", degree=g.rng.randint(0, 2))
        x = g.form()
        k = phi.form_degree() if phi else 0
        lhs = delbar(lie10(phi, x)) - lie10(phi, delbar(x)).scale(-1 if k % 2 else 1)
        return lhs == lie10(delbar(phi), x), "%s ; %s" % (phi.to_string(), x.to_string())
    return _run("[delbar, L10_phi] = L10_(delbar phi)", model, cases, body)


def check_lie_bracket(model, g, cases):
    def body():
        K, L = g.vector(), g.vector()
        return certify_bracket(K, L), "%s ; %s" % (K.to_string(), L.to_string())
    return _run("L_[K,L] = [L_K, L_L]", model, cases, body)


def check_pairing_square(model, g, cases):
    def body():
        phi = g.vector(degree=1, kind="beltrami", terms=2)
        s = g.tensor()
        lhs = pairing(phi, pairing(phi, s))
        rhs = pairing(fn_bracket_general(phi, phi), s).scale(HALF)
        return lhs == rhs, "%s ; %s" % (phi.to_string(), s.to_string())
    return _run("<phi|<phi|s>> = 1/2 <[phi,phi]|s>", model, cases, body)


def check_rho_multiplicative(model, g, cases):
    def body():
        phi = g.vector(degree=1, kind="beltrami", terms=2)
        a, b = g.form(terms=2), g.form(terms=2)
        lhs = rho_extend(phi, wedge(a, b))
        rhs = wedge(rho_extend(phi, a), rho_extend(phi, b))
        return lhs == rhs, "%s ; %s ; %s" % (phi.to_string(), a.to_string(), b.to_string())
    return _run("rho(a ^ b) = rho(a) ^ rho(b)", model, cases, body)


def _sample_points(params):
    if not params:
        return [{}]
    third = GaussRational(Fraction(1, 3))
    pts = [{params[0]: third},
           {p: GaussRational(Fraction(1, 5)) for p in params},
           {p: (GaussRational(Fraction(1, 2)) if k % 2 == 0 else GaussRational(0, Fraction(-1, 3)))
            for k, p in enumerate(params)}]
    return [{p: pt.get(p, GaussRational(0)) for p in params} for pt in pts]


def check_rho_inverse(model, g, cases, series):
    phi = series.total()
    points = _sample_points(series.params)
    state = {"i": 0}

    def body():
        pt = points[state["i"] % len(points)]
        state["i"] += 1
        x = g.form()
        y = rho_extend(evaluate(phi, pt), x)
        return rho_inverse(phi, y, pt) == x, x.to_string()
    return _run("rho^-1 rho = id", model, cases, body)


def check_hodge(model, g, cases):
    def body():
        n = model.n
        bundle = g.rng.choice(g.bundles)
        q = g.rng.randint(0, n)
        pkg = hodge_package(model, bundle, q)
        x = g.tensor(bundle, q).vector(pkg.basis)
        Hx = pkg.H.apply(x)
        ok = pkg.H.apply(Hx) == Hx
        ok = ok and pkg.box.apply(pkg.G.apply(x)) == [a - b for a, b in zip(x, Hx)]
        ok = ok and not any(pkg.G.apply(Hx))
        return ok, "%s q=%d" % (bundle.to_string(), q)
    return _run("H^2 = H, box G = 1 - H, G H = 0", model, cases, body)


IDENTITIES = ("delbar_phi_squared", "delbar_lie", "lie_bracket", "pairing_square",
              "rho_multiplicative", "rho_inverse", "hodge")


def run_identity_suite(model, seed=0, cases=DEFAULT_CASES, only=None):
    """Run every identity check; each gets its own RNG derived from ``seed``."""
    series = beltrami_series(model)
    out = []
    for k, name in enumerate(IDENTITIES):
        if only is not None and name not in only:
            continue
        g = _Gen(model, random.Random(seed * 1000 + k))
        if name == "delbar_phi_squared":
            out.append(check_delbar_phi_squared(model, g, cases, series))
        elif name == "delbar_lie":
            out.append(check_delbar_lie(model, g, cases))
        elif name == "lie_bracket":
            out.append(check_lie_bracket(model, g, cases))
        elif name == "pairing_square":
            out.append(check_pairing_square(model, g, cases))
        elif name == "rho_multiplicative":
            if model.conjugation_closed:
                out.append(check_rho_multiplicative(model, g, cases))
        elif name == "rho_inverse":
            if model.conjugation_closed:
                out.append(check_rho_inverse(model, g, cases, series))
        else:
            out.append(check_hodge(model, g, cases))
    return out
