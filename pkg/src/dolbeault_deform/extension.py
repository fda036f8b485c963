"""Canonical deformations of Dolbeault classes, obstruction loci B(V),
the V_t / ker f_t jumping analysis and pullback along base changes."""

from .algebra import TensorForm, evaluate
from .calculus import pairing
from .deformed import (NonIntegrablePoint, complete_point, delbar_phi_matrix,
                       check_integrable)
from .hodge import (cohomology_dim, delbar_star, green, harmonic_projection,
                    hodge_package, inner_product)
from .kuranishi import DEFAULT_ORDER, BeltramiSeries
from .linalg import Matrix, column_space, nullity, nullspace, rank
from .scalars import Poly, ZERO, ONE

__all__ = ["DeformationReport", "canonical_deformation",
           "holomorphic_section_deformation", "VtAnalysis", "VtRow", "vt_analysis",
           "pullback_series", "poly_gcd_univariate", "obstruction_matrix"]


def _as_poly(c, params):
    return c if isinstance(c, Poly) else Poly.constant(params, c)


class DeformationReport:
    """Canonical deformation sigma(t) of a harmonic class and its obstructions."""

    def __init__(self, sigma0, pieces, params, order, terminated, obstruction_polys,
                 alphas, mc_certified, diagnostics=(), method="generic", q=None):
        self.sigma0 = sigma0
        self.pieces = {k: p for k, p in sorted(pieces.items())}
        self.params = tuple(params)
        self.order = order
        self.terminated = terminated
        self.obstruction_polys = list(obstruction_polys)
        self.alphas = alphas
        self.mc_certified = mc_certified
        self.diagnostics = list(diagnostics)
        self.method = method
        self.q = sigma0.q if q is None else q

    @property
    def bv_generators(self):
        """Defining equations of B(C sigma0): the nonzero obstruction polynomials."""
        return [p for p in self.obstruction_polys if p]

    @property
    def unobstructed(self):
        return not self.bv_generators

    @property
    def asserted_mc(self):
        return not self.mc_certified

    def total(self):
        out = self.sigma0._new({})
        for p in self.pieces.values():
            out = out + p
        return out

    def is_constant(self):
        return all(not p for k, p in self.pieces.items() if k >= 1)

    def gauge_flags(self):
        """(delbar* sigma(t) = 0, H sigma(t) = sigma0) checked degreewise."""
        star = all(not delbar_star(p, self.q) for k, p in self.pieces.items() if k >= 1) \
            and not delbar_star(self.sigma0, self.q)
        harm = all(not harmonic_projection(p, self.q) for k, p in self.pieces.items() if k >= 1)
        return star, harm

    def caveats(self):
        out = []
        if not self.mc_certified:
            out.append("asserted-MC")
        if not self.terminated:
            out.append("truncated-formal")
        return out

    def to_dict(self):
        star, harm = self.gauge_flags()
        return {
            "class": self.sigma0.to_string(),
            "bundle": self.sigma0.bundle.to_string(),
            "q": self.q,
            "method": self.method,
            "params": list(self.params),
            "order": self.order,
            "terminated": self.terminated,
            "series": {str(k): p.to_string() for k, p in self.pieces.items()},
            "obstruction_polys": [p.to_string() for p in self.obstruction_polys],
            "bv_generators": [p.to_string() for p in self.bv_generators],
            "unobstructed": self.unobstructed,
            "gauge": {"delbar_star_zero": star, "harmonic_part_is_sigma0": harm},
            "mc_certified": self.mc_certified,
            "caveats": self.caveats(),
            "diagnostics": self.diagnostics,
        }


def _phi_pieces(series):
    return dict(series.pieces)


def canonical_deformation(sigma0, series, order=DEFAULT_ORDER):
    """sigma_k = delbar* G sum_{i+j=k, i>=1} <phi_i|sigma_j>."""
    diags = []
    q = sigma0.q if sigma0.q is not None else 0
    h = harmonic_projection(sigma0, q)
    if h != sigma0:
        diags.append("input class was not harmonic; replaced by its harmonic projection")
        sigma0 = h
    params = series.params
    phis = _phi_pieces(series)
    p_top = max(phis, default=0)
    n = sigma0.model.n
    pieces = {0: sigma0}
    top = 0
    terminated = False
    k = 1
    if not phis or not sigma0 or q >= n:
        terminated = series.terminated or not phis
        k = order + 1
    while k <= order:
        acc = None
        for i in range(1, k + 1):
            if i in phis and (k - i) in pieces:
                t = pairing(phis[i], pieces[k - i])
                acc = t if acc is None else acc + t
        if acc is not None and acc:
            s = delbar_star(green(acc, q + 1), q + 1)
            if s:
                pieces[k] = s
                top = k
        if series.terminated and k >= top + p_top:
            terminated = True
            break
        k += 1
    cap = (top + p_top) if terminated else order
    total_pair = None
    for i in phis:
        for j, s in pieces.items():
            if i + j <= cap:
                t = pairing(phis[i], s)
                total_pair = t if total_pair is None else total_pair + t
    alphas = hodge_package(sigma0.model, sigma0.bundle, q + 1).harmonic_basis() \
        if q + 1 <= n else []
    obs = []
    for a in alphas:
        v = inner_product(total_pair, a) if total_pair is not None else ZERO
        obs.append(_as_poly(v, params))
    return DeformationReport(sigma0, pieces, params, order, terminated and series.terminated,
                             obs, alphas, series.mc_certified, diags, q=q)


def holomorphic_section_deformation(sigma0, series, order=DEFAULT_ORDER):
    """Canonical deformation of a holomorphic section (q = 0)."""
    q = sigma0.q if sigma0.q is not None else 0
    if q != 0:
        raise ValueError("holomorphic_section_deformation needs q = 0")
    rep = canonical_deformation(sigma0, series, order)
    if cohomology_dim(sigma0.model, sigma0.bundle, 1) == 0:
        rep.diagnostics.append("H^1(E) = 0: unobstructed by vanishing of obstruction space")
        rep.precertified = True
    else:
        rep.precertified = False
    return rep


# ------------------------------------------------------------- V_t analysis

class VtRow:
    def __init__(self, point, dim_vt, dim_ker_ft, h, rank_T, closed_dim, ker_generators,
                 certified, notes):
        self.point = point
        self.dim_vt = dim_vt
        self.dim_ker_ft = dim_ker_ft
        self.h = h
        self.rank_T = rank_T
        self.closed_dim = closed_dim
        self.ker_generators = ker_generators
        self.certified = certified
        self.notes = notes

    def to_dict(self):
        return {
            "point": {k: v.to_string() for k, v in sorted(self.point.items())},
            "rank_T": self.rank_T,
            "dim_V_t": self.dim_vt,
            "dim_ker_f_t": self.dim_ker_ft,
            "h": self.h,
            "ker_f_t_generators": [g.to_string() for g in self.ker_generators],
            "certified": self.certified,
            "notes": self.notes,
        }


class VtAnalysis:
    def __init__(self, bundle, q, basis, reports, T, rows, full):
        self.bundle = bundle
        self.q = q
        self.basis = basis
        self.reports = reports
        self.T = T
        self.rows = rows
        self.full = full

    def to_dict(self):
        return {
            "bundle": self.bundle.to_string(),
            "q": self.q,
            "basis": [b.to_string() for b in self.basis],
            "full_harmonic_space": self.full,
            "T": [[c.to_string() for c in row] for row in self.T],
            "rows": [r.to_dict() for r in self.rows],
        }


def obstruction_matrix(reports):
    """T(t): row per harmonic (0,q+1) basis element, column per class."""
    if not reports:
        return []
    nrows = len(reports[0].obstruction_polys)
    return [[rep.obstruction_polys[r] for rep in reports] for r in range(nrows)]


def _eval_matrix(T, ncols, point):
    M = Matrix(len(T), ncols)
    for i, row in enumerate(T):
        for j, p in enumerate(row):
            M.rows[i][j] = p.eval(point)
    return M


def vt_analysis(basis, series, points, order=DEFAULT_ORDER):
    """Jumping analysis of V = span(basis) at each numeric point.

    dim V_t is the nullity of T(t).  The closedness system
    delbar_phi(t) sigma^l(t) is solved as well; its kernel is the subspace
    actually used for ker f_t, and any disagreement with T(t) is noted.
    """
    if not basis:
        raise ValueError("empty basis")
    model = basis[0].model
    bundle = basis[0].bundle
    q = basis[0].q
    reports = [canonical_deformation(b, series, order) for b in basis]
    T = obstruction_matrix(reports)
    N = len(basis)
    full = N == cohomology_dim(model, bundle, q)
    pkg = hodge_package(model, bundle, q)
    phi_total = series.total()
    rows = []
    for raw in points:
        notes = []
        pt = complete_point(series.params, raw)
        certified = True
        try:
            check_integrable(series, pt)
        except NonIntegrablePoint as exc:
            certified = False
            notes.append(str(exc))
        if not all(r.terminated for r in reports):
            certified = False
            notes.append("class series truncated at order %d" % order)
        rank_T = rank(_eval_matrix(T, N, pt)) if T else 0
        phi = evaluate(phi_total, pt)
        S_cols = [evaluate(r.total(), pt).vector(pkg.basis) for r in reports]
        S = Matrix.from_columns(pkg.dim, S_cols)
        C = delbar_phi_matrix(model, bundle, q, phi) @ S
        V = nullspace(C)
        closed_dim = len(V)
        if closed_dim != N - rank_T:
            notes.append("nullity of T(t) (%d) differs from the closedness system (%d)"
                         % (N - rank_T, closed_dim))
        if q >= 1:
            B = delbar_phi_matrix(model, bundle, q - 1, phi)
        else:
            B = Matrix(pkg.dim, 0)
        SV = S @ Matrix.from_columns(N, V) if V else Matrix(pkg.dim, 0)
        big = SV.hstack(-B)
        ker = nullspace(big)
        dim_ker = len(ker) - nullity(B)
        # generators of ker f_t: S V c for the c-parts of the kernel
        gens_cols = []
        for v in ker:
            c = v[:len(V)]
            if any(c):
                gens_cols.append(SV.apply(c))
        if gens_cols:
            G = Matrix.from_columns(pkg.dim, gens_cols)
            gens = [TensorForm.from_vector(model, bundle, pkg.basis, col)
                    for col in column_space(G)]
        else:
            gens = []
        h = closed_dim - dim_ker if full else None
        rows.append(VtRow(pt, N - rank_T, dim_ker, h, rank_T, closed_dim, gens,
                          certified, notes))
    return VtAnalysis(bundle, q, basis, reports, T, rows, full)


# ------------------------------------------------------------- pullback

def _sub_poly(p, mapping, new_params):
    if isinstance(p, Poly):
        return p.substitute(mapping, new_params)
    return Poly.constant(new_params, p)


def _regroup(pieces, mapping, new_params):
    out = {}
    for p in pieces.values():
        sub = p.map_coeffs(lambda c: _sub_poly(c, mapping, new_params))
        top = max(sub.t_degree(), 0)
        for k in range(0, top + 1):
            part = sub.homogeneous_part(k)
            if part:
                out[k] = out[k] + part if k in out else part
    return out


def pullback_series(obj, mapping, new_params):
    """Substitute t_i -> h_i(s) coefficientwise (conjugates get conj(h_i))."""
    new_params = tuple(new_params)
    for name, img in mapping.items():
        if isinstance(img, Poly) and img.constant_term():
            raise ValueError("base change must satisfy h(0) = 0 (parameter %s)" % name)
    if isinstance(obj, DeformationReport):
        pieces = _regroup(obj.pieces, mapping, new_params)
        pieces.setdefault(0, obj.sigma0)
        obs = [_sub_poly(p, mapping, new_params) for p in obj.obstruction_polys]
        return DeformationReport(obj.sigma0, pieces, new_params, obj.order, obj.terminated,
                                 obs, obj.alphas, obj.mc_certified, obj.diagnostics,
                                 obj.method, obj.q)
    if isinstance(obj, BeltramiSeries):
        pieces = _regroup(obj.pieces, mapping, new_params)
        return BeltramiSeries(obj.model, new_params, pieces, obj.order, obj.terminated,
                              "pullback")
    raise TypeError("pullback_series takes a DeformationReport or BeltramiSeries")


def _univariate_coeffs(p):
    if len(p.params) != 1:
        raise ValueError("univariate polynomial expected")
    if not p.is_holomorphic():
        raise ValueError("holomorphic polynomial expected")
    deg = p.degree()
    coeffs = [ZERO] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[0]] = c
    return coeffs


def poly_gcd_univariate(polys):
    """Monic gcd of holomorphic polynomials in one parameter."""
    params = None
    g = None
    for p in polys:
        if not p:
            continue
        params = p.params
        c = _univariate_coeffs(p)
        g = c if g is None else _gcd(g, c)
    if g is None:
        return None
    lead = g[-1].inverse()
    return Poly(params, {(k, 0): c * lead for k, c in enumerate(g) if c})


def _trim(c):
    while c and not c[-1]:
        c = c[:-1]
    return c


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        r = list(a)
        while len(r) >= len(b) and _trim(r):
            r = _trim(r)
            if len(r) < len(b):
                break
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] = r[i + shift] - f * c
            r = _trim(r)
        a, b = b, _trim(r)
    return a
