"""Deformed Dolbeault cohomology at a numeric parameter point.

Two independent routes are offered: the delbar_phi = delbar - <phi|
complex on the original frame, and the classical delbar_t of the
re-bigraded frame f' = (1 + i_phi) f, fb' = (1 + i_phibar) fb, where
delbar_t is read off from d written in the new frame.
"""

from .algebra import (BundleSpec, Form, TensorForm, VectorForm, _acc, evaluate,
                      rho_matrix)
from .calculus import _split_scalar, delbar, pairing
from .hodge import hodge_package, operator_matrix
from .linalg import Matrix, inverse, nullity, nullspace, rank
from .model import ModelSpec, derive_brackets, sort_word
from .scalars import ZERO, Poly, as_gauss

__all__ = ["NonIntegrablePoint", "DeformedComplex", "delbar_phi_matrix",
           "deformed_cohomology_dim", "rebigrade_crosscheck", "CrosscheckResult",
           "deformed_harmonics", "complete_point", "phi_at", "check_integrable",
           "RebigradedFrame"]


class NonIntegrablePoint(ValueError):
    """The Maurer-Cartan residual does not vanish at the requested point."""


def complete_point(params, partial):
    """Fill unspecified parameters with 0 and coerce values exactly."""
    unknown = set(partial) - set(params)
    if unknown:
        raise KeyError("unknown parameters: %s" % ", ".join(sorted(unknown)))
    return {p: as_gauss(partial.get(p, 0)) for p in params}


def phi_at(series, point):
    """The numeric Beltrami form phi(t) at a point."""
    return evaluate(series.total(), complete_point(series.params, point))


def check_integrable(series, point):
    """Raise NonIntegrablePoint unless the MC residual vanishes at ``point``.

    For a terminated series the residual is a finite exact polynomial, so
    pointwise vanishing is decisive; a truncated series cannot be
    certified at a nonzero point.
    """
    pt = complete_point(series.params, point)
    if not series.terminated and any(pt.values()):
        raise NonIntegrablePoint("series truncated at order %d; integrability at this "
                                 "point cannot be certified" % series.order)
    for k, r in series.mc_residual.items():
        if evaluate(r, pt):
            raise NonIntegrablePoint("Maurer-Cartan residual nonzero at this point "
                                     "(degree %d component)" % k)
    return pt


def delbar_phi_matrix(model, bundle, q, phi_num):
    """Matrix of delbar - <phi| from A^{0,q}(E) to A^{0,q+1}(E), phi numeric."""
    n = model.n
    if not 0 <= q <= n:
        return Matrix(0, 0)
    ncols = len(bundle.basis(n, q))
    nrows = len(bundle.basis(n, q + 1)) if q + 1 <= n else 0
    if q + 1 > n:
        return Matrix(0, ncols)
    return operator_matrix(model, bundle, q, lambda x: delbar(x) - pairing(phi_num, x))


def _cohomology_from(mats, q, dims):
    """nullity(q) - rank(q-1) given a dict of differentials."""
    a = mats[q]
    ker = dims[q] - rank(a) if a.nrows else dims[q]
    im = rank(mats[q - 1]) if q >= 1 else 0
    return ker - im


class DeformedComplex:
    """The delbar_phi complex of one bundle at one point, with Hodge data."""

    def __init__(self, model, bundle, point, series, require_integrable=True):
        self.model = model
        self.bundle = bundle
        self.series = series
        if require_integrable:
            self.point = check_integrable(series, point)
        else:
            self.point = complete_point(series.params, point)
        self.phi = evaluate(series.total(), self.point)
        n = model.n
        self.dims = {q: len(bundle.basis(n, q)) for q in range(0, n + 1)}
        self.mats = {q: self._mat(q) for q in range(0, n + 1)}
        self._hodge = {}

    def _mat(self, q):
        n = self.model.n
        if q + 1 > n:
            return Matrix(0, self.dims[q])
        return delbar_phi_matrix(self.model, self.bundle, q, self.phi)

    def prev(self, q):
        if q == 0:
            return Matrix(self.dims[0], 0)
        return self.mats[q - 1]

    def cohomology_dim(self, q):
        return _cohomology_from(self.mats, q, self.dims)

    def squares_to_zero(self):
        n = self.model.n
        return all((self.mats[q + 1] @ self.mats[q]).is_zero() for q in range(0, n))

    def hodge(self, q):
        """(box_phi, H_phi, G_phi, kernel basis) at degree q."""
        if q not in self._hodge:
            D = self.mats[q]
            P = self.prev(q)
            box = P @ P.conj_transpose() + D.conj_transpose() @ D
            ker = nullspace(box)
            dim = self.dims[q]
            K = Matrix.from_columns(dim, ker)
            if ker:
                H = K @ inverse(K.conj_transpose() @ K) @ K.conj_transpose()
            else:
                H = Matrix(dim, dim)
            G = inverse(box + H) - H
            self._hodge[q] = (box, H, G, ker)
        return self._hodge[q]


def deformed_cohomology_dim(model, bundle, q, point, series):
    """dim H^{0,q}_{delbar_phi}(E) at an integrable point."""
    return DeformedComplex(model, bundle, point, series).cohomology_dim(q)


# ------------------------------------------------------------- re-bigrading

class RebigradedFrame:
    """d written in the deformed frame at a numeric point.

    ``model`` is a ModelSpec (explicit (0,1) mode) whose generators are the
    deformed forms; it is not holomorphically framed in general.
    """

    def __init__(self, model, series, point):
        self.base = model
        self.point = complete_point(series.params, point)
        phi = series.total()
        M = rho_matrix(phi, self.point)
        try:
            Minv = inverse(M)
        except ZeroDivisionError:
            raise ZeroDivisionError("deformed frame is singular at this point")
        self.M = M
        self.Minv = Minv
        n2 = 2 * model.n
        new_d = []
        for g in range(n2):
            form = {}
            for h in range(n2):
                c = M.rows[h][g]
                if not c:
                    continue
                for (a, b), cab in model.dtable[h].items():
                    # xi^a ^ xi^b with xi^a = sum_c Minv[c][a] xi'^c
                    for c1 in range(n2):
                        x = Minv.rows[c1][a]
                        if not x:
                            continue
                        for c2 in range(n2):
                            y = Minv.rows[c2][b]
                            if not y or c1 == c2:
                                continue
                            key = (c1, c2) if c1 < c2 else (c2, c1)
                            sg = 1 if c1 < c2 else -1
                            _acc(form, key, c * cab * x * y * sg)
            new_d.append(form)
        self.model = ModelSpec(model.name + "@t", model.n, new_d[:model.n],
                               d01=new_d[model.n:], fb_mode="explicit")
        self.brackets = derive_brackets(self.model)

    def integrable(self):
        """No (0,2)'-component in d f'^i."""
        n = self.model.n
        return not any(a >= n and b >= n for f in self.model.d10 for (a, b) in f)


def _bidegree_part(model, terms, p, q):
    n = model.n
    return {w: c for w, c in terms.items()
            if sum(1 for g in w if g < n) == p and len(w) - p == q}


def _delbar_t(frame, x):
    """Classical delbar on E_t-valued forms written in the deformed frame."""
    m = frame.model
    n = m.n
    bt = frame.brackets
    out = {}
    for (al, elems), c in x.terms.items():
        q = len(al)
        for w, c2 in _bidegree_part(m, m.d_word(al), 0, q + 1).items():
            _acc(out, (w, elems), c * c2)
        sgn = -1 if q % 2 else 1
        for i, (f, el) in enumerate(zip(x.bundle.factors, elems)):
            if f == "T":
                img = {}
                for k in range(n, 2 * n):
                    for cvec, v in bt.bracket(k, el).items():
                        if cvec < n:
                            _acc(img, ((k,), cvec), v)
            else:
                d_e = Form(m, _bidegree_part(m, m.d_word(el), f, 1))
                img = _split_scalar(d_e, f, 1)
            for (beta, new_el), c3 in img.items():
                s, w = sort_word(al + beta)
                if not s:
                    continue
                new_elems = elems[:i] + (new_el,) + elems[i + 1:]
                _acc(out, (w, new_elems), c * c3 * (s * sgn))
    return TensorForm(x.model, x.bundle, out)


def _delbar_t_matrix(frame, bundle, q):
    n = frame.model.n
    if q + 1 > n:
        return Matrix(0, len(bundle.basis(n, q)))
    return operator_matrix(frame.model, bundle, q, lambda x: _delbar_t(frame, x))


class CrosscheckResult:
    """Outcome of comparing the two routes to deformed cohomology."""

    def __init__(self, dim_phi, dim_t, pointwise, spanning_set_size, delbar_t_squared_zero):
        self.dim_phi = dim_phi
        self.dim_t = dim_t
        self.pointwise = pointwise
        self.spanning_set_size = spanning_set_size
        self.delbar_t_squared_zero = delbar_t_squared_zero

    @property
    def equal(self):
        return self.dim_phi == self.dim_t

    def as_tuple(self):
        return (self.dim_phi, self.dim_t, self.equal)

    def to_dict(self):
        return {"dim_via_delbar_phi": self.dim_phi, "dim_via_rebigrading": self.dim_t,
                "equal": self.equal, "pointwise_equivalence": self.pointwise,
                "spanning_set_size": self.spanning_set_size,
                "delbar_t_squared_zero": self.delbar_t_squared_zero}


def rebigrade_crosscheck(model, bundle, q, point, series):
    """Compare dim H^{0,q}_{delbar_phi}(E) with dim H^{0,q}_{delbar_t}(E_t).

    The rho-transported form rho(sigma) has the same coefficients in the
    deformed frame as sigma has in the original one, so the pointwise
    closedness check compares the two kernels vector by vector on the
    union of the monomial basis and both kernel bases.
    """
    cx = DeformedComplex(model, bundle, point, series)
    frame = RebigradedFrame(model, series, cx.point)
    n = model.n
    mats_t = {k: _delbar_t_matrix(frame, bundle, k) for k in range(0, n + 1)}
    dims = cx.dims
    dim_phi = cx.cohomology_dim(q)
    dim_t = _cohomology_from(mats_t, q, dims)
    squared = all((mats_t[k + 1] @ mats_t[k]).is_zero() for k in range(0, n))
    A, B = cx.mats[q], mats_t[q]
    span = [[as_gauss(1) if i == j else ZERO for i in range(dims[q])] for j in range(dims[q])]
    span += nullspace(A) + nullspace(B)
    ok = True
    for v in span:
        za = not any(A.apply(v))
        zb = not any(B.apply(v))
        if za != zb:
            ok = False
            break
    return CrosscheckResult(dim_phi, dim_t, ok, len(span), squared)


def deformed_harmonics(model, bundle, q, point, series):
    """Basis of ker box_phi and, per element, whether it is classically harmonic."""
    cx = DeformedComplex(model, bundle, point, series)
    _, _, _, ker = cx.hodge(q)
    pkg = hodge_package(model, bundle, q)
    basis = [TensorForm.from_vector(model, bundle, pkg.basis, v) for v in ker]
    flags = [pkg.H.apply(v) == list(v) for v in ker]
    return basis, flags
