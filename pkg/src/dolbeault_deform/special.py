"""Kaehler and Calabi-Yau specialisations of the canonical recursion, the
T_u isomorphism and the Tian-Todorov identity."""

from .algebra import (BundleSpec, Form, TensorForm, VectorForm, contract,
                      scalar_to_tensor, tensor_to_scalar, tensor_to_vector,
                      vector_to_tensor)
from .calculus import del_, delbar, fn_bracket_general
from .extension import DeformationReport, canonical_deformation
from .hodge import hodge_package
from .kuranishi import DEFAULT_ORDER, TANGENT
from .linalg import Matrix, inverse, rank
from .model import merge_words
from .scalars import ZERO, Poly, as_gauss

__all__ = ["HypothesisError", "CanonicalTrivialization", "tu_map",
           "tian_todorov_residual", "kahler_deformation", "cy_deformation",
           "kahler_hypotheses", "scalar_hodge"]


class HypothesisError(ValueError):
    """The identities a specialised recursion relies on fail on this model."""


def tu_map(u, K):
    """T_u(K) = K interior u."""
    if K.vector_type not in (None, "10"):
        raise ValueError("T_u takes T^{1,0}-valued forms")
    return contract(K, u)


class CanonicalTrivialization:
    """u = f1 ^ ... ^ fn with the matrices of T_u per degree."""

    def __init__(self, model):
        self.model = model
        n = model.n
        self.u = Form(model, {tuple(range(n)): 1})
        self._mats = {}

    def matrix(self, q):
        """T_u: A^{0,q}(T) -> A^{n-1,q} in the tensor bases of T and O^{n-1}."""
        if q not in self._mats:
            n = self.model.n
            src = TANGENT.basis(n, q)
            omega = _omega(n - 1)
            dst = omega.basis(n, q)
            index = {k: i for i, k in enumerate(dst)}
            M = Matrix(len(dst), len(src))
            for j, key in enumerate(src):
                K = tensor_to_vector(TensorForm(self.model, TANGENT, {key: 1}))
                img = scalar_to_tensor(tu_map(self.u, K), omega)
                for k2, c in img.terms.items():
                    M.rows[index[k2]][j] = as_gauss(c)
            self._mats[q] = M
        return self._mats[q]

    def apply(self, K):
        return tu_map(self.u, K)

    def inverse(self, form, q):
        """T_u^{-1} of a scalar (n-1,q)-form, as a VectorForm."""
        n = self.model.n
        omega = _omega(n - 1)
        x = scalar_to_tensor(form, omega)
        Minv = inverse(self.matrix(q))
        vec = Minv.apply(x.vector(omega.basis(n, q)))
        return tensor_to_vector(TensorForm.from_vector(self.model, TANGENT,
                                                       TANGENT.basis(n, q), vec))


def _omega(p):
    return BundleSpec((p,)) if p >= 1 else BundleSpec(())


def tian_todorov_residual(phi, psi, u):
    """T_u[phi,psi] - (-del i_psi i_phi u + i_phi del i_psi u + i_psi del i_phi u).

    The identity is the one for phi, psi in A^{0,1}(T); higher degrees need
    extra Koszul signs and are not covered.
    """
    lhs = contract(fn_bracket_general(phi, psi), u)
    rhs = -del_(contract(psi, contract(phi, u))) \
        + contract(phi, del_(contract(psi, u))) \
        + contract(psi, del_(contract(phi, u)))
    return lhs - rhs


# ------------------------------------------------------------- scalar Hodge data

class ScalarHodge:
    """Hodge matrices of A^{p,q} in the basis of sorted words.

    Built from the tensor-side package of O^p by the diagonal sign change
    alpha (x) e <-> alpha ^ e, which is unitary, so adjoints and Green
    operators carry over unchanged up to conjugation by the signs.
    """

    def __init__(self, model, p, q):
        n = model.n
        self.model = model
        self.p, self.q = p, q
        bundle = _omega(p)
        self.pkg = hodge_package(model, bundle, q)
        self.basis = []
        self.signs = []
        for (al, el) in self.pkg.basis:
            e = el[0] if el else ()
            s, w = merge_words(al, e)
            self.basis.append(w)
            self.signs.append(s)
        self.G = self._conj(self.pkg.G)
        self.H = self._conj(self.pkg.H)
        self.box = self._conj(self.pkg.box)

    def _conj(self, M):
        out = Matrix(M.nrows, M.ncols)
        for i in range(M.nrows):
            for j in range(M.ncols):
                out.rows[i][j] = M.rows[i][j] * (self.signs[i] * self.signs[j])
        return out

    def vector(self, form):
        index = {w: i for i, w in enumerate(self.basis)}
        vec = [ZERO] * len(self.basis)
        for w, c in form.terms.items():
            vec[index[w]] = c
        return vec

    def form(self, vec):
        return Form(self.model, {w: c for w, c in zip(self.basis, vec) if c})


_scalar_cache = {}


def scalar_hodge(model, p, q):
    key = (model, p, q)
    if key not in _scalar_cache:
        _scalar_cache[key] = ScalarHodge(model, p, q)
    return _scalar_cache[key]


def _op_matrix(model, src, dst, op):
    index = {w: i for i, w in enumerate(dst)}
    M = Matrix(len(dst), len(src))
    for j, w in enumerate(src):
        for w2, c in op(Form(model, {w: 1})).terms.items():
            M.rows[index[w2]][j] = as_gauss(c)
    return M


def _pieces_ok(model, p_range, q_range):
    """Check [del, delbar*] = 0, [del, G] = 0 and box_del = box_delbar."""
    n = model.n
    bad = []
    for p in p_range:
        for q in q_range:
            if not (0 <= p <= n and 0 <= q <= n):
                continue
            A = scalar_hodge(model, p, q)
            B = scalar_hodge(model, p + 1, q) if p < n else None
            D = _op_matrix(model, A.basis, B.basis if B else [], del_)
            if p >= 1:
                Dp = _op_matrix(model, scalar_hodge(model, p - 1, q).basis, A.basis, del_)
                box_del = Dp @ Dp.conj_transpose() + D.conj_transpose() @ D
            else:
                box_del = D.conj_transpose() @ D
            if box_del != A.box:
                bad.append("Laplacians of del and delbar differ on A^{%d,%d}" % (p, q))
            if D.is_zero():
                continue
            if D @ A.G != B.G @ D:
                bad.append("[del, G] != 0 on A^{%d,%d}" % (p, q))
            if q >= 1:
                A0 = scalar_hodge(model, p, q - 1)
                B0 = scalar_hodge(model, p + 1, q - 1)
                dbA = _op_matrix(model, A0.basis, A.basis, delbar)
                dbB = _op_matrix(model, B0.basis, B.basis, delbar)
                D0 = _op_matrix(model, A0.basis, B0.basis, del_)
                # del delbar* + delbar* del on A^{p,q} -> A^{p+1,q-1}
                lhs = D0 @ dbA.conj_transpose() + dbB.conj_transpose() @ D
                if not lhs.is_zero():
                    bad.append("[del, delbar*] != 0 on A^{%d,%d}" % (p, q))
    return bad


def kahler_hypotheses(model, p, q):
    """Diagnostics for the identities the Kaehler recursion consumes."""
    return _pieces_ok(model, range(p - 1, p + 1), range(q, q + 2))


def _poly_vec_in_image(M, vec):
    """Is every monomial slice of a polynomial vector in the column space of M?"""
    slices = {}
    for i, c in enumerate(vec):
        if isinstance(c, Poly):
            for e, v in c.terms.items():
                slices.setdefault(e, [0] * len(vec))[i] = v
        elif c:
            slices.setdefault(None, [0] * len(vec))[i] = c
    r = rank(M)
    for s in slices.values():
        if rank(M.hstack(Matrix.from_columns(M.nrows, [s]))) != r:
            return False
    return True


def _as_scalar(sigma0):
    if isinstance(sigma0, Form):
        return sigma0
    return tensor_to_scalar(sigma0)


def kahler_deformation(sigma0, series, order=DEFAULT_ORDER):
    """sigma_k = -sum_{i+j=k} del delbar* G i_{phi_j} sigma_i for a (p,q)-class."""
    s0 = _as_scalar(sigma0)
    model = s0.model
    bd = s0.bidegrees()
    if len(bd) > 1:
        raise ValueError("class must be of pure bidegree")
    p, q = bd[0] if bd else (0, 0)
    bad = kahler_hypotheses(model, p, q)
    if bad:
        raise HypothesisError("Kaehler identities fail: " + "; ".join(bad))
    bundle = _omega(p)
    generic = canonical_deformation(scalar_to_tensor(s0, bundle), series, order)
    s0 = tensor_to_scalar(generic.sigma0)
    phis = dict(series.pieces)
    pieces = {0: s0}
    src = scalar_hodge(model, p - 1, q + 1) if p >= 1 else None
    mid = scalar_hodge(model, p - 1, q) if p >= 1 else None
    tgt = scalar_hodge(model, p, q)
    diags = []
    if src is not None:
        dbar_mat = _op_matrix(model, mid.basis, src.basis, delbar)
        del_mat = _op_matrix(model, mid.basis, tgt.basis, del_)
        star_tgt = _op_matrix(model, tgt.basis, scalar_hodge(model, p, q + 1).basis,
                              delbar).conj_transpose() if q + 1 <= model.n else None
        for k in range(1, order + 1):
            acc = Form(model)
            for j in range(1, k + 1):
                if j in phis and (k - j) in pieces:
                    acc = acc + contract(phis[j], pieces[k - j])
            if not acc:
                continue
            v = src.G.apply(src.vector(acc))
            v = dbar_mat.conj_transpose().apply(v)
            v = del_mat.apply(v)
            s = tgt.form(v).scale(-1)
            if s:
                pieces[k] = s
                if not _poly_vec_in_image(del_mat, tgt.vector(s)):
                    diags.append("sigma_%d not del-exact" % k)
                if star_tgt is not None and not _poly_vec_in_image(star_tgt, tgt.vector(s)):
                    diags.append("sigma_%d not delbar*-exact" % k)
    same = all(tensor_to_scalar(generic.pieces.get(k, generic.sigma0._new({}))) ==
               pieces.get(k, Form(model)) for k in set(pieces) | set(generic.pieces))
    if not same:
        diags.append("Kaehler recursion differs from the generic canonical recursion")
    out = {k: scalar_to_tensor(v, bundle) for k, v in pieces.items()}
    rep = DeformationReport(generic.sigma0, out, series.params, order, generic.terminated,
                            generic.obstruction_polys, generic.alphas, series.mc_certified,
                            generic.diagnostics + diags, method="kahler", q=q)
    rep.agrees_with_generic = same
    return rep


def cy_deformation(sigma0, series, u=None, order=DEFAULT_ORDER):
    """sigma_k = -T_u^{-1} del delbar* G sum_j i_{sigma_{k-j}} i_{phi_j} u."""
    if isinstance(sigma0, VectorForm):
        sigma0 = vector_to_tensor(sigma0)
    model = sigma0.model
    n = model.n
    q = sigma0.q if sigma0.q is not None else 0
    triv = CanonicalTrivialization(model)
    if u is None:
        u = triv.u
    elif u != triv.u:
        raise ValueError("only u = f1 ^ ... ^ fn is supported")
    if q == n:
        generic = canonical_deformation(sigma0, series, order)
        rep = DeformationReport(generic.sigma0, {0: generic.sigma0}, series.params, order,
                                True, generic.obstruction_polys, generic.alphas,
                                series.mc_certified, generic.diagnostics, method="cy", q=q)
        rep.agrees_with_generic = generic.is_constant()
        return rep
    bad = _pieces_ok(model, range(n - 2, n), range(0, n + 1))
    bad += _tu_compatibility(model, triv)
    if bad:
        raise HypothesisError("Calabi-Yau identities fail: " + "; ".join(bad))
    generic = canonical_deformation(sigma0, series, order)
    sigma0 = generic.sigma0
    phis = dict(series.pieces)
    pieces = {0: tensor_to_vector(sigma0)}
    src = scalar_hodge(model, n - 2, q + 1)
    mid = scalar_hodge(model, n - 2, q)
    tgt = scalar_hodge(model, n - 1, q)
    dbar_mat = _op_matrix(model, mid.basis, src.basis, delbar)
    del_mat = _op_matrix(model, mid.basis, tgt.basis, del_)
    diags = []
    for k in range(1, order + 1):
        acc = Form(model)
        for j in range(1, k + 1):
            if j in phis and (k - j) in pieces:
                acc = acc + contract(pieces[k - j], contract(phis[j], u))
        if not acc:
            continue
        v = del_mat.apply(dbar_mat.conj_transpose().apply(src.G.apply(src.vector(acc))))
        w = tgt.form(v).scale(-1)
        if w:
            pieces[k] = triv.inverse(w, q)
            if not _poly_vec_in_image(del_mat, tgt.vector(w)):
                diags.append("T_u sigma_%d not del-exact" % k)
    out = {k: vector_to_tensor(v) for k, v in pieces.items()}
    same = all(generic.pieces.get(k, generic.sigma0._new({})) ==
               out.get(k, generic.sigma0._new({})) for k in set(out) | set(generic.pieces))
    if not same:
        diags.append("CY recursion differs from the generic canonical recursion")
    rep = DeformationReport(sigma0, out, series.params, order, generic.terminated,
                            generic.obstruction_polys, generic.alphas, series.mc_certified,
                            generic.diagnostics + diags, method="cy", q=q)
    rep.agrees_with_generic = same
    return rep


def _tu_compatibility(model, triv):
    """T_u Im delbar* = Im delbar* and T_u box = box T_u on every degree."""
    n = model.n
    bad = []
    omega = _omega(n - 1)
    for q in range(0, n + 1):
        Tq = triv.matrix(q)
        box_T = hodge_package(model, TANGENT, q).box
        box_O = hodge_package(model, omega, q).box
        if Tq @ box_T != box_O @ Tq:
            bad.append("T_u does not commute with the Laplacian in degree %d" % q)
        if q + 1 <= n:
            sT = hodge_package(model, TANGENT, q).dbar_star
            sO = hodge_package(model, omega, q).dbar_star
            img = Tq @ sT
            if rank(img) != rank(sO) or rank(sO.hstack(img)) != rank(sO):
                bad.append("T_u does not preserve Im delbar* in degree %d" % q)
    return bad
