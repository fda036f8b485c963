"""Differential operators, Lie derivatives, the Frolicher-Nijenhuis bracket
and the pairing <phi| on bundle-valued forms.

Coefficients never depend on the point of the manifold, so d only sees
the generators; t-dependence rides along in the coefficients.
"""

import os
from functools import lru_cache

from .algebra import (Form, TensorForm, VectorForm, _acc, contract, contract_vec,
                      wedge)
from .model import derive_brackets, merge_words

__all__ = ["d_op", "delbar", "del_", "lie", "lie10", "lie01", "fn_bracket",
           "fn_bracket_general", "pairing", "delbar_phi", "delbar_phi_series",
           "graded_commutator", "certify_bracket", "BracketCertificationError"]

DEBUG = os.environ.get("DOLBEAULT_DEFORM_DEBUG", "") not in ("", "0")


class BracketCertificationError(AssertionError):
    pass


@lru_cache(maxsize=None)
def _brackets(model):
    return derive_brackets(model)


@lru_cache(maxsize=None)
def _d_word(model, word, part):
    """d of a word restricted to 'all', 'del' or 'delbar' components."""
    full = model.d_word(word)
    if part == "all":
        return tuple(full.items())
    n = model.n
    p = sum(1 for g in word if g < n)
    want_p = p + 1 if part == "del" else p
    return tuple((w, c) for w, c in full.items() if sum(1 for g in w if g < n) == want_p)


def _apply_d(x, part):
    m = x.model
    out = {}
    for w, c in x.terms.items():
        for w2, c2 in _d_word(m, w, part):
            _acc(out, w2, c * c2)
    return x._new(out)


def d_op(x):
    """Exterior derivative of a scalar form."""
    if not isinstance(x, Form):
        raise TypeError("d_op acts on scalar forms")
    return _apply_d(x, "all")


def del_(x):
    """The (1,0)-part of d on scalar forms."""
    if not isinstance(x, Form):
        raise TypeError("del acts on scalar forms")
    return _apply_d(x, "del")


def delbar(x):
    """The (0,1)-part of d.

    On bundle-valued and T^{1,0}-valued forms it acts on the form part
    only, which is legitimate because the frames are holomorphic.
    """
    if isinstance(x, Form):
        return _apply_d(x, "delbar")
    m = x.model
    out = {}
    if isinstance(x, TensorForm):
        for (w, e), c in x.terms.items():
            for w2, c2 in _d_word(m, w, "delbar"):
                _acc(out, (w2, e), c * c2)
        return x._new(out)
    if isinstance(x, VectorForm):
        if x.vector_type not in (None, "10"):
            raise ValueError("delbar on vector forms needs T^{1,0} values")
        for (w, a), c in x.terms.items():
            for w2, c2 in _d_word(m, w, "delbar"):
                _acc(out, (w2, a), c * c2)
        return x._new(out)
    raise TypeError("delbar: unsupported argument %r" % (x,))


def _lie_generic(K, x, dfun):
    if not K:
        return Form(x.model)
    k = K.form_degree()
    a = contract(K, dfun(x))
    b = dfun(contract(K, x))
    return a + b if k % 2 == 0 else a - b


def lie(K, x):
    """L_K = i_K d - (-1)^(k-1) d i_K for a vector k-form K."""
    return _lie_generic(K, x, d_op)


def lie10(K, x):
    """L^{1,0}_K = i_K del - (-1)^(k-1) del i_K, K of type T^{1,0}."""
    if K.vector_type not in (None, "10"):
        raise ValueError("lie10 needs a T^{1,0}-valued K")
    return _lie_generic(K, x, del_)


def lie01(K, x):
    """L^{0,1}_K = i_K delbar - (-1)^(k-1) delbar i_K, K of type T^{0,1}."""
    if K.vector_type not in (None, "01"):
        raise ValueError("lie01 needs a T^{0,1}-valued K")
    return _lie_generic(K, x, delbar)


def _vector_field_lie(model, a, beta):
    """L_X beta = i_X d beta + d i_X beta for the frame vector X = e_a."""
    X = VectorForm(model, {((), a): 1})
    return contract(X, d_op(beta)) + d_op(contract(X, beta))


def fn_bracket_general(K, L):
    """Frolicher-Nijenhuis bracket of invariant vector-valued forms.

    Decomposable formula, for alpha of degree k:
    [a(x)X, b(x)Y] = a^b (x) [X,Y] + a ^ L_X b (x) Y - L_Y a ^ b (x) X
                     + (-1)^k (da ^ i_X b (x) Y + i_Y a ^ db (x) X)
    """
    m = K.model
    bt = _brackets(m)
    out = {}

    def add(form, vec, coeff):
        for w, c in form.terms.items():
            _acc(out, (w, vec), coeff * c)

    for (al, X), c1 in K.terms.items():
        a = Form(m, {al: 1})
        k = len(al)
        da = d_op(a)
        for (be, Y), c2 in L.terms.items():
            b = Form(m, {be: 1})
            c = c1 * c2
            ab = wedge(a, b)
            for Z, v in bt.bracket(X, Y).items():
                add(ab, Z, c * v)
            add(wedge(a, _vector_field_lie(m, X, b)), Y, c)
            add(wedge(_vector_field_lie(m, Y, a), b), X, -c)
            sgn = -1 if k % 2 else 1
            eX = VectorForm(m, {((), X): 1})
            eY = VectorForm(m, {((), Y): 1})
            add(wedge(da, contract(eX, b)), Y, c * sgn)
            add(wedge(contract(eY, a), d_op(b)), X, c * sgn)
    return VectorForm(m, out)


def _check_in_scope(K):
    n = K.model.n
    for (w, a) in K.terms:
        if a >= n or any(g < n for g in w):
            raise ValueError("unsupported bidegree combination: fn_bracket takes "
                             "T^{1,0}-valued (0,q)-forms only")


def graded_commutator(D1, k1, D2, k2):
    """[D1, D2] = D1 D2 - (-1)^(k1 k2) D2 D1 as a callable."""
    sgn = -1 if (k1 * k2) % 2 else 1

    def op(x):
        return D1(D2(x)) - D2(D1(x)).scale(sgn)
    return op


def certify_bracket(K, L, B=None, lie_op=lie):
    """Check L_[K,L] = [L_K, L_L] on every 1-form generator."""
    m = K.model
    if B is None:
        B = fn_bracket_general(K, L)
    k = K.form_degree() if K else 0
    l_ = L.form_degree() if L else 0
    comm = graded_commutator(lambda x: lie_op(K, x), k, lambda x: lie_op(L, x), l_)
    for g in range(2 * m.n):
        x = Form.gen(m, g)
        if lie_op(B, x) != comm(x):
            return False
    return True


def fn_bracket(K, L, certify=None):
    """FN bracket of T^{1,0}-valued (0,*)-forms."""
    _check_in_scope(K)
    _check_in_scope(L)
    B = fn_bracket_general(K, L)
    if certify or (certify is None and DEBUG):
        if not certify_bracket(K, L, B):
            raise BracketCertificationError("L_[K,L] != [L_K, L_L]")
    return B


# ------------------------------------------------------------- pairing

def _split_scalar(form, p, k):
    """Write a (p,k)-form as a sum of beta (x) e with beta a (0,k)-word first.

    Returns {(beta word, e word): coeff}, using w = e ^ beta = (-1)^(pk) beta ^ e.
    """
    n = form.model.n
    sgn = -1 if (p * k) % 2 else 1
    out = {}
    for w, c in form.terms.items():
        e = tuple(g for g in w if g < n)
        beta = tuple(g for g in w if g >= n)
        if len(e) != p:
            raise ValueError("unexpected bidegree in pairing")
        _acc(out, (beta, e), c * sgn)
    return out


def pairing(phi, sigma):
    """<phi|sigma> for phi a T^{1,0}-valued (0,k)-form.

    Leibniz over the form part and each tensor factor; factor terms carry
    (-1)^(kq) and the new (0,k)-form is wedged onto the right of the
    existing form part.  On O^p factors the action is L^{1,0}_phi, on
    Tangent factors the FN bracket.
    """
    if not isinstance(sigma, TensorForm):
        raise TypeError("pairing acts on TensorForm")
    if not phi:
        return sigma._new({})
    _check_in_scope(phi)
    m = phi.model
    k = phi.form_degree()
    bundle = sigma.bundle
    cache = {}

    def factor_image(f, el):
        key = (f, el)
        if key not in cache:
            if f == "T":
                img = fn_bracket_general(phi, VectorForm(m, {((), el): 1}))
                cache[key] = {(w, a): c for (w, a), c in img.terms.items()}
            else:
                cache[key] = _split_scalar(lie10(phi, Form(m, {el: 1})), f, k)
        return cache[key]

    out = {}
    for (al, elems), c in sigma.terms.items():
        q = len(al)
        for w, c2 in lie10(phi, Form(m, {al: 1})).terms.items():
            _acc(out, (w, elems), c * c2)
        sgn = -1 if (k * q) % 2 else 1
        for i, (f, el) in enumerate(zip(bundle.factors, elems)):
            for (beta, new_el), c3 in factor_image(f, el).items():
                s, w = merge_words(al, beta)
                if not s:
                    continue
                new_elems = elems[:i] + (new_el,) + elems[i + 1:]
                _acc(out, (w, new_elems), c * c3 * (s * sgn))
    return sigma._new(out)


def delbar_phi(phi, sigma):
    """(delbar - <phi|) sigma for a single (possibly polynomial) phi."""
    return delbar(sigma) - pairing(phi, sigma)


def _pieces(series):
    if hasattr(series, "pieces"):
        return dict(series.pieces)
    if isinstance(series, dict):
        return dict(series)
    if isinstance(series, VectorForm):
        out = {}
        for k in range(0, max(series.t_degree(), 0) + 1):
            part = series.homogeneous_part(k)
            if part:
                out[k] = part
        return out
    return {i + 1: p for i, p in enumerate(series)}


def delbar_phi_series(phi_series, sigma, cap):
    """delbar sigma - <phi(t)|sigma> collected by total t-degree up to ``cap``."""
    phis = _pieces(phi_series)
    sig = {}
    for k in range(0, max(sigma.t_degree(), 0) + 1):
        part = sigma.homogeneous_part(k)
        if part:
            sig[k] = part
    out = {}
    for deg in range(0, cap + 1):
        acc = delbar(sig[deg]) if deg in sig else sigma._new({})
        for mu, ph in phis.items():
            if 0 < mu <= deg and (deg - mu) in sig:
                acc = acc - pairing(ph, sig[deg - mu])
        out[deg] = acc
    return out
