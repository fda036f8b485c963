"""Exact Hodge theory on the finite graded pieces A^{0,q}(E).

The metric makes the monomial basis orthonormal, so the adjoint of a
matrix is its conjugate transpose.  Packages are memoized per
(model, bundle, q).
"""

import threading

from .algebra import TensorForm
from .calculus import delbar
from .linalg import Matrix, inverse, nullspace
from .scalars import ZERO

__all__ = ["HodgePackage", "hodge_package", "operator_matrix", "inner_product",
           "harmonic_projection", "green", "delbar_star", "harmonic_basis",
           "cohomology_dim", "apply_matrix"]


def operator_matrix(model, bundle, q, op, target_q=None):
    """Matrix of a t-independent linear operator A^{0,q}(E) -> A^{0,q'}(E)."""
    n = model.n
    src = bundle.basis(n, q)
    tq = q + 1 if target_q is None else target_q
    dst = bundle.basis(n, tq) if 0 <= tq <= n else []
    index = {k: i for i, k in enumerate(dst)}
    M = Matrix(len(dst), len(src))
    for j, key in enumerate(src):
        img = op(TensorForm(model, bundle, {key: 1}))
        for k2, c in img.terms.items():
            if k2 not in index:
                raise ValueError("operator leaves the target graded piece")
            M.rows[index[k2]][j] = c
    return M


def apply_matrix(M, x, src_basis, dst_basis):
    vec = M.apply(x.vector(src_basis))
    return TensorForm.from_vector(x.model, x.bundle, dst_basis, vec)


class HodgePackage:
    """Basis and exact Hodge matrices of one graded piece A^{0,q}(E)."""

    def __init__(self, model, bundle, q):
        n = model.n
        self.model = model
        self.bundle = bundle
        self.q = q
        self.basis = bundle.basis(n, q) if 0 <= q <= n else []
        self.basis_prev = bundle.basis(n, q - 1) if 1 <= q <= n + 1 else []
        self.basis_next = bundle.basis(n, q + 1) if 0 <= q + 1 <= n else []
        dim = len(self.basis)
        # delbar: q -> q+1 and q-1 -> q
        self.dbar = operator_matrix(model, bundle, q, delbar) if dim else \
            Matrix(len(self.basis_next), 0)
        if self.basis_prev:
            self.dbar_prev = operator_matrix(model, bundle, q - 1, delbar)
        else:
            self.dbar_prev = Matrix(dim, 0)
        self.dbar_star = self.dbar.conj_transpose()          # q+1 -> q
        self.dbar_star_prev = self.dbar_prev.conj_transpose()  # q -> q-1
        self.box = self.dbar_prev @ self.dbar_star_prev + self.dbar_star @ self.dbar
        self.harmonic_vectors = nullspace(self.box)
        K = Matrix.from_columns(dim, self.harmonic_vectors)
        if self.harmonic_vectors:
            self.H = K @ inverse(K.conj_transpose() @ K) @ K.conj_transpose()
        else:
            self.H = Matrix(dim, dim)
        self.G = inverse(self.box + self.H) - self.H if dim else Matrix(0, 0)

    @property
    def dim(self):
        return len(self.basis)

    def harmonic_basis(self):
        return [TensorForm.from_vector(self.model, self.bundle, self.basis, v)
                for v in self.harmonic_vectors]

    def project(self, x):
        return apply_matrix(self.H, x, self.basis, self.basis)

    def green(self, x):
        return apply_matrix(self.G, x, self.basis, self.basis)

    def box_apply(self, x):
        return apply_matrix(self.box, x, self.basis, self.basis)

    def star_from_next(self, x):
        """delbar* of a (q+1)-form, landing in degree q."""
        return apply_matrix(self.dbar_star, x, self.basis_next, self.basis)


_cache = {}
_lock = threading.Lock()


def hodge_package(model, bundle, q):
    key = (model, bundle, q)
    pkg = _cache.get(key)
    if pkg is None:
        built = HodgePackage(model, bundle, q)
        with _lock:
            pkg = _cache.setdefault(key, built)
    return pkg


def _degree(x, q):
    if q is not None:
        return q
    if x.q is None:
        raise ValueError("degree of a zero form is ambiguous; pass q")
    return x.q


def inner_product(a, b):
    """<a, b> = sum a_k conj(b_k) in the orthonormal monomial basis."""
    if a.bundle != b.bundle or a.model != b.model:
        raise ValueError("shape mismatch in inner product")
    total = ZERO
    for k, c in a.terms.items():
        d = b.terms.get(k)
        if d is not None:
            total = c * d.conjugate() + total
    return total


def harmonic_projection(x, q=None):
    q = _degree(x, q)
    return hodge_package(x.model, x.bundle, q).project(x)


def green(x, q=None):
    q = _degree(x, q)
    return hodge_package(x.model, x.bundle, q).green(x)


def delbar_star(x, q=None):
    """Adjoint of delbar, A^{0,q} -> A^{0,q-1}."""
    q = _degree(x, q)
    if q == 0:
        return x._new({})
    return hodge_package(x.model, x.bundle, q - 1).star_from_next(x)


def harmonic_basis(model, bundle, q):
    return hodge_package(model, bundle, q).harmonic_basis()


def cohomology_dim(model, bundle, q):
    return len(hodge_package(model, bundle, q).harmonic_vectors)
