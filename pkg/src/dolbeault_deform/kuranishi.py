"""Maurer-Cartan solver: the Kuranishi recursion as an exact truncated series."""

from fractions import Fraction

from .algebra import BundleSpec, VectorForm, tensor_to_vector, vector_to_tensor
from .calculus import delbar, fn_bracket
from .hodge import delbar_star, green, harmonic_basis, hodge_package, inner_product
from .scalars import Poly, as_gauss

__all__ = ["BeltramiSeries", "solve_mc", "mc_residual", "series_from_form",
           "beltrami_series", "kuranishi_parameters", "TANGENT", "DEFAULT_ORDER"]

TANGENT = BundleSpec(("T",))
DEFAULT_ORDER = 10
HALF = as_gauss(Fraction(1, 2))


class BeltramiSeries:
    """phi(t) = sum of homogeneous pieces phi_mu, mu >= 1.

    ``terminated`` means every piece beyond the stored ones is provably
    zero; otherwise the series is only known up to ``order``.
    """

    def __init__(self, model, params, pieces, order, terminated, source="recursion",
                 basis=None):
        self.model = model
        self.params = tuple(params)
        self.pieces = {mu: p for mu, p in sorted(pieces.items()) if p}
        self.order = order
        self.terminated = terminated
        self.source = source
        self.basis = basis or []
        self.mc_residual = mc_residual(self, self.residual_cap())
        self.kuranishi_obstructions = _obstructions(self)

    def residual_cap(self):
        top = max(self.pieces, default=0)
        return max(2 * top, 1) if self.terminated else self.order

    def total(self):
        out = VectorForm(self.model)
        for p in self.pieces.values():
            out = out + p
        return out

    def degree(self):
        return max(self.pieces, default=0)

    @property
    def mc_certified(self):
        """Zero residual in every degree where it can be nonzero."""
        return self.terminated and not any(self.mc_residual.values())

    @property
    def asserted_mc(self):
        return not self.mc_certified

    def zero_point(self):
        return {p: 0 for p in self.params}

    def __repr__(self):
        return "BeltramiSeries(%s)" % self.total().to_string()


def kuranishi_parameters(model):
    """Harmonic basis of H^{0,1}(T) with parameter names.

    Monomial basis vectors fb_l (x) v_i get the name t<i><l>; anything
    else is numbered t1, t2, ...
    """
    basis = harmonic_basis(model, TANGENT, 1)
    named = []
    monomial = all(len(b.terms) == 1 and list(b.terms.values())[0] == 1 for b in basis)
    if monomial and model.n <= 9:
        for b in basis:
            (w, (a,)), = b.terms
            named.append(("t%d%d" % (a + 1, w[0] - model.n + 1), b, (a, w[0])))
        named.sort(key=lambda x: x[2])
        return [(name, b) for name, b, _ in named]
    return [("t%d" % (k + 1), b) for k, b in enumerate(basis)]


def _bracket_sum(pieces, mu):
    m = None
    total = None
    for i in range(1, mu):
        j = mu - i
        if i in pieces and j in pieces:
            b = fn_bracket(pieces[i], pieces[j])
            total = b if total is None else total + b
            m = True
    return total if m else None


def solve_mc(model, order=DEFAULT_ORDER, phi1=None, params=None):
    """Kuranishi recursion phi_mu = 1/2 delbar* G sum_{i+j=mu} [phi_i, phi_j]."""
    basis = []
    if phi1 is None:
        named = kuranishi_parameters(model)
        params = tuple(name for name, _ in named)
        phi1 = VectorForm(model)
        for name, b in named:
            phi1 = phi1 + tensor_to_vector(b).scale(Poly.var(params, name))
        basis = named
    elif params is None:
        params = _params_of(phi1) or model.params
    pieces = {1: phi1} if phi1 else {}
    terminated = False
    top = 1 if phi1 else 0
    if top == 0:
        terminated = True
    mu = 2
    while not terminated and mu <= order:
        b = _bracket_sum(pieces, mu)
        if b is not None and b:
            x = vector_to_tensor(b)
            y = delbar_star(green(x, 2), 2).scale(HALF)
            piece = tensor_to_vector(y)
            if piece:
                pieces[mu] = piece
                top = mu
        if mu >= 2 * top:
            terminated = True
        mu += 1
    return BeltramiSeries(model, params, pieces, order, terminated, "recursion", basis)


def _params_of(x):
    for c in x.terms.values():
        if isinstance(c, Poly):
            return c.params
    return ()


def series_from_form(model, phi, order=DEFAULT_ORDER, params=None, source="model"):
    """Wrap a closed-form phi(t) (e.g. supplied with a model) as a series."""
    params = params or _params_of(phi) or model.params
    pieces = {}
    top = max(phi.t_degree(), 0)
    for k in range(1, top + 1):
        part = phi.homogeneous_part(k)
        if part:
            pieces[k] = part
    return BeltramiSeries(model, params, pieces, max(order, top), True, source)


def beltrami_series(model, order=DEFAULT_ORDER):
    """The model's own phi(t) when supplied, else the Kuranishi recursion."""
    if model.beltrami is not None:
        return series_from_form(model, model.beltrami, order, model.params)
    return solve_mc(model, order)


def mc_residual(series, cap):
    """{k: delbar phi_k - 1/2 sum_{i+j=k} [phi_i, phi_j]} for 1 <= k <= cap."""
    pieces = series.pieces if hasattr(series, "pieces") else dict(series)
    model = series.model if hasattr(series, "model") else next(iter(pieces.values())).model
    out = {}
    for k in range(1, cap + 1):
        r = delbar(pieces[k]) if k in pieces else VectorForm(model)
        b = _bracket_sum(pieces, k)
        if b is not None:
            r = r - b.scale(HALF)
        out[k] = r
    return out


def _obstructions(series):
    """<[phi, phi], alpha> for each harmonic (0,2)-form alpha."""
    m = series.model
    if m.n < 2:
        return []
    alphas = hodge_package(m, TANGENT, 2).harmonic_basis()
    cap = series.residual_cap()
    total = VectorForm(m)
    for k in range(2, cap + 1):
        b = _bracket_sum(series.pieces, k)
        if b is not None:
            total = total + b
    x = vector_to_tensor(total)
    out = []
    for a in alphas:
        v = inner_product(x, a)
        if not isinstance(v, Poly):
            v = Poly.constant(series.params, v)
        out.append(v)
    return out
