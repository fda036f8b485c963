"""The bigraded exterior algebra of invariant forms and its bundle-valued cousins.

Coefficients are duck-typed: a ``GaussRational`` for numeric objects or a
``Poly`` for t-dependent ones.  Every container drops zero coefficients
on construction, so equality of containers is equality of objects.
"""

from fractions import Fraction
from itertools import combinations, product

from .linalg import Matrix, inverse
from .model import ModelError, merge_words, sort_word, parse_gen, parse_vec
from .scalars import ONE, ZERO, Poly, as_gauss, parse_poly, ParseError

__all__ = ["Form", "VectorForm", "TensorForm", "BundleSpec", "wedge", "contract",
           "exp_contract", "rho_extend", "rho_inverse", "rho_matrix",
           "TransportedForm", "evaluate", "words", "tensor_to_scalar",
           "scalar_to_tensor", "vector_to_tensor", "tensor_to_vector",
           "parse_form", "parse_tensor_form", "parse_vector_form"]


def _acc(out, key, val):
    if not val:
        return
    old = out.get(key)
    if old is None:
        out[key] = val
    else:
        new = old + val
        if new:
            out[key] = new
        else:
            del out[key]


def _clean(terms):
    out = {}
    for k, v in terms.items():
        if isinstance(v, (int, Fraction)):
            v = as_gauss(v)
        _acc(out, k, v)
    return out


def _coeff_str(c, rest):
    """Render ``c * rest``; ``rest`` may be empty."""
    if isinstance(c, Poly) and len(c.terms) > 1:
        s = "(%s)" % c.to_string()
    else:
        s = c.to_string()
    if not rest:
        return s
    if s == "1":
        return rest
    if s == "-1":
        return "-" + rest
    return "%s * %s" % (s, rest)


def _join(pieces):
    if not pieces:
        return "0"
    out = pieces[0]
    for p in pieces[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _word_key(w):
    return (len(w), w)


def words(gens, k):
    """All sorted words of length k drawn from ``gens``."""
    return list(combinations(sorted(gens), k))


class _Terms:
    """Shared container behaviour for the three form types."""

    __slots__ = ("model", "terms")

    def _new(self, terms):
        raise NotImplementedError

    def _compatible(self, other):
        if type(other) is not type(self):
            raise TypeError("cannot combine %s with %s" % (type(self).__name__, type(other).__name__))
        if other.model is not self.model and other.model != self.model:
            raise ValueError("objects live on different models")

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return self._new({})
        return self._new(_clean({k: c * v for k, v in self.terms.items()}))

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms and self._shape() == other._shape()

    def __hash__(self):
        return hash((type(self).__name__, self.to_string()))

    def _shape(self):
        return None

    def map_coeffs(self, fn):
        return self._new(_clean({k: fn(v) for k, v in self.terms.items()}))

    def homogeneous_part(self, k):
        """Part of total t-degree k (constants have degree 0)."""
        out = {}
        for key, c in self.terms.items():
            if isinstance(c, Poly):
                _acc(out, key, c.homogeneous_part(k))
            elif k == 0:
                _acc(out, key, c)
        return self._new(out)

    def t_degree(self):
        deg = -1
        for c in self.terms.values():
            deg = max(deg, c.degree() if isinstance(c, Poly) else 0)
        return deg

    def is_holomorphic(self):
        return all(c.is_holomorphic() for c in self.terms.values() if isinstance(c, Poly))

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.to_string())

    def __str__(self):
        return self.to_string()


class Form(_Terms):
    """Scalar invariant form: {sorted word: coeff}."""

    __slots__ = ()

    def __init__(self, model, terms=None):
        self.model = model
        self.terms = _clean(terms or {})

    def _new(self, terms):
        f = Form.__new__(Form)
        f.model = self.model
        f.terms = terms
        return f

    @classmethod
    def gen(cls, model, g, coeff=ONE):
        return cls(model, {(g,): coeff})

    @classmethod
    def word(cls, model, word, coeff=ONE):
        s, w = sort_word(word)
        if not s:
            return cls(model)
        return cls(model, {w: coeff * s})

    @classmethod
    def constant(cls, model, c):
        return cls(model, {(): as_gauss(c) if not isinstance(c, Poly) else c})

    def bidegrees(self):
        n = self.model.n
        return sorted({(sum(1 for g in w if g < n), sum(1 for g in w if g >= n))
                       for w in self.terms})

    def bidegree_part(self, p, q):
        n = self.model.n
        return self._new({w: c for w, c in self.terms.items()
                          if sum(1 for g in w if g < n) == p and len(w) - p == q})

    def degree_part(self, k):
        return self._new({w: c for w, c in self.terms.items() if len(w) == k})

    def conjugate(self):
        n = self.model.n
        out = {}
        for w, c in self.terms.items():
            s, w2 = sort_word([g + n if g < n else g - n for g in w])
            _acc(out, w2, c.conjugate() * s)
        return self._new(out)

    def wedge(self, other):
        return wedge(self, other)

    def __xor__(self, other):
        return wedge(self, other)

    def to_string(self):
        m = self.model
        pieces = []
        for w in sorted(self.terms, key=_word_key):
            rest = " ^ ".join(m.gen_name(g) for g in w)
            pieces.append(_coeff_str(self.terms[w], rest))
        return _join(pieces)


def wedge(a, b):
    """Exterior product of two scalar forms."""
    out = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            s, w = merge_words(w1, w2)
            if s:
                _acc(out, w, c1 * c2 if s > 0 else -(c1 * c2))
    return a._new(out)


class VectorForm(_Terms):
    """Vector-valued form: {(sorted word, vector index): coeff}."""

    __slots__ = ()

    def __init__(self, model, terms=None):
        self.model = model
        self.terms = _clean(terms or {})

    def _new(self, terms):
        f = VectorForm.__new__(VectorForm)
        f.model = self.model
        f.terms = terms
        return f

    @classmethod
    def elementary(cls, model, word, vec, coeff=ONE):
        s, w = sort_word(word)
        if not s:
            return cls(model)
        return cls(model, {(w, vec): coeff * s})

    @property
    def vector_type(self):
        """'10', '01', 'mixed' or None for the zero vector form."""
        n = self.model.n
        kinds = {"10" if a < n else "01" for (_, a) in self.terms}
        if not kinds:
            return None
        return kinds.pop() if len(kinds) == 1 else "mixed"

    def form_bidegrees(self):
        n = self.model.n
        return sorted({(sum(1 for g in w if g < n), sum(1 for g in w if g >= n))
                       for (w, _) in self.terms})

    def form_degree(self):
        degs = {len(w) for (w, _) in self.terms}
        if len(degs) > 1:
            raise ValueError("vector form is not homogeneous in form degree")
        return degs.pop() if degs else 0

    def conjugate(self):
        n = self.model.n
        out = {}
        for (w, a), c in self.terms.items():
            s, w2 = sort_word([g + n if g < n else g - n for g in w])
            _acc(out, (w2, a + n if a < n else a - n), c.conjugate() * s)
        return self._new(out)

    def to_string(self):
        m = self.model
        pieces = []
        for (w, a) in sorted(self.terms, key=lambda k: (_word_key(k[0]), k[1])):
            parts = [" ^ ".join(m.gen_name(g) for g in w)] if w else []
            parts.append(m.vec_name(a))
            pieces.append(_coeff_str(self.terms[(w, a)], " (x) ".join(parts)))
        return _join(pieces)


def contract_vec(a, word):
    """e_a interior word: (sign, word without a) or (0, None)."""
    try:
        pos = word.index(a)
    except ValueError:
        return 0, None
    return (-1 if pos & 1 else 1), word[:pos] + word[pos + 1:]


def contract(K, omega):
    """i_K omega with i_{xi (x) X} w = xi ^ (X interior w)."""
    out = {}
    for (beta, a), c in K.terms.items():
        for w, d in omega.terms.items():
            s1, rest = contract_vec(a, w)
            if not s1:
                continue
            s2, ww = merge_words(beta, rest)
            if not s2:
                continue
            _acc(out, ww, c * d if s1 * s2 > 0 else -(c * d))
    return omega._new(out)


def exp_contract(K, omega):
    """e^{i_K} omega for a vector 1-form K (finite sum)."""
    total = omega
    term = omega
    k = 1
    while True:
        term = contract(K, term)
        if not term:
            return total
        total = total + term.scale(as_gauss(Fraction(1, _fact(k))))
        k += 1


def _fact(k):
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


# ------------------------------------------------------------- bundles

class BundleSpec:
    """Ordered tensor product of factors: an int p >= 1 for Omega^p, 'T' for T^{1,0}."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        fs = []
        for f in factors:
            if f == "T":
                fs.append("T")
            elif isinstance(f, int) and f >= 1:
                fs.append(f)
            else:
                raise ValueError("bad bundle factor %r" % (f,))
        self.factors = tuple(fs)

    @classmethod
    def parse(cls, text, n):
        """``O^p``, ``T``, ``K``, ``K^m`` joined by ``*``; ``O`` or ``1`` is trivial."""
        factors = []
        text = text.replace(" ", "")
        if text in ("", "1", "O", "O^0"):
            return cls(())
        for piece in text.split("*"):
            base, _, exp = piece.partition("^")
            if base == "T" and not exp:
                factors.append("T")
            elif base == "O" and exp.isdigit():
                p = int(exp)
                if p > n:
                    raise ValueError("O^%d exceeds dimension %d" % (p, n))
                if p > 0:
                    factors.append(p)
            elif base == "K":
                if exp and not exp.isdigit():
                    raise ValueError("bad exponent in %r" % piece)
                m = int(exp) if exp else 1
                factors.extend([n] * m)
            else:
                raise ValueError("cannot parse bundle factor %r" % piece)
        return cls(factors)

    def to_string(self):
        if not self.factors:
            return "O^0"
        return "*".join("T" if f == "T" else "O^%d" % f for f in self.factors)

    def __eq__(self, other):
        return isinstance(other, BundleSpec) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "BundleSpec(%s)" % self.to_string()

    def is_trivial(self):
        return not self.factors

    def factor_basis(self, f, n):
        if f == "T":
            return list(range(n))
        return list(combinations(range(n), f))

    def fiber_basis(self, n):
        return list(product(*[self.factor_basis(f, n) for f in self.factors]))

    def rank(self, n):
        return len(self.fiber_basis(n))

    def basis(self, n, q):
        """Canonical basis keys (word01, elems) of A^{0,q}(E)."""
        return [(w, e) for w in combinations(range(n, 2 * n), q) for e in self.fiber_basis(n)]


class TensorForm(_Terms):
    """E-valued (0,q)-form: {(word over fb-generators, factor elements): coeff}."""

    __slots__ = ("bundle",)

    def __init__(self, model, bundle, terms=None):
        self.model = model
        self.bundle = bundle
        self.terms = _clean(terms or {})
        n = model.n
        for (w, e) in self.terms:
            if any(g < n for g in w) or len(e) != len(bundle.factors):
                raise ValueError("term does not match the bundle shape")

    def _new(self, terms):
        f = TensorForm.__new__(TensorForm)
        f.model = self.model
        f.bundle = self.bundle
        f.terms = terms
        return f

    def _shape(self):
        return self.bundle

    def _compatible(self, other):
        _Terms._compatible(self, other)
        if other.bundle != self.bundle:
            raise ValueError("bundle mismatch %s vs %s" % (self.bundle, other.bundle))

    @property
    def q(self):
        qs = {len(w) for (w, _) in self.terms}
        if len(qs) > 1:
            raise ValueError("mixed form degree")
        return qs.pop() if qs else None

    def to_string(self):
        m = self.model
        pieces = []
        for key in sorted(self.terms, key=lambda k: (_word_key(k[0]), k[1])):
            w, elems = key
            parts = [" ^ ".join(m.gen_name(g) for g in w) if w else ("1" if elems else "")]
            for f, el in zip(self.bundle.factors, elems):
                parts.append(m.vec_name(el) if f == "T" else " ^ ".join(m.gen_name(g) for g in el))
            rest = " (x) ".join(p for p in parts if p)
            pieces.append(_coeff_str(self.terms[key], "" if rest == "1" else rest))
        return _join(pieces)

    def vector(self, basis_keys):
        """Coefficient vector in the given basis order."""
        index = {k: i for i, k in enumerate(basis_keys)}
        vec = [ZERO] * len(basis_keys)
        for k, c in self.terms.items():
            if k not in index:
                raise ValueError("term outside the graded piece")
            vec[index[k]] = c
        return vec

    @classmethod
    def from_vector(cls, model, bundle, basis_keys, vec):
        return cls(model, bundle, {k: c for k, c in zip(basis_keys, vec) if c})


# ------------------------------------------------------------- conversions

def vector_to_tensor(K):
    n = K.model.n
    for (w, a) in K.terms:
        if a >= n or any(g < n for g in w):
            raise ValueError("only T^{1,0}-valued (0,q)-forms convert to tensor forms")
    return TensorForm(K.model, BundleSpec(("T",)), {(w, (a,)): c for (w, a), c in K.terms.items()})


def tensor_to_vector(s):
    if s.bundle.factors != ("T",):
        raise ValueError("tensor form is not T-valued")
    return VectorForm(s.model, {(w, e[0]): c for (w, e), c in s.terms.items()})


def tensor_to_scalar(s):
    """alpha (x) e  ->  alpha ^ e, for the trivial bundle or a single Omega^p."""
    fs = s.bundle.factors
    if len(fs) > 1 or (fs and fs[0] == "T"):
        raise ValueError("only O^p-valued forms have a scalar counterpart")
    out = {}
    for (w, elems), c in s.terms.items():
        e = elems[0] if elems else ()
        sg, ww = merge_words(w, e)
        _acc(out, ww, c if sg > 0 else -c)
    return Form(s.model, out)


def scalar_to_tensor(form, bundle):
    """Inverse of tensor_to_scalar; the form must be of type (p, *)."""
    fs = bundle.factors
    if len(fs) > 1 or (fs and fs[0] == "T"):
        raise ValueError("only O^p-valued forms have a scalar counterpart")
    p = fs[0] if fs else 0
    n = form.model.n
    out = {}
    for w, c in form.terms.items():
        e = tuple(g for g in w if g < n)
        a = tuple(g for g in w if g >= n)
        if len(e) != p:
            raise ValueError("form has a (%d,*)-component, expected p = %d" % (len(e), p))
        sg, _ = merge_words(a, e)
        _acc(out, (a, (e,) if fs else ()), c if sg > 0 else -c)
    return TensorForm(form.model, bundle, out)


# ------------------------------------------------------------- rho

def _check_beltrami(phi):
    n = phi.model.n
    for (w, a) in phi.terms:
        if a >= n or len(w) != 1 or w[0] < n:
            raise ValueError("rho needs a T^{1,0}-valued (0,1)-form")
    if not phi.model.conjugation_closed:
        raise ModelError("rho needs a conjugation-closed model (model %r has an "
                         "explicit (0,1) frame)" % phi.model.name)


def rho_one_forms(phi):
    """Images (1 + i_phi + i_phibar) of every generator, as Forms."""
    _check_beltrami(phi)
    m = phi.model
    phibar = phi.conjugate()
    out = []
    for g in range(2 * m.n):
        x = Form.gen(m, g)
        out.append(x + contract(phi if g < m.n else phibar, x))
    return out


def _apply_multiplicative(images, x):
    out = Form(x.model)
    for w, c in x.terms.items():
        acc = Form.constant(x.model, 1)
        for g in w:
            acc = wedge(acc, images[g])
        out = out + acc.scale(c)
    return out


class TransportedForm:
    """A bundle-valued form expressed in the rho-transported frame.

    rho keeps coefficients and moves each frame element: (0,1)-words go
    through e^{i_phibar}, Omega^p frames through e^{i_phi}, and the
    Tangent frame to the dual of the deformed (1,0)-coframe.
    """

    def __init__(self, phi, form):
        self.phi = phi
        self.form = form

    def scalar(self):
        """The scalar form rho(alpha ^ e) for trivial or single-Omega^p bundles."""
        return rho_extend(self.phi, tensor_to_scalar(self.form))

    def __eq__(self, other):
        return isinstance(other, TransportedForm) and self.form == other.form and \
            self.phi == other.phi

    def __repr__(self):
        return "TransportedForm(%s)" % self.form.to_string()


def rho_extend(phi, x):
    """Extension operator: multiplicative, (1 + i_phi + i_phibar) on 1-forms."""
    if isinstance(x, TensorForm):
        _check_beltrami(phi)
        return TransportedForm(phi, x)
    if isinstance(x, Form):
        return _apply_multiplicative(rho_one_forms(phi), x)
    raise TypeError("rho_extend takes a Form or TensorForm")


def evaluate(x, point):
    """Replace Poly coefficients by their values at ``point``."""
    def ev(c):
        return c.eval(point) if isinstance(c, Poly) else c
    return x.map_coeffs(ev)


def rho_matrix(phi, point):
    """Matrix of rho on 1-forms at a numeric point; column g is rho(generator g)."""
    images = rho_one_forms(evaluate(phi, point))
    n2 = 2 * phi.model.n
    M = Matrix(n2, n2)
    for g, img in enumerate(images):
        for (h,), c in img.terms.items():
            M.rows[h][g] = c
    return M


def rho_inverse(phi, x, point):
    """Multiplicative extension of the inverse of rho on 1-forms, at ``point``."""
    M = rho_matrix(phi, point)
    try:
        Minv = inverse(M)
    except ZeroDivisionError:
        raise ZeroDivisionError("degree-1 matrix of rho is singular at this point")
    m = phi.model
    images = []
    for g in range(2 * m.n):
        images.append(Form(m, {(h,): Minv.rows[h][g] for h in range(2 * m.n)}))
    return _apply_multiplicative(images, evaluate(x, point))


# ------------------------------------------------------------- parsing

def _split_top(text, sep):
    """Split on ``sep`` outside parentheses."""
    out, depth, cur = [], 0, ""
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            out.append(cur)
            cur = ""
            i += len(sep)
            continue
        cur += ch
        i += 1
    out.append(cur)
    return out


def _split_terms(text):
    """Split a sum into signed terms at top-level + and -."""
    terms, depth, cur = [], 0, ""
    text = text.replace("(x)", "\x00")
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("*", "/", "^")):
            terms.append(cur)
            cur = ch
            continue
        cur += ch
    if cur.strip():
        terms.append(cur)
    return [t.replace("\x00", "(x)").strip() for t in terms]


def _parse_product(term, model, params):
    """Split ``coeff * g1 ^ g2`` into (coeff, [generator names])."""
    n = model.n
    sign = 1
    t = term.strip()
    while t.startswith(("+", "-")):
        if t[0] == "-":
            sign = -sign
        t = t[1:].strip()
    factors = [f.strip() for f in _split_top(t, "*")]
    coeff_parts, gens = [], []
    for f in factors:
        pieces = [p.strip() for p in _split_top(f, "^")]
        if all(_is_gen(p, n) for p in pieces):
            gens.extend(pieces)
        elif gens:
            raise ParseError("coefficient after generators in %r" % term)
        else:
            coeff_parts.append(f)
    coeff = parse_poly(" * ".join(coeff_parts), params) if coeff_parts else Poly.constant(params, 1)
    coeff = coeff * sign
    if not params:
        coeff = coeff.constant_term()
    return coeff, gens


def _is_gen(s, n):
    try:
        parse_gen(s, n)
        return True
    except ValueError:
        return False


def parse_form(text, model, params=None):
    """Parse ``t11 * f1 ^ fb2 - 1/2 * f3`` into a Form."""
    params = model.params if params is None else params
    out = Form(model)
    for term in _split_terms(text):
        coeff, gens = _parse_product(term, model, params)
        idx = [parse_gen(g, model.n) for g in gens]
        out = out + Form.word(model, idx, coeff)
    return out


def parse_vector_form(text, model, params=None):
    """Parse ``t11 * fb1 (x) v1 + ...`` into a VectorForm."""
    params = model.params if params is None else params
    out = VectorForm(model)
    for term in _split_terms(text):
        parts = [p.strip() for p in term.split("(x)")]
        if len(parts) != 2:
            raise ParseError("vector form term needs exactly one '(x) v<i>': %r" % term)
        coeff, gens = _parse_product(parts[0], model, params)
        idx = [parse_gen(g, model.n) for g in gens]
        out = out + VectorForm.elementary(model, idx, parse_vec(parts[1], model.n), coeff)
    return out


def parse_tensor_form(text, model, bundle, params=None):
    """Parse a class expression for ``bundle``.

    Accepts tensor syntax ``coeff * fb1 (x) f1 ^ f2 (x) v3`` (use ``1`` for
    an empty (0,0)-part), or for trivial and single O^p bundles a scalar
    form such as ``f1 ^ fb1``.
    """
    params = model.params if params is None else params
    if "(x)" not in text:
        return scalar_to_tensor(parse_form(text, model, params), bundle)
    n = model.n
    out = TensorForm(model, bundle)
    for term in _split_terms(text):
        parts = [p.strip() for p in term.split("(x)")]
        if len(parts) != len(bundle.factors) + 1:
            raise ParseError("term %r does not match bundle %s" % (term, bundle.to_string()))
        head = parts[0]
        coeff, gens = _parse_product(head, model, params) if head not in ("1", "+1", "-1") else \
            (Poly.constant(params, -1 if head == "-1" else 1) if params else as_gauss(-1 if head == "-1" else 1), [])
        idx = [parse_gen(g, n) for g in gens]
        s, w = sort_word(idx)
        if not s or any(g < n for g in w):
            raise ParseError("form part of %r must be a nonzero (0,q)-word" % term)
        elems = []
        for f, part in zip(bundle.factors, parts[1:]):
            if f == "T":
                a = parse_vec(part, n)
                if a >= n:
                    raise ParseError("Tangent factor takes v<i>, got %r" % part)
                elems.append(a)
            else:
                gi = [parse_gen(g.strip(), n) for g in part.split("^")]
                s2, e = sort_word(gi)
                if not s2 or len(e) != f or any(g >= n for g in e):
                    raise ParseError("factor %r is not a (%d,0)-word" % (part, f))
                s *= s2
                elems.append(e)
        out = out + TensorForm(model, bundle, {(w, tuple(elems)): coeff * s})
    return out
