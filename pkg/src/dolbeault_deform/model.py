"""Finite invariant models: generators, structure equations, brackets.

Generators are numbered globally: 0..n-1 are the (1,0)-forms f1..fn and
n..2n-1 the (0,1)-forms fb1..fbn.  Vectors use the same numbering, the
vector with index a being dual to the generator with index a, so
0..n-1 are v1..vn (type (1,0)) and n..2n-1 are vb1..vbn.

A wedge word is a strictly increasing tuple of generator indices.
"""

from itertools import combinations

from .scalars import ZERO, as_gauss

__all__ = ["ModelSpec", "BracketTable", "validate_model", "derive_brackets",
           "ModelError", "merge_words", "gen_name", "vec_name", "parse_gen",
           "parse_vec"]


class ModelError(ValueError):
    """Raised for structurally invalid models."""


def merge_words(w1, w2):
    """Concatenate two sorted words; return (sign, word) or (0, None)."""
    if not w1:
        return 1, w2
    if not w2:
        return 1, w1
    s2 = set(w2)
    if any(g in s2 for g in w1):
        return 0, None
    # count inversions between the two blocks
    inv = 0
    j = 0
    for g in w1:
        while j < len(w2) and w2[j] < g:
            j += 1
        inv += j
    return (-1 if inv & 1 else 1), tuple(sorted(w1 + w2))


def sort_word(seq):
    """Sort an arbitrary generator sequence; return (sign, word) or (0, None)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


def gen_name(g, n):
    return "f%d" % (g + 1) if g < n else "fb%d" % (g - n + 1)


def vec_name(a, n):
    return "v%d" % (a + 1) if a < n else "vb%d" % (a - n + 1)


def _parse_indexed(name, n, plain, bar):
    if name.startswith(bar):
        off, rest = n, name[len(bar):]
    elif name.startswith(plain):
        off, rest = 0, name[len(plain):]
    else:
        raise ModelError("bad generator name %r" % name)
    if not rest.isdigit() or not 1 <= int(rest) <= n:
        raise ModelError("generator index out of range in %r" % name)
    return off + int(rest) - 1


def parse_gen(name, n):
    return _parse_indexed(name, n, "f", "fb")


def parse_vec(name, n):
    return _parse_indexed(name, n, "v", "vb")


def _conj_index(g, n):
    return g + n if g < n else g - n


def conjugate_two_form(form, n):
    """Conjugate a constant 2-form given as {(a, b): c}."""
    out = {}
    for (a, b), c in form.items():
        a2, b2 = _conj_index(a, n), _conj_index(b, n)
        sign = 1
        if a2 > b2:
            a2, b2 = b2, a2
            sign = -1
        out[(a2, b2)] = c.conjugate() * sign
    return out


class ModelSpec:
    """Immutable invariant model of a compact complex manifold.

    ``d10`` gives d of each (1,0)-generator as a dict {(a, b): coeff}
    with a < b.  In the default ``fb_mode="conjugate"`` the (0,1) side is
    derived by conjugation; ``fb_mode="explicit"`` takes it from ``d01``
    instead, for frames whose (0,1)-generators are not the conjugates of
    the (1,0)-generators.
    """

    def __init__(self, name, n, d10, params=(), d01=None, fb_mode="conjugate",
                 beltrami=None, asserted_mc=False):
        if fb_mode not in ("conjugate", "explicit"):
            raise ModelError("fb_mode must be 'conjugate' or 'explicit'")
        self.name = name
        self.n = int(n)
        self.params = tuple(params)
        self.fb_mode = fb_mode
        self.asserted_mc = bool(asserted_mc)
        self.beltrami = beltrami
        d10 = [_clean_two_form(f, self.n) for f in d10]
        if len(d10) != self.n:
            raise ModelError("need one d-entry per (1,0)-generator")
        if fb_mode == "conjugate":
            if d01 is not None:
                given = [_clean_two_form(f, self.n) for f in d01]
                derived = [conjugate_two_form(f, self.n) for f in d10]
                for i, (g, e) in enumerate(zip(given, derived)):
                    if g != e:
                        raise ModelError(
                            "d(fb%d) is not the conjugate of d(f%d); use fb_mode "
                            "'explicit' for non-conjugate frames" % (i + 1, i + 1))
            d01 = [conjugate_two_form(f, self.n) for f in d10]
        else:
            d01 = [_clean_two_form(f, self.n) for f in (d01 or [{}] * self.n)]
            if len(d01) != self.n:
                raise ModelError("need one d-entry per (0,1)-generator")
        self.d10 = tuple(d10)
        self.d01 = tuple(d01)
        self.dtable = self.d10 + self.d01

    @property
    def r(self):
        return len(self.params)

    @property
    def dim(self):
        return 2 * self.n

    @property
    def conjugation_closed(self):
        """True when the (0,1)-generators are the conjugates of the (1,0) ones."""
        return all(conjugate_two_form(f, self.n) == g for f, g in zip(self.d10, self.d01))

    def gen_name(self, g):
        return gen_name(g, self.n)

    def vec_name(self, a):
        return vec_name(a, self.n)

    def key(self):
        k = self.__dict__.get("_key")
        if k is None:
            k = self._key = self._compute_key()
        return k

    def _compute_key(self):
        def enc(forms):
            return tuple(tuple(sorted((k, v.to_string()) for k, v in f.items())) for f in forms)
        bel = None if self.beltrami is None else self.beltrami.to_string()
        return (self.name, self.n, self.params, self.fb_mode, enc(self.d10),
                enc(self.d01), bel, self.asserted_mc)

    def __eq__(self, other):
        if not isinstance(other, ModelSpec):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "ModelSpec(%r, n=%d)" % (self.name, self.n)

    def with_beltrami(self, beltrami, params=None, asserted_mc=None):
        """Copy carrying phi(t); the form is re-homed onto the new model."""
        m = ModelSpec(self.name, self.n, self.d10,
                      params=self.params if params is None else params,
                      d01=self.d01 if self.fb_mode == "explicit" else None,
                      fb_mode=self.fb_mode,
                      asserted_mc=self.asserted_mc if asserted_mc is None else asserted_mc)
        if beltrami is not None:
            m.beltrami = type(beltrami)(m, dict(beltrami.terms))
            m._key = None
        return m

    # exterior derivative on constant words; used by validation and brackets
    def d_word(self, word):
        """d of a constant-coefficient word, as {word: coeff}."""
        out = {}
        for pos, g in enumerate(word):
            sign = -1 if pos & 1 else 1
            for (a, b), c in self.dtable[g].items():
                s, w = sort_word(word[:pos] + (a, b) + word[pos + 1:])
                if s:
                    v = out.get(w, ZERO) + c * (s * sign)
                    if v:
                        out[w] = v
                    else:
                        del out[w]
        return out


def _clean_two_form(form, n):
    out = {}
    for (a, b), c in dict(form).items():
        c = as_gauss(c)
        if a == b:
            continue
        if not (0 <= a < 2 * n and 0 <= b < 2 * n):
            raise ModelError("generator index out of range in d-table")
        if a > b:
            a, b = b, a
            c = -c
        v = out.get((a, b), ZERO) + c
        if v:
            out[(a, b)] = v
        else:
            out.pop((a, b), None)
    return out


def _bidegree(word, n):
    p = sum(1 for g in word if g < n)
    return p, len(word) - p


def validate_model(m):
    """List of human-readable violations; empty means valid."""
    diags = []
    n = m.n
    for g in range(2 * n):
        name = m.gen_name(g)
        dd = {}
        for w, c in m.dtable[g].items():
            for w2, c2 in m.d_word(w).items():
                v = dd.get(w2, ZERO) + c * c2
                if v:
                    dd[w2] = v
                else:
                    dd.pop(w2, None)
        if dd:
            diags.append("%s: d^2 != 0" % name)
        kinds = {_bidegree(w, n) for w in m.dtable[g]}
        if g < n:
            if (0, 2) in kinds:
                diags.append("%s: integrability violated, d has a (0,2)-component" % name)
            if (1, 1) in kinds:
                diags.append("%s: holomorphic-frame violated, d has a (1,1)-component" % name)
        elif (2, 0) in kinds:
            diags.append("%s: integrability violated, d has a (2,0)-component" % name)
    return diags


class BracketTable:
    """Lie brackets of the frame vectors, derived via the Cartan formula."""

    def __init__(self, n, table):
        self.n = n
        self._table = table

    def bracket(self, a, b):
        """[e_a, e_b] as {c: coeff}."""
        if a == b:
            return {}
        if a < b:
            return self._table.get((a, b), {})
        return {c: -v for c, v in self._table.get((b, a), {}).items()}

    def is_abelian(self):
        return not any(self._table.values())

    def items(self):
        return sorted(self._table.items())


def derive_brackets(m):
    """Brackets from xi([X, Y]) = -d xi(X, Y); checks the Jacobi identity."""
    n2 = 2 * m.n
    table = {}
    for c, form in enumerate(m.dtable):
        for (a, b), coeff in form.items():
            table.setdefault((a, b), {})[c] = -coeff
    bt = BracketTable(m.n, {k: v for k, v in table.items() if v})

    def br(x, b):
        # x is {index: coeff}
        out = {}
        for a, ca in x.items():
            for c, v in bt.bracket(a, b).items():
                out[c] = out.get(c, ZERO) + ca * v
        return {k: v for k, v in out.items() if v}

    for a, b, c in combinations(range(n2), 3):
        total = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for k, v in br(bt.bracket(x, y), z).items():
                total[k] = total.get(k, ZERO) + v
        if any(total.values()):
            raise ModelError("structure constants violate the Jacobi identity at (%s, %s, %s)"
                             % (m.vec_name(a), m.vec_name(b), m.vec_name(c)))
    return bt
