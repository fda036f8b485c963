"""Exact scalars: Gaussian rationals and sparse polynomials in t and t-bar.

A ``GaussRational`` is stored as ``(a + b*i) / d`` with integers a, b and
d > 0 and gcd(a, b, d) = 1, which is noticeably cheaper than a pair of
``Fraction`` objects in the inner loops of the linear algebra.

A ``Poly`` is a dict from exponent tuples to ``GaussRational``.  The
exponent tuple has length 2r: the first r slots are the holomorphic
parameters t_1..t_r, the last r their formal conjugates tb_1..tb_r.
"""

import re
from fractions import Fraction
from math import gcd

__all__ = ["GaussRational", "Poly", "ONE", "ZERO", "I", "as_gauss",
           "parse_gauss", "parse_poly", "conj_name", "ParseError"]


class ParseError(ValueError):
    pass


class GaussRational:
    """An element of Q(i), immutable."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._set(a, b, d)

    def _set(self, a, b, d):
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d

    @classmethod
    def _raw(cls, a, b, d):
        obj = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    @property
    def re(self):
        return Fraction(self._a, self._d)

    @property
    def im(self):
        return Fraction(self._b, self._d)

    def conjugate(self):
        return GaussRational._raw(self._a, -self._b, self._d)

    def is_real(self):
        return self._b == 0

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __neg__(self):
        return GaussRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return GaussRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussRational._raw(self._a * o._d + o._a * self._d,
                                  self._b * o._d + o._b * self._d,
                                  self._d * o._d)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        return GaussRational._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        a, b, d = self._a, self._b, self._d
        n = a * a + b * b
        # d / (a + bi) = d (a - bi) / n
        return GaussRational._raw(d * a, -d * b, n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return "GaussRational(%s)" % self.to_string()

    def __str__(self):
        return self.to_string()

    def to_string(self):
        """Canonical text: ``3/2``, ``-1/2*i``, ``(1/2+3/4*i)``."""
        re_, im_ = self.re, self.im
        if im_ == 0:
            return _frac_str(re_)
        if re_ == 0:
            return _imag_str(im_)
        sign = "+" if im_ > 0 else "-"
        return "(%s%s%s)" % (_frac_str(re_), sign, _imag_str(abs(im_)))

    def sort_key(self):
        return (self.re, self.im)


def _frac_str(f):
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def _imag_str(f):
    if f == 1:
        return "i"
    if f == -1:
        return "-i"
    return "%s*i" % _frac_str(f)


def _coerce(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, int):
        return GaussRational._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return GaussRational._raw(x.numerator, 0, x.denominator)
    return None


def as_gauss(x):
    """Coerce int, Fraction, str or GaussRational to a GaussRational."""
    if isinstance(x, str):
        return parse_gauss(x)
    g = _coerce(x)
    if g is None:
        raise TypeError("cannot coerce %r to GaussRational" % (x,))
    return g


ZERO = GaussRational._raw(0, 0, 1)
ONE = GaussRational._raw(1, 0, 1)
I = GaussRational._raw(0, 1, 1)


def conj_name(name):
    """t11 -> tb11 and back; other names get or lose a ``bar`` suffix."""
    if name.startswith("tb"):
        return "t" + name[2:]
    if name.startswith("t"):
        return "tb" + name[1:]
    if name.endswith("bar") and len(name) > 3:
        return name[:-3]
    return name + "bar"


class Poly:
    """Sparse polynomial in parameters t and their conjugates tb.

    ``params`` lists the holomorphic names only; conjugate slots are
    implied.  Terms map exponent tuples of length 2r to nonzero
    GaussRationals.
    """

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params, terms=None):
        self.params = tuple(params)
        out = {}
        if terms:
            width = 2 * len(self.params)
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != width:
                    raise ValueError("exponent width %d, expected %d" % (len(e), width))
                c = as_gauss(c)
                if c:
                    out[e] = out.get(e, ZERO) + c
                    if not out[e]:
                        del out[e]
        self.terms = out
        self._hash = None

    @classmethod
    def _raw(cls, params, terms):
        obj = object.__new__(cls)
        obj.params = params
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def constant(cls, params, c):
        c = as_gauss(c)
        params = tuple(params)
        if not c:
            return cls._raw(params, {})
        return cls._raw(params, {(0,) * (2 * len(params)): c})

    @classmethod
    def var(cls, params, name):
        params = tuple(params)
        r = len(params)
        e = [0] * (2 * r)
        if name in params:
            e[params.index(name)] = 1
        else:
            base = conj_name(name)
            if base not in params:
                raise ValueError("unknown parameter %r" % name)
            e[r + params.index(base)] = 1
        return cls._raw(params, {tuple(e): ONE})

    @property
    def nvars(self):
        return len(self.params)

    def names(self):
        return list(self.params) + [conj_name(p) for p in self.params]

    def _check(self, other):
        if self.params != other.params:
            raise ValueError("parameter-list mismatch: %s vs %s"
                             % (list(self.params), list(other.params)))

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.params != self.params:
                # constants carry no parameter information
                if not other.params and all(not any(e) for e in other.terms):
                    return Poly._raw(self.params, {(0,) * (2 * len(self.params)): c
                                                   for c in other.terms.values()})
                if not self.params:
                    raise _Swap()
                self._check(other)
            return other
        g = _coerce(other)
        if g is None:
            return None
        return Poly.constant(self.params, g)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if self.params != other.params:
                return self.is_constant() and other.is_constant() and \
                    self.constant_term() == other.constant_term()
            return self.terms == other.terms
        g = _coerce(other)
        if g is None:
            return NotImplemented
        return self.is_constant() and self.constant_term() == g

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    def __neg__(self):
        return Poly._raw(self.params, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        try:
            o = self._lift(other)
        except _Swap:
            return other + self
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.params, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussRational) or isinstance(other, (int, Fraction)):
            g = _coerce(other)
            if not g:
                return Poly._raw(self.params, {})
            return Poly._raw(self.params, {e: c * g for e, c in self.terms.items()})
        try:
            o = self._lift(other)
        except _Swap:
            return other * self
        if o is None:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = out.get(e)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.params, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        g = _coerce(other)
        if g is None:
            return NotImplemented
        return self * g.inverse()

    def __pow__(self, k):
        out = Poly.constant(self.params, 1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        r = len(self.params)
        return Poly._raw(self.params, {e[r:] + e[:r]: c.conjugate()
                                       for e, c in self.terms.items()})

    def is_holomorphic(self):
        r = len(self.params)
        return all(not any(e[r:]) for e in self.terms)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * (2 * len(self.params)), ZERO)

    def degree(self):
        """Total degree in t and tb; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_part(self, k):
        return Poly._raw(self.params, {e: c for e, c in self.terms.items() if sum(e) == k})

    def eval(self, point):
        """Evaluate at ``point`` (name -> value for every holomorphic param)."""
        values = []
        for p in self.params:
            if p not in point:
                raise KeyError("missing assignment for %s" % p)
            values.append(as_gauss(point[p]))
        values = values + [v.conjugate() for v in values]
        total = ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def substitute(self, mapping, new_params):
        """Substitute each holomorphic parameter by a Poly in ``new_params``.

        Conjugate slots receive the conjugate polynomial.  Parameters not in
        ``mapping`` are sent to zero.
        """
        new_params = tuple(new_params)
        images = []
        for p in self.params:
            img = mapping.get(p, 0)
            if not isinstance(img, Poly):
                img = Poly.constant(new_params, img)
            elif img.params != new_params:
                img = img._lift_to(new_params)
            images.append(img)
        images = images + [q.conjugate() for q in images]
        total = Poly.constant(new_params, 0)
        for e, c in self.terms.items():
            term = Poly.constant(new_params, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            total = total + term
        return total

    def _lift_to(self, params):
        if self.is_constant():
            return Poly.constant(params, self.constant_term())
        raise ValueError("parameter-list mismatch: %s vs %s" % (list(self.params), list(params)))

    def sorted_terms(self):
        """Terms ordered by total degree, then reverse-lexicographic exponent."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))

    def to_string(self):
        if not self.terms:
            return "0"
        names = self.names()
        pieces = []
        for e, c in self.sorted_terms():
            mono = []
            for name, k in zip(names, e):
                if k == 1:
                    mono.append(name)
                elif k > 1:
                    mono.append("%s^%d" % (name, k))
            pieces.append(_signed_term(c, mono))
        out = pieces[0]
        for p in pieces[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return "Poly(%s)" % self.to_string()


class _Swap(Exception):
    pass


def _signed_term(c, mono):
    if not mono:
        return c.to_string()
    if c == ONE:
        return " * ".join(mono)
    if c == -ONE:
        return "-" + " * ".join(mono)
    return " * ".join([c.to_string()] + mono)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", Fraction(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("sym", sym))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _PolyParser:
    """Recursive descent for sums of products of numbers, i and parameters."""

    def __init__(self, text, params):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.params = tuple(params)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, msg):
        raise ParseError("%s in %r" % (msg, self.text))

    def parse(self):
        if not self.toks:
            self.fail("empty expression")
        out = self.expr()
        if self.pos != len(self.toks):
            self.fail("trailing input at token %d" % self.pos)
        return out

    def expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "sym" and val in "+-":
                self.take()
                t = self.term()
                out = out + t if val == "+" else out - t
            else:
                return out

    def term(self):
        out = self.power()
        while True:
            kind, val = self.peek()
            if kind == "sym" and val in "*/":
                self.take()
                rhs = self.power()
                if val == "*":
                    out = out * rhs
                else:
                    if not rhs.is_constant() or not rhs.constant_term():
                        self.fail("division by non-constant or zero")
                    out = out / rhs.constant_term()
            else:
                return out

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "sym" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num" or val.denominator != 1:
                self.fail("exponent must be a nonnegative integer")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly.constant(self.params, val)
        if kind == "name":
            if val == "i":
                return Poly.constant(self.params, I)
            try:
                return Poly.var(self.params, val)
            except ValueError:
                self.fail("unknown parameter %r" % val)
        if kind == "sym" and val == "(":
            out = self.expr()
            kind, val = self.take()
            if (kind, val) != ("sym", ")"):
                self.fail("expected ')'")
            return out
        if kind == "sym" and val == "-":
            return -self.atom()
        self.fail("unexpected token %r" % (val,))


def parse_poly(text, params):
    """Parse the canonical polynomial grammar, e.g. ``-1/2 * t11^2 * tb12 + i``."""
    return _PolyParser(text, params).parse()


def parse_gauss(text):
    """Parse a constant such as ``-3/2``, ``1/2*i`` or ``(1+2*i)``."""
    p = _PolyParser(str(text), ()).parse()
    return p.constant_term()
