"""Built-in models and the JSON model-file format.

A model file looks like::

    {"name": "iwasawa", "dim": 3, "params": ["t11", ...],
     "fb_mode": "conjugate", "asserted_mc": false,
     "d": {"f3": [{"coeff": "-1", "wedge": ["f1", "f2"]}]},
     "beltrami": [{"coeff": "t11", "form": ["fb1"], "vector": "v1"}]}

``fb_mode`` and ``asserted_mc`` are optional.  In conjugate mode any
``fb<i>`` entries must agree with the conjugates of the ``f<i>`` entries.
"""

import json

from .algebra import VectorForm
from .model import (ModelError, ModelSpec, derive_brackets, gen_name, parse_gen,
                    parse_vec, sort_word, validate_model, vec_name)
from .scalars import ParseError, Poly, as_gauss, parse_gauss, parse_poly

__all__ = ["builtin", "builtin_names", "load_model", "save_model", "model_to_dict",
           "model_from_dict", "resolve_model", "ModelValidationError", "torus",
           "iwasawa", "nakamura_iii_3b"]


class ModelValidationError(ModelError):
    """A model file parsed but fails validation."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def _first_order_beltrami(m, params, lambdas):
    """sum t_{i lambda} fb_lambda (x) v_i over the given lambda range."""
    n = m.n
    phi = VectorForm(m)
    for i in range(n):
        for lam in lambdas:
            t = Poly.var(params, "t%d%d" % (i + 1, lam))
            phi = phi + VectorForm.elementary(m, (n + lam - 1,), i, t)
    return phi


def torus(n):
    """Complex torus C^n / Z^2n: all structure constants vanish."""
    if not 1 <= n <= 9:
        raise ModelError("torus dimension must be between 1 and 9")
    params = tuple("t%d%d" % (i, l) for i in range(1, n + 1) for l in range(1, n + 1))
    m = ModelSpec("torus:%d" % n, n, [{}] * n, params=params)
    return m.with_beltrami(_first_order_beltrami(m, params, range(1, n + 1)))


def iwasawa():
    """d f3 = -f1 ^ f2; phi(t) = t_{i lambda} fb_lambda (x) v_i - D(t) fb3 (x) v3."""
    params = ("t11", "t12", "t21", "t22", "t31", "t32")
    m = ModelSpec("iwasawa", 3, [{}, {}, {(0, 1): -1}], params=params)
    phi = _first_order_beltrami(m, params, (1, 2))
    t = {p: Poly.var(params, p) for p in params}
    D = t["t11"] * t["t22"] - t["t12"] * t["t21"]
    phi = phi + VectorForm.elementary(m, (5,), 2, -D)
    return m.with_beltrami(phi)


def nakamura_iii_3b():
    """d f2 = f1 ^ f2, d f3 = -f1 ^ f3 with the (0,1)-frame e^{z1} dzb2, e^{-z1} dzb3."""
    params = tuple("t%d%d" % (i, l) for i in range(1, 4) for l in range(1, 4))
    m = ModelSpec("nakamura_iii_3b", 3, [{}, {(0, 1): 1}, {(0, 2): -1}], params=params,
                  d01=[{}, {(0, 4): 1}, {(0, 5): -1}], fb_mode="explicit",
                  asserted_mc=True)
    return m.with_beltrami(_first_order_beltrami(m, params, (1, 2, 3)))


_BUILTINS = {"iwasawa": iwasawa, "nakamura_iii_3b": nakamura_iii_3b}


def builtin_names():
    return sorted(_BUILTINS) + ["torus:<n>"]


def builtin(name):
    if name.startswith("torus"):
        rest = name[len("torus"):]
        if rest == "":
            return torus(3)
        if rest.startswith(":") and rest[1:].isdigit():
            return torus(int(rest[1:]))
        raise ModelError("unknown built-in model %r" % name)
    if name not in _BUILTINS:
        raise ModelError("unknown built-in model %r (known: %s)"
                         % (name, ", ".join(builtin_names())))
    return _BUILTINS[name]()


# ------------------------------------------------------------- JSON

def _two_form_entries(form, n):
    out = []
    for (a, b), c in sorted(form.items()):
        out.append({"coeff": as_gauss(c).to_string(), "wedge": [gen_name(a, n), gen_name(b, n)]})
    return out


def model_to_dict(m):
    n = m.n
    d = {}
    for i, f in enumerate(m.d10):
        if f:
            d[gen_name(i, n)] = _two_form_entries(f, n)
    if m.fb_mode == "explicit":
        for i, f in enumerate(m.d01):
            if f:
                d[gen_name(n + i, n)] = _two_form_entries(f, n)
    out = {"name": m.name, "dim": n, "params": list(m.params), "fb_mode": m.fb_mode,
           "asserted_mc": m.asserted_mc, "d": d}
    if m.beltrami is not None:
        bel = []
        for (w, a), c in sorted(m.beltrami.terms.items()):
            cs = c.to_string() if isinstance(c, Poly) else as_gauss(c).to_string()
            bel.append({"coeff": cs, "form": [gen_name(g, n) for g in w],
                        "vector": vec_name(a, n)})
        out["beltrami"] = bel
    return out


def _field(path, fn, *args):
    try:
        return fn(*args)
    except (ParseError, ModelError, KeyError, ValueError, TypeError) as e:
        raise ModelError("field %s: %s" % (path, e)) from None


def _need(obj, key, path, kind):
    if key not in obj:
        raise ModelError("field %s: missing" % (path + "." + key if path else key))
    v = obj[key]
    if not isinstance(v, kind):
        raise ModelError("field %s: expected %s" % (path + "." + key if path else key,
                                                     kind.__name__ if isinstance(kind, type)
                                                     else "/".join(k.__name__ for k in kind)))
    return v


def model_from_dict(data):
    if not isinstance(data, dict):
        raise ModelError("model file must hold a JSON object")
    name = _need(data, "name", "", str)
    n = _need(data, "dim", "", int)
    if n < 1:
        raise ModelError("field dim: must be positive")
    params = tuple(data.get("params", []))
    if not all(isinstance(p, str) for p in params):
        raise ModelError("field params: expected a list of names")
    fb_mode = data.get("fb_mode", "conjugate")
    asserted = data.get("asserted_mc", False)
    if not isinstance(asserted, bool):
        raise ModelError("field asserted_mc: expected true/false")
    dsec = data.get("d", {})
    if not isinstance(dsec, dict):
        raise ModelError("field d: expected an object")
    d10 = [dict() for _ in range(n)]
    d01 = [dict() for _ in range(n)]
    has_fb = False
    for gname in sorted(dsec):
        path = "d." + gname
        g = _field(path, parse_gen, gname, n)
        entries = dsec[gname]
        if not isinstance(entries, list):
            raise ModelError("field %s: expected a list" % path)
        target = d10[g] if g < n else d01[g - n]
        has_fb = has_fb or g >= n
        for k, e in enumerate(entries):
            p = "%s[%d]" % (path, k)
            if not isinstance(e, dict):
                raise ModelError("field %s: expected an object" % p)
            c = _field(p + ".coeff", parse_gauss, str(_need(e, "coeff", p, (str, int))))
            wedge = _need(e, "wedge", p, list)
            if len(wedge) != 2:
                raise ModelError("field %s.wedge: need exactly two generators" % p)
            idx = [_field(p + ".wedge", parse_gen, str(x), n) for x in wedge]
            s, w = sort_word(idx)
            if not s:
                continue
            target[w] = target.get(w, 0) + (c if s > 0 else -c)
    kw = {}
    if fb_mode == "explicit" or has_fb:
        kw["d01"] = d01
    m = _field("d", ModelSpec, name, n, d10, params, kw.get("d01"), fb_mode, None, asserted)
    if "beltrami" in data:
        bel = VectorForm(m)
        entries = data["beltrami"]
        if not isinstance(entries, list):
            raise ModelError("field beltrami: expected a list")
        for k, e in enumerate(entries):
            p = "beltrami[%d]" % k
            if not isinstance(e, dict):
                raise ModelError("field %s: expected an object" % p)
            c = _field(p + ".coeff", parse_poly, str(_need(e, "coeff", p, (str, int))), params)
            form = [_field(p + ".form", parse_gen, str(x), n)
                    for x in _need(e, "form", p, list)]
            a = _field(p + ".vector", parse_vec, str(_need(e, "vector", p, str)), n)
            s, w = sort_word(form)
            if s:
                bel = bel + VectorForm.elementary(m, w, a, c if s > 0 else -c)
        m = m.with_beltrami(bel)
    return m


def load_model(path, validate=True):
    """Read a model file; with ``validate`` a failing model raises ModelValidationError."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ModelError("cannot read %s: %s" % (path, e.strerror)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError("JSON parse error at line %d column %d: %s"
                         % (e.lineno, e.colno, e.msg)) from None
    m = model_from_dict(data)
    if validate:
        diags = validate_model(m)
        if diags:
            raise ModelValidationError(diags)
        derive_brackets(m)
    return m


def save_model(m, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(m), fh, indent=2, sort_keys=True)
        fh.write("\n")


def resolve_model(name_or_path, validate=True):
    """A built-in name or a path to a model file."""
    if name_or_path.endswith(".json") or "/" in name_or_path:
        return load_model(name_or_path, validate)
    return builtin(name_or_path)
