"""Completely monotone functions assembled from certified building blocks.

An expression is a tree of leaves (``exp(-a x)``, ``(a + c x)^-alpha``,
``ln(a + c/x)``) joined by the closure rules that preserve complete
monotonicity: exponentiation, nonnegative linear combination, products,
and composition with a nonnegative function whose derivative is completely
monotone (a Bernstein function). ``build`` refuses anything it cannot
certify and names the rule that was broken.

Expressions serialize to JSON as ``{"node": ..., "params": {...},
"children": [...]}``; see ``README.md`` for the node vocabulary.
"""

import json
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DomainError, NumericError

LEAVES = ("leaf-exp", "leaf-power", "leaf-log")
COMBINATORS = (
    "combinator-exp",
    "combinator-expm1",
    "combinator-linear",
    "combinator-product",
    "combinator-compose",
)
BERNSTEIN = ("bernstein-power", "bernstein-log1p", "bernstein-affine")

# the five catalog forms, keyed by id, with their admissible parameter ranges
CATALOG_FORMS = {
    "exp-power": "exp(-a (x + c)^alpha); a, c >= 0, 0 <= alpha <= 1",
    "expm1-power": "exp(a (x + c)^alpha) - 1; a, c > 0, alpha < 0",
    "inverse-power": "(x + c)^-alpha; c > 0, alpha > 1",
    "power-exp": "x^-nu exp(-a x^alpha); a >= 0, 0 <= alpha <= 1, 0 <= nu < 1",
    "exp-log-power": "exp(-a ln(x + c)^alpha); a >= 0, c >= 1, 0 <= alpha <= 1",
}


class CmRuleError(DomainError):
    """A description violates a parameter constraint or closure-rule precondition."""

    def __init__(self, rule, message):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule


@dataclass(frozen=True)
class CmExpr:
    """Node of a completely monotone expression tree (or of a Bernstein inner function)."""

    node: str
    params: dict = field(default_factory=dict)
    children: tuple = ()
    certified: bool = False

    def evaluate(self, x):
        """Vectorized evaluation without finiteness checks."""
        return _EVAL[self.node](self, np.asarray(x, dtype=float))

    def to_dict(self):
        out = {"node": self.node, "params": dict(self.params)}
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    def __call__(self, x):
        return eval_expr(self, x)


def _p(expr, name):
    return expr.params[name]


def _eval_linear(e, x):
    left, right = e.children
    return _p(e, "a") * left.evaluate(x) + _p(e, "c") * right.evaluate(x)


_EVAL = {
    "leaf-exp": lambda e, x: np.exp(-_p(e, "a") * x),
    "leaf-power": lambda e, x: (_p(e, "a") + _p(e, "c") * x) ** -_p(e, "alpha"),
    "leaf-log": lambda e, x: np.log(_p(e, "a") + _p(e, "c") / x),
    "combinator-exp": lambda e, x: np.exp(e.children[0].evaluate(x)),
    "combinator-expm1": lambda e, x: np.expm1(e.children[0].evaluate(x)),
    "combinator-linear": _eval_linear,
    "combinator-product": lambda e, x: e.children[0].evaluate(x) * e.children[1].evaluate(x),
    "combinator-compose": lambda e, x: e.children[0].evaluate(e.children[1].evaluate(x)),
    "bernstein-power": lambda e, x: _inner(e, x) ** _p(e, "alpha"),
    "bernstein-log1p": lambda e, x: np.log1p(_inner(e, x)),
    "bernstein-affine": lambda e, x: _p(e, "a") + _p(e, "c") * _inner(e, x),
}


def _inner(e, x):
    return e.children[0].evaluate(x) if e.children else x


# -- construction -------------------------------------------------------------

_PARAMS = {
    "leaf-exp": ("a",),
    "leaf-power": ("a", "c", "alpha"),
    "leaf-log": ("a", "c"),
    "combinator-exp": (),
    "combinator-expm1": (),
    "combinator-linear": ("a", "c"),
    "combinator-product": (),
    "combinator-compose": (),
    "bernstein-power": ("alpha",),
    "bernstein-log1p": (),
    "bernstein-affine": ("a", "c"),
}

_ARITY = {
    "leaf-exp": (0, 0),
    "leaf-power": (0, 0),
    "leaf-log": (0, 0),
    "combinator-exp": (1, 1),
    "combinator-expm1": (1, 1),
    "combinator-linear": (2, 2),
    "combinator-product": (2, 2),
    "combinator-compose": (2, 2),
    "bernstein-power": (0, 1),
    "bernstein-log1p": (0, 1),
    "bernstein-affine": (0, 1),
}


def _params(desc, node):
    raw = desc.get("params", {}) or {}
    unknown = set(raw) - set(_PARAMS[node])
    if unknown:
        raise CmRuleError("schema", f"{node}: unexpected parameters {sorted(unknown)}")
    out = {}
    for name in _PARAMS[node]:
        if name not in raw:
            raise CmRuleError("schema", f"{node}: missing parameter {name!r}")
        value = raw[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise CmRuleError("schema", f"{node}: parameter {name} must be a finite number, got {value!r}")
        out[name] = float(value)
    return out


def _check_leaf(node, p):
    if node == "leaf-exp" and p["a"] < 0:
        raise CmRuleError("leaf-exp", f"exp(-a x) needs a >= 0, got a={p['a']}")
    if node == "leaf-power":
        if min(p["a"], p["c"], p["alpha"]) < 0:
            raise CmRuleError("leaf-power", f"(a + c x)^-alpha needs a, c, alpha >= 0, got {p}")
        if p["a"] == 0 and p["c"] == 0:
            raise CmRuleError("leaf-power", "(a + c x)^-alpha with a = c = 0 is undefined")
    if node == "leaf-log" and not (p["a"] >= 1 and p["c"] > 0):
        raise CmRuleError("leaf-log", f"ln(a + c/x) needs a >= 1 and c > 0, got {p}")
    if node == "combinator-linear" and min(p["a"], p["c"]) < 0:
        raise CmRuleError("linear", f"linear combination needs a, c >= 0, got {p}")
    if node == "bernstein-power" and not 0 <= p["alpha"] <= 1:
        raise CmRuleError("bernstein", f"x^alpha has a c.m. derivative only for 0 <= alpha <= 1, got {p['alpha']}")
    if node == "bernstein-affine" and min(p["a"], p["c"]) < 0:
        raise CmRuleError("bernstein", f"affine a + c x must have a, c >= 0, got {p}")


def build(desc):
    """Validate a description (dict or JSON text) and return a certified expression."""
    if isinstance(desc, CmExpr):
        desc = desc.to_dict()
    if isinstance(desc, (str, bytes)):
        desc = json.loads(desc)
    return _build(desc, role="cm")


def _build(desc, role):
    if not isinstance(desc, dict) or "node" not in desc:
        raise CmRuleError("schema", f"expected an object with a 'node' key, got {desc!r}")
    node = desc["node"]
    if node not in _PARAMS:
        raise CmRuleError("schema", f"unknown node {node!r}")
    if role == "cm" and node in BERNSTEIN:
        raise CmRuleError("compose", f"{node} is an inner function, not a c.m. function; use it under combinator-compose")
    if role == "bernstein" and node not in BERNSTEIN:
        raise CmRuleError(
            "bernstein", f"composition needs a nonnegative inner function with c.m. derivative; {node} is not one"
        )
    params = _params(desc, node)
    _check_leaf(node, params)
    raw_children = desc.get("children", []) or []
    lo, hi = _ARITY[node]
    if not lo <= len(raw_children) <= hi:
        raise CmRuleError("schema", f"{node} takes {lo}..{hi} children, got {len(raw_children)}")
    if node == "combinator-compose":
        children = (_build(raw_children[0], "cm"), _build(raw_children[1], "bernstein"))
    elif node in BERNSTEIN:
        children = tuple(_build(c, "bernstein") for c in raw_children)
    else:
        children = tuple(_build(c, "cm") for c in raw_children)
    return CmExpr(node, params, children, certified=True)


def leaf_exp(a):
    return build({"node": "leaf-exp", "params": {"a": a}})


def leaf_power(a, c, alpha):
    return build({"node": "leaf-power", "params": {"a": a, "c": c, "alpha": alpha}})


def leaf_log(a, c):
    return build({"node": "leaf-log", "params": {"a": a, "c": c}})


def exp_of(child):
    return build({"node": "combinator-exp", "children": [child.to_dict()]})


def expm1_of(child):
    return build({"node": "combinator-expm1", "children": [child.to_dict()]})


def linear(a, left, c, right):
    return build({"node": "combinator-linear", "params": {"a": a, "c": c}, "children": [left.to_dict(), right.to_dict()]})


def product(left, right):
    return build({"node": "combinator-product", "children": [left.to_dict(), right.to_dict()]})


def compose(outer, inner):
    """``outer(inner(x))``; ``inner`` is a Bernstein description or expression."""
    inner = inner.to_dict() if isinstance(inner, CmExpr) else inner
    return build({"node": "combinator-compose", "children": [outer.to_dict(), inner]})


def bernstein_power(alpha, inner=None):
    return _bern("bernstein-power", {"alpha": alpha}, inner)


def bernstein_log1p(inner=None):
    return _bern("bernstein-log1p", {}, inner)


def bernstein_affine(a, c, inner=None):
    return _bern("bernstein-affine", {"a": a, "c": c}, inner)


def _bern(node, params, inner):
    desc = {"node": node, "params": params}
    if inner is not None:
        desc["children"] = [inner]
    return desc


# -- evaluation and checks ------------------------------------------------------


def eval_expr(expr, x):
    """Evaluate at ``x > 0``; raises ``NumericError`` on overflow or non-finite output."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"c.m. functions are evaluated at x > 0, got {x!r}")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        val = expr.evaluate(arr)
    if not np.all(np.isfinite(val)):
        bad = np.atleast_1d(arr)[~np.isfinite(np.atleast_1d(val))][0]
        raise NumericError(f"{expr.node} is not finite at x={bad!r}", abscissa=float(bad))
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class CmVerdict:
    passed: bool
    order: int | None = None
    x: float | None = None
    value: float | None = None

    def __bool__(self):
        return self.passed

    def __str__(self):
        if self.passed:
            return "pass"
        return f"fail(n={self.order}, x={self.x:.6g})"


def numeric_cm_check(f, n_max=6, grid=None, tol=1e-6):
    """Check ``(-1)^n f^(n)(x) >= -tol (|f(x)| + 1)`` for ``n <= n_max`` on ``grid``.

    Derivatives come from forward differences ``Delta_h^n f / h^n`` with
    ``h = x / (2 n)``. A forward difference is a B-spline average of
    ``f^(n)`` over ``[x, x + n h]``, so its sign is exact for a completely
    monotone ``f`` at any step; only round-off can mislead it, and the
    bound ``4 eps sum |C(n,k) f_k| / h^n`` is added to the tolerance.
    """
    if not 0 <= n_max <= 8:
        raise DomainError(f"n_max must lie in [0, 8], got {n_max}")
    if grid is None:
        grid = np.logspace(-2, 2, 50)
    eps = np.finfo(float).eps
    for n in range(n_max + 1):
        for x in np.asarray(grid, dtype=float):
            if not x > 0:
                raise DomainError(f"grid points must be positive, got {x}")
            f0 = _finite(f, x)
            scale = abs(f0) + 1.0
            if n == 0:
                est, noise = f0, 0.0
            else:
                h = x / (2 * n)
                coeffs = [(-1) ** (n - k) * comb(n, k) for k in range(n + 1)]
                vals = [_finite(f, x + k * h) for k in range(n + 1)]
                est = math.fsum(c * v for c, v in zip(coeffs, vals)) / h**n
                noise = 4 * eps * math.fsum(abs(c * v) for c, v in zip(coeffs, vals)) / h**n
            signed = (-1) ** n * est
            if signed < -(tol * scale + noise):
                return CmVerdict(False, n, float(x), float(signed))
    return CmVerdict(True)


def _finite(f, x):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        v = float(f(x))
    if not math.isfinite(v):
        raise NumericError(f"function is not finite at x={x!r}", abscissa=float(x))
    return v


def normalize(expr):
    """Turn an integrable c.m. expression into a normalized density."""
    from .distributions import CompletelyMonotone

    if not isinstance(expr, CmExpr):
        expr = build(expr)
    return CompletelyMonotone(expr)


# -- the catalog of c.m. densities ----------------------------------------------


def catalog_expr(form, **params):
    """Closure-rule expression for one of the catalog forms (unnormalized)."""
    if form not in CATALOG_FORMS:
        raise DomainError(f"unknown c.m. form {form!r}; choose from {sorted(CATALOG_FORMS)}")
    p = {k: float(v) for k, v in params.items()}

    def need(*names):
        missing = [n for n in names if n not in p]
        extra = set(p) - set(names)
        if missing or extra:
            raise DomainError(f"{form} takes parameters {names}, got {sorted(p)}")
        return [p[n] for n in names]

    def reject(msg):
        raise CmRuleError(f"catalog:{form}", f"{msg} ({CATALOG_FORMS[form]})")

    if form == "exp-power":
        a, c, alpha = need("a", "c", "alpha")
        if a < 0 or c < 0 or not 0 <= alpha <= 1:
            reject(f"a={a}, c={c}, alpha={alpha}")
        return compose(leaf_exp(a), bernstein_power(alpha, bernstein_affine(c, 1.0)))
    if form == "expm1-power":
        a, c, alpha = need("a", "c", "alpha")
        if a <= 0 or c <= 0 or not alpha < 0:
            reject(f"a={a}, c={c}, alpha={alpha}")
        # a (x + c)^alpha == (k c + k x)^alpha with k = a^(1/alpha)
        k = a ** (1.0 / alpha)
        return expm1_of(leaf_power(k * c, k, -alpha))
    if form == "inverse-power":
        c, alpha = need("c", "alpha")
        if c <= 0 or not alpha > 1:
            reject(f"c={c}, alpha={alpha}")
        return leaf_power(c, 1.0, alpha)
    if form == "power-exp":
        a, alpha, nu = need("a", "alpha", "nu")
        if a < 0 or not 0 <= alpha <= 1 or not 0 <= nu < 1:
            reject(f"a={a}, alpha={alpha}, nu={nu}")
        return product(leaf_power(0.0, 1.0, nu), compose(leaf_exp(a), bernstein_power(alpha)))
    a, c, alpha = need("a", "c", "alpha")
    if a < 0 or c < 1 or not 0 <= alpha <= 1:
        reject(f"a={a}, c={c}, alpha={alpha}")
    # ln(x + c) = ln c + ln(1 + x / c)
    log_shift = bernstein_affine(math.log(c), 1.0, bernstein_log1p(bernstein_affine(0.0, 1.0 / c)))
    return compose(leaf_exp(a), bernstein_power(alpha, log_shift))


def cm_catalog(form, **params):
    """Normalized density of a catalog form."""
    from .distributions import CompletelyMonotone

    return CompletelyMonotone(catalog_expr(form, **params), form=form, form_params=params)
