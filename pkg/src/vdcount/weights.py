"""Smooth compactly supported weights and their tracked derivative bounds.

A weight carries its evaluation rule plus membership data: a support radius
R and a table kappa[j] bounding every order-j partial derivative, tracked up
to J_MAX.  The closure operations (translate, restrict, multiply, compose)
update the metadata with explicit Leibniz / chain-rule constants so that
membership survives each construction.

The reference bump is

    W(t) = prod_i w(t_i / 2),   w(t) = exp(-1 / (1 - t^2)) for |t| < 1,

smooth, supported in [-2, 2]^n.  Its one-dimensional derivative maxima are
sampled once from symbolic derivatives on a dense grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

J_MAX = 4  # highest tracked derivative order
_GRID_STEP = 1e-3


@lru_cache(maxsize=None)
def _bump_1d_bounds():
    """max |d^j/dt^j  w(t/2)| for j = 0..J_MAX, by dense sampling.

    Sampling uses symbolic derivatives (sympy) evaluated on a step-1e-3 grid
    over the open support (-2, 2).
    """
    import sympy as sp

    t = sp.Symbol("t")
    v = sp.exp(-1 / (1 - (t / 2) ** 2))
    import numpy as np

    xs = np.arange(-2 + _GRID_STEP, 2, _GRID_STEP)
    bounds = []
    expr = v
    for j in range(J_MAX + 1):
        fn = sp.lambdify(t, expr, "numpy")
        vals = np.abs(fn(xs))
        bounds.append(float(np.max(vals)))
        expr = sp.diff(expr, t)
    return tuple(bounds)


def bump_1d(t):
    """w(t/2): the one-dimensional factor of the reference weight."""
    u = t / 2.0
    if abs(u) >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - u * u))


@dataclass(frozen=True)
class SmoothWeight:
    """A weight function together with its class-membership metadata."""

    n: int
    radius: float
    kappa: tuple  # kappa[j] >= sup |order-j partials|, j = 0..J_MAX
    func: callable
    kind: str = "custom"
    shift: tuple | None = None  # provenance: translation applied, if any

    def __call__(self, t):
        if len(t) != self.n:
            raise ValueError("argument length mismatch")
        return self.func(t)

    def kappa_at(self, j):
        return self.kappa[j]


def paper_bump(n):
    """The reference product bump in n variables (radius 2)."""
    b1 = _bump_1d_bounds()
    kappa = tuple(
        max(
            math.prod(b1[j_i] for j_i in comp)
            for comp in _compositions(j, n)
        )
        for j in range(J_MAX + 1)
    )

    def func(t):
        out = 1.0
        for ti in t:
            w = bump_1d(ti)
            if w == 0.0:
                return 0.0
            out *= w
        return out

    return SmoothWeight(n=n, radius=2.0, kappa=kappa, func=func, kind="product-bump")


def _compositions(j, n):
    """All ways to write j as an ordered sum of n non-negative integers."""
    if n == 1:
        return [(j,)]
    out = []
    for first in range(j + 1):
        for rest in _compositions(j - first, n - 1):
            out.append((first,) + rest)
    return out


def indicator_box(n, radius=1.0):
    """0/1 table weight: the indicator of [-radius, radius]^n.

    Not smooth; it exists as the testing hook that turns weighted counts
    back into plain congruence counts.  The kappa table only records the
    sup-norm.
    """

    def func(t):
        return 1.0 if all(abs(ti) <= radius for ti in t) else 0.0

    kappa = (1.0,) + (math.inf,) * J_MAX
    return SmoothWeight(n=n, radius=radius, kappa=kappa, func=func, kind="indicator-table")


# ---------------------------------------------------------------------------
# Closure operations (each updates the tracked class data)
# ---------------------------------------------------------------------------


def translate(W, u):
    """t -> W(t + u).  Radius grows by |u|; derivative bounds are unchanged."""
    if len(u) != W.n:
        raise ValueError("shift length mismatch")
    u = tuple(float(x) for x in u)

    def func(t, _W=W.func, _u=u):
        return _W(tuple(ti + ui for ti, ui in zip(t, _u)))

    return SmoothWeight(
        n=W.n,
        radius=W.radius + max((abs(x) for x in u), default=0.0),
        kappa=W.kappa,
        func=func,
        kind=W.kind + "+shift",
        shift=u,
    )


def restrict(W, x):
    """Pin the last coordinate: (t_1,...,t_{n-1}) -> W(t, x)."""
    if W.n < 2:
        raise ValueError("cannot restrict a 1-variable weight")

    def func(t, _W=W.func, _x=float(x)):
        return _W(tuple(t) + (_x,))

    return SmoothWeight(
        n=W.n - 1, radius=W.radius, kappa=W.kappa, func=func, kind=W.kind + "|pin"
    )


def multiply(W1, W2):
    """Pointwise product; Leibniz gives the new derivative bounds."""
    if W1.n != W2.n:
        raise ValueError("dimension mismatch")
    kappa = tuple(
        sum(
            math.comb(j, a) * W1.kappa[a] * W2.kappa[j - a]
            for a in range(j + 1)
        )
        for j in range(J_MAX + 1)
    )

    def func(t, _a=W1.func, _b=W2.func):
        va = _a(t)
        if va == 0.0:
            return 0.0
        return va * _b(t)

    return SmoothWeight(
        n=W1.n,
        radius=min(W1.radius, W2.radius),
        kappa=kappa,
        func=func,
        kind=f"({W1.kind})*({W2.kind})",
    )


def compose_unimodular(W, M):
    """t -> W(M t) for an integer unimodular M, with chain-rule bounds."""
    if M.n != W.n:
        raise ValueError("dimension mismatch")
    n = W.n
    Minv = M.inverse()
    op_in = n * Minv.entry_bound()  # |M^{-1} x|_inf <= op_in * |x|_inf
    op = n * M.entry_bound()
    kappa = tuple(W.kappa[j] * op**j for j in range(J_MAX + 1))

    def func(t, _W=W.func, _M=M):
        arg = tuple(
            sum(m * ti for m, ti in zip(row, t)) for row in _M.rows
        )
        return _W(arg)

    return SmoothWeight(
        n=n, radius=W.radius * op_in, kappa=kappa, func=func, kind=W.kind + "@M"
    )


def pair_weight(W, scaled_shift):
    """W_u(t) = W(t) * W(t + u): the weight produced by one differencing step."""
    return multiply(W, translate(W, scaled_shift))


# ---------------------------------------------------------------------------
# Numeric membership spot-checks
# ---------------------------------------------------------------------------


def check_membership(W, j_max=2, grid=9, slack=1.05, h=1e-4):
    """Spot-check |partials| <= slack * kappa[j] on a sample grid.

    Central finite differences of order j along single axes and mixed pairs;
    returns the list of violations (empty = consistent).  A coarse check by
    design: it guards against metadata drift, not a proof.
    """
    violations = []
    if W.radius == math.inf:
        return violations
    span = [(-W.radius + 1e-6, W.radius - 1e-6)] * W.n
    axes = [
        tuple(lo + (hi - lo) * i / (grid - 1) for i in range(grid))
        for lo, hi in span
    ]
    pts = list(product(*axes))

    def partial(t, dirs):
        # dirs: tuple of axis indices, one per differentiation
        if not dirs:
            return W(t)
        ax, rest = dirs[0], dirs[1:]
        tp = list(t)
        tm = list(t)
        tp[ax] += h
        tm[ax] -= h
        return (partial(tuple(tp), rest) - partial(tuple(tm), rest)) / (2 * h)

    for j in range(j_max + 1):
        if math.isinf(W.kappa[j]):
            continue
        combos = {(ax,) * j for ax in range(W.n)}
        if j == 2 and W.n >= 2:
            combos.add((0, 1))
        for dirs in combos:
            worst = max(abs(partial(t, dirs)) for t in pts)
            if worst > slack * W.kappa[j] + 1e-9:
                violations.append((dirs, worst, W.kappa[j]))
    return violations
