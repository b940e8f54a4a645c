"""Counting functions: box counts, congruence counts, weighted counts.

Unweighted counts are exact integers from direct box enumeration with early
rejection (a member whose variables are all assigned already can prune the
subtree).  Congruence counting rejects points by modulus on the same single
code path; no CRT lifting.

Weighted sums are double precision.  Every lattice sum is accumulated with
math.fsum (exactly rounded), partitioned on the first coordinate and merged
in index order, so results are bit-stable run to run.  The relative
tolerance used by weighted assertions across the package is 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ResourceBudgetError
from .poly import NEG_INF

DEFAULT_ENUM_CAP = 10**9
WEIGHTED_RTOL = 1e-9


@dataclass(frozen=True)
class CountResult:
    value: object  # int for exact counts, float for weighted ones
    points_visited: int
    mode: str


def _member_moduli(system, q):
    """Resolve a modulus spec into one modulus per member.

    ``q`` may be a single integer (applied to every member), a mapping
    degree -> modulus (the per-degree-group vector), or a sequence with one
    entry per member in the system order.
    """
    degs = system.degrees()
    if isinstance(q, int):
        moduli = [q] * system.r
    elif isinstance(q, dict):
        try:
            moduli = [q[d] for d in degs]
        except KeyError as e:
            raise ValueError(f"no modulus assigned to degree {e.args[0]}") from None
    else:
        moduli = [int(v) for v in q]
        if len(moduli) != system.r:
            raise ValueError("need one modulus per member")
    if any(m == 0 for m in moduli):
        raise ValueError("zero modulus")
    return [abs(m) for m in moduli]


def _box_enumerate(system, B, moduli, enum_cap):
    """Shared enumeration core: counts x in [-B, B]^n with every member
    divisible by its modulus (modulus 0 disallowed; modulus None = exact
    equality to zero)."""
    n = system.n
    side = 2 * B + 1
    if side**n > enum_cap:
        raise ResourceBudgetError(
            f"box has {side**n} points, enumeration cap is {enum_cap}"
        )
    # members become testable once all their variables are assigned
    level_of = []
    for f in system.polys:
        sup = f.support()
        level_of.append(max(sup) if sup else -1)
    by_level = {}
    for idx, lv in enumerate(level_of):
        by_level.setdefault(lv, []).append(idx)
    visited = 0
    count = 0
    x = [0] * n

    def ok(idx):
        v = system.polys[idx].evaluate(tuple(x))
        if moduli is None:
            return v == 0
        return v % moduli[idx] == 0

    def rec(depth):
        nonlocal count, visited
        if depth == n:
            count += 1
            return
        for v in range(-B, B + 1):
            x[depth] = v
            visited += 1
            if all(ok(i) for i in by_level.get(depth, [])):
                rec(depth + 1)
        x[depth] = 0

    # constants (members using no variable at all) are checked up front
    if all(ok(i) for i in by_level.get(-1, [])):
        rec(0)
    return count, visited


def count_points(system, B, enum_cap=DEFAULT_ENUM_CAP):
    """N(f, B): integer solutions of the full system in the box [-B, B]^n."""
    if B < 1:
        raise ValueError("height bound must be >= 1")
    count, visited = _box_enumerate(system, B, None, enum_cap)
    return CountResult(value=count, points_visited=visited, mode="exhaustive")


def count_congruence(system, B, q, enum_cap=DEFAULT_ENUM_CAP):
    """N(f, B, q): box points with each member divisible by its modulus."""
    if B < 1:
        raise ValueError("height bound must be >= 1")
    moduli = _member_moduli(system, q)
    count, visited = _box_enumerate(system, B, moduli, enum_cap)
    return CountResult(value=count, points_visited=visited, mode="modular-reject")


# ---------------------------------------------------------------------------
# Weighted counting
# ---------------------------------------------------------------------------


def weight_eval(W, t):
    """Value of the weight at a real point (plain convenience wrapper)."""
    return W(tuple(float(v) for v in t))


def support_radius_lattice(W, B):
    """Largest |x_i| that can matter in sums of W(x / B)."""
    return int(math.floor(W.radius * B))


def weight_mass(W, B):
    """Sum of W(x / B) over the integer lattice (finite: compact support).

    Partitioned on the first coordinate; each partition is fsum-accumulated
    and the partials are merged in index order.
    """
    if B < 1:
        raise ValueError("height bound must be >= 1")
    M = support_radius_lattice(W, B)
    if W.n == 0:
        return W(())
    partials = []
    for x0 in range(-M, M + 1):
        vals = []
        for rest in product(range(-M, M + 1), repeat=W.n - 1):
            v = W((x0 / B,) + tuple(r / B for r in rest))
            if v:
                vals.append(v)
        partials.append(math.fsum(vals))
    return math.fsum(partials)


def weighted_count(system, B, q, W, enum_cap=DEFAULT_ENUM_CAP):
    """N_W(f, B, q): weighted congruence count over the whole lattice.

    Vectorized over the support box; exact modular arithmetic on int64 grids
    (moduli and reduced values stay far below the overflow line at the box
    sizes the budget admits).
    """
    if B < 1:
        raise ValueError("height bound must be >= 1")
    if W.n != system.n:
        raise ValueError("weight dimension mismatch")
    moduli = _member_moduli(system, q) if system.r else []
    n = system.n
    M = support_radius_lattice(W, B)
    side = 2 * M + 1
    if side**n > enum_cap:
        raise ResourceBudgetError(
            f"support box has {side**n} points, enumeration cap is {enum_cap}"
        )
    coords = np.arange(-M, M + 1, dtype=np.int64)
    axes = np.meshgrid(*([coords] * n), indexing="ij")
    ok = np.ones(axes[0].shape, dtype=bool)
    for f, m in zip(system.polys, moduli):
        ok &= _eval_mod_grid(f, axes, m) == 0
    # weight values as an outer product when the weight factorizes; general
    # weights fall back to per-point evaluation on the accepted set only
    idx = np.argwhere(ok)
    vals = []
    for point in idx:
        x = tuple(int(c) - M for c in point)
        v = W(tuple(xi / B for xi in x))
        if v:
            vals.append((tuple(x), v))
    vals.sort(key=lambda t: t[0])
    total = math.fsum(v for _, v in vals)
    return CountResult(value=total, points_visited=side**n, mode="modular-reject")


def _eval_mod_grid(f, axes, m):
    """Values of f mod m on a meshgrid, exactly (int64-safe by reduction)."""
    shape = axes[0].shape
    acc = np.zeros(shape, dtype=np.int64)
    for mono, coeff in f.terms.items():
        term = np.full(shape, coeff % m, dtype=np.int64)
        for i, e in enumerate(mono):
            if e:
                base = axes[i] % m
                for _ in range(e):
                    term = (term * base) % m
        acc = (acc + term) % m
    return acc


# ---------------------------------------------------------------------------
# The double-sum residual behind Poisson summation
# ---------------------------------------------------------------------------


def poisson_residual(W, B, a, N=2, enum_cap=DEFAULT_ENUM_CAP):
    """Residual of the lattice double sum against its expected main term.

    Computes  sum_x W(x/B) sum_y W((x + a y)/B)  -  a^{-n} * mass(W, B)^2.

    The double sum is accumulated by grouping the pairs (x, x + a y) on
    their common residue class mod a: the left side equals the sum of the
    squared per-class masses.  At a = 1 there is a single class, so the
    residual is exactly zero in floating point as well.

    Returns (residual, envelope) where envelope is the order-N reference
    kappa_0 kappa_N B^{2n-N} a^{-n+N} + kappa_N^2 B^{2(n-N)} a^{-n+N}.
    """
    if not 1 <= a <= B:
        raise ValueError("need 1 <= a <= B")
    n = W.n
    M = support_radius_lattice(W, B)
    if (2 * M + 1) ** n > enum_cap:
        raise ResourceBudgetError("support box exceeds enumeration cap")
    class_values = {}
    for x in product(range(-M, M + 1), repeat=n):
        v = W(tuple(xi / B for xi in x))
        if v:
            class_values.setdefault(tuple(xi % a for xi in x), []).append(v)
    class_masses = [math.fsum(vs) for _, vs in sorted(class_values.items())]
    lhs = math.fsum(s * s for s in class_masses)
    mass = math.fsum(class_masses)
    residual = lhs - a ** (-n) * mass**2
    kN = W.kappa_at(min(N, len(W.kappa) - 1))
    envelope = (
        W.kappa_at(0) * kN * B ** (2 * n - N) * a ** (N - n)
        + kN**2 * B ** (2 * (n - N)) * a ** (N - n)
    )
    return residual, envelope
