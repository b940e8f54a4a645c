"""Buchberger's algorithm over F_p and staircase dimension.

This is the exact dimension oracle behind every variety-profile computation
in the package.  Instances are tiny (n <= 6, degrees <= 5), so the plain
algorithm with the normal pair-selection strategy and the coprimality
criterion is entirely adequate.  Work is metered in reduction steps against
a hard budget: running out raises, it never silently approximates.

Polynomials here are bare dicts {exponent tuple: coefficient in [1, p)}.
Monomial order is grevlex throughout, matching the canonical printing order
of the rest of the package.
"""

from __future__ import annotations

from .errors import ResourceBudgetError
from .poly import Polynomial, grevlex_key

DEFAULT_STEP_BUDGET = 10**6


def _to_dict(f, p):
    if isinstance(f, Polynomial):
        return {m: c % p for m, c in f.terms.items() if c % p}
    return {tuple(m): c % p for m, c in f.items() if c % p}


def _leading(f):
    return max(f, key=grevlex_key)


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a, b):
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class _Budget:
    __slots__ = ("left",)

    def __init__(self, steps):
        self.left = steps

    def spend(self, k=1):
        self.left -= k
        if self.left < 0:
            raise ResourceBudgetError(
                "Groebner reduction budget exceeded; raise step_budget if the "
                "instance really is this large"
            )


def _reduce(f, basis, p, budget):
    """Normal form of f modulo basis (full tail reduction)."""
    f = dict(f)
    out = {}
    while f:
        budget.spend()
        lm = _leading(f)
        lc = f[lm]
        for g in basis:
            q = _mono_div(lm, g["lm"])
            if q is not None:
                scale = (lc * g["lc_inv"]) % p
                for m, c in g["poly"].items():
                    mm = _mono_mul(m, q)
                    v = (f.get(mm, 0) - scale * c) % p
                    if v:
                        f[mm] = v
                    else:
                        f.pop(mm, None)
                break
        else:
            out[lm] = lc
            del f[lm]
    return out


def _wrap(poly, p):
    lm = _leading(poly)
    return {"poly": poly, "lm": lm, "lc_inv": pow(poly[lm], p - 2, p)}


def _spoly(g1, g2, p):
    lcm = _mono_lcm(g1["lm"], g2["lm"])
    s = {}
    for g, sign in ((g1, 1), (g2, -1)):
        q = _mono_div(lcm, g["lm"])
        scale = (sign * g["lc_inv"]) % p
        for m, c in g["poly"].items():
            mm = _mono_mul(m, q)
            v = (s.get(mm, 0) + scale * c) % p
            if v:
                s[mm] = v
            else:
                s.pop(mm, None)
    return s


def groebner_basis(generators, p, step_budget=DEFAULT_STEP_BUDGET):
    """Reduced grevlex Groebner basis of the ideal generated mod p.

    Accepts Polynomial instances or raw term dicts.  Returns a list of monic
    term dicts sorted by leading monomial (a canonical form: the reduced
    basis is unique for a fixed order).
    """
    budget = _Budget(step_budget)
    basis = []
    for f in generators:
        d = _to_dict(f, p)
        if d:
            basis.append(_wrap(d, p))
    if not basis:
        return []

    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    while pairs:
        # normal strategy: smallest lcm in the monomial order first
        i, j = min(
            pairs, key=lambda ij: grevlex_key(_mono_lcm(basis[ij[0]]["lm"], basis[ij[1]]["lm"]))
        )
        pairs.remove((i, j))
        gi, gj = basis[i], basis[j]
        lcm = _mono_lcm(gi["lm"], gj["lm"])
        if lcm == _mono_mul(gi["lm"], gj["lm"]):
            continue  # coprime leading monomials: s-poly reduces to zero
        budget.spend()
        rem = _reduce(_spoly(gi, gj, p), basis, p, budget)
        if rem:
            basis.append(_wrap(rem, p))
            k = len(basis) - 1
            pairs.update((k, t) for t in range(k))

    # minimal basis: in a graded order a proper divisor sorts strictly lower,
    # so a single ascending pass removes every redundant leading monomial
    basis.sort(key=lambda g: grevlex_key(g["lm"]))
    minimal = []
    for g in basis:
        if any(_mono_div(g["lm"], h["lm"]) is not None for h in minimal):
            continue
        minimal.append(g)
    reduced = []
    for g in minimal:
        others = [o for o in minimal if o is not g]
        poly = _reduce_tail(g, others, p, budget)
        lc_inv = pow(poly[_leading(poly)], p - 2, p)
        poly = {m: (c * lc_inv) % p for m, c in poly.items()}
        reduced.append(poly)
    reduced.sort(key=lambda f: grevlex_key(_leading(f)))
    return reduced


def _reduce_tail(g, others, p, budget):
    """Reduce the tail of g by the other basis elements (keep its lm)."""
    poly = dict(g["poly"])
    changed = True
    while changed:
        changed = False
        for m in sorted(poly, key=grevlex_key, reverse=True):
            if m == g["lm"] or m not in poly:
                continue
            for o in others:
                q = _mono_div(m, o["lm"])
                if q is not None:
                    budget.spend()
                    scale = (poly[m] * o["lc_inv"]) % p
                    for mm, cc in o["poly"].items():
                        key = _mono_mul(mm, q)
                        v = (poly.get(key, 0) - scale * cc) % p
                        if v:
                            poly[key] = v
                        else:
                            poly.pop(key, None)
                    changed = True
                    break
            if changed:
                break
    return poly


def staircase(basis):
    """Leading monomials of a (reduced) Groebner basis."""
    return [_leading(f) for f in basis]


def dimension_from_staircase(lms, n):
    """Projective dimension from the leading-term staircase.

    The affine (cone) dimension is the largest cardinality of a variable
    subset S such that no leading monomial is supported inside S; projective
    dimension is one less, with the empty projective scheme reported as -1.
    """
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    if any(not s for s in supports):  # a unit lies in the ideal
        return -1
    best = 0
    for mask in range(1, 1 << n):
        subset = {i for i in range(n) if mask >> i & 1}
        if len(subset) <= best:
            continue
        if all(not s <= subset for s in supports):
            best = len(subset)
    return max(best - 1, -1)


def ideal_dimension(generators, p, n, step_budget=DEFAULT_STEP_BUDGET):
    """Projective dimension of V(generators) in P^{n-1} over F_p.

    Expects homogeneous generators; dim(empty scheme) = -1, dim of the zero
    ideal is n - 1.
    """
    gens = [_to_dict(f, p) for f in generators]
    gens = [g for g in gens if g]
    if not gens:
        return n - 1
    basis = groebner_basis(gens, p, step_budget=step_budget)
    return dimension_from_staircase(staircase(basis), n)
