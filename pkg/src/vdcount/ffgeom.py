"""Finite-field geometry: enumeration, profiles, degeneracy loci.

Everything here is exact.  Dimensions come from the Groebner staircase
(`groebner.ideal_dimension`); an independent point/slicing oracle
(`dimension_bruteforce`) cross-checks it on small inputs.  Projective points
are normalized so the first nonzero coordinate is 1.

Conventions: a "profile" of a system at p records the codimension of the
projective zero scheme of its leading forms and the dimension of the
singular locus cut out by the Jacobian criterion (forms plus all maximal
minors).  Dimension -1 means empty; a smooth complete intersection has
singular dimension -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .errors import HypothesisError, ResourceBudgetError
from .groebner import DEFAULT_STEP_BUDGET, ideal_dimension
from .poly import NEG_INF, Polynomial, PolySystem

DEFAULT_POINT_BUDGET = 10**8


# ---------------------------------------------------------------------------
# Projective points over F_p
# ---------------------------------------------------------------------------


def projective_points(n, p):
    """All points of P^{n-1}(F_p), normalized (first nonzero coordinate 1)."""
    pts = []
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    return pts


def normalize_point(coords, p):
    coords = tuple(c % p for c in coords)
    for c in coords:
        if c:
            inv = pow(c, p - 2, p)
            return tuple((x * inv) % p for x in coords)
    raise ValueError("the zero vector is not a projective point")


def reduce_mod(system, p):
    """System with coefficients reduced into [0, p); zero members retained."""
    return system.reduce_mod(p)


def enumerate_projective_zeros(system, p):
    """Projective F_p-zeros of a homogeneous system, by direct enumeration."""
    for f in system.polys:
        if not f.is_homogeneous():
            raise ValueError("projective enumeration needs homogeneous members")
    return {
        x
        for x in projective_points(system.n, p)
        if all(f.evaluate(x) % p == 0 for f in system.polys)
    }


def jacobian_rank_at(system, x, p):
    """Rank over F_p of the Jacobian of the members at the point x."""
    rows = [[df.evaluate(x) % p for df in f.gradient()] for f in system.polys]
    return _rank_mod(rows, p)


def _rank_mod(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                c = rows[i][col]
                rows[i] = [(a - c * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# Singular-locus ideals and variety profiles
# ---------------------------------------------------------------------------


def jacobian_minors(forms, size):
    """All size x size minors of the Jacobian matrix of the given forms."""
    if not forms:
        return []
    n = forms[0].n
    grads = [f.gradient() for f in forms]
    minors = []
    for rows in combinations(range(len(forms)), size):
        for cols in combinations(range(n), size):
            minors.append(_poly_det([[grads[i][j] for j in cols] for i in rows]))
    return minors


def _poly_det(mat):
    k = len(mat)
    if k == 1:
        return mat[0][0]
    n = mat[0][0].n
    out = Polynomial.zero(n)
    for j in range(k):
        sub = [[mat[i][c] for c in range(k) if c != j] for i in range(1, k)]
        term = mat[0][j] * _poly_det(sub)
        out = out + term if j % 2 == 0 else out - term
    return out


def singular_ideal(forms, p):
    """Generators of the Jacobian-criterion singular ideal of the forms mod p.

    The defining forms together with all r x r minors of the Jacobian, r the
    number of forms.  With r > n there are no minors and every point of the
    zero scheme counts as singular, which is the correct degenerate reading.
    """
    forms = [f.reduce_mod(p) for f in forms]
    gens = list(forms)
    r = len(forms)
    if forms and r <= forms[0].n:
        gens += [m.reduce_mod(p) for m in jacobian_minors(forms, r)]
    return [g for g in gens if not g.is_zero()]


@dataclass(frozen=True)
class VarietyProfile:
    """Codimension / singular-dimension record of a system at one prime."""

    p: int
    codim: int
    sing_dim: int
    proj_count: int | None = None
    sing_count: int | None = None

    @property
    def smooth_complete_intersection(self):
        return self.sing_dim == -1

    def certifies(self, r):
        """True when this profile certifies rho = r and smoothness.

        Since codim can only drop and the singular dimension only grow under
        reduction, one certifying prime pins the rational-level profile too.
        """
        return self.codim == r and self.sing_dim == -1


def variety_profile(system, p, with_counts=True, step_budget=DEFAULT_STEP_BUDGET):
    """Profile of the leading-form scheme of ``system`` at p.

    codim = (n - 1) - dim V(F_1, ..., F_r); sing_dim = dim of the singular
    ideal scheme.  Raises HypothesisError when every leading form vanishes
    mod p (degenerate reduction: the profile would describe the wrong
    scheme).
    """
    n = system.n
    if system.r == 0:
        return VarietyProfile(p, 0, -1, _proj_space_size(n, p) if with_counts else None, 0)
    r = system.r
    forms = [
        f.leading_form().reduce_mod(p) for f in system.polys if not f.is_zero()
    ]
    live = [f for f in forms if not f.is_zero()]
    if not live:
        raise HypothesisError(f"every leading form vanishes mod {p}")
    dim = ideal_dimension(live, p, n, step_budget=step_budget)
    codim = (n - 1) - dim
    if len(live) < r:
        # a vanished member kills all maximal minors: the scheme is nowhere a
        # smooth complete intersection of full codimension
        sing = live
    else:
        sing = singular_ideal(live, p)
    sing_dim = ideal_dimension(sing, p, n, step_budget=step_budget)
    proj_count = None
    sing_count = None
    if with_counts:
        sys_live = PolySystem(n, live, strict=False, modulus=p)
        zeros = enumerate_projective_zeros(sys_live, p)
        proj_count = len(zeros)
        sing_count = sum(1 for x in zeros if jacobian_rank_at(sys_live, x, p) < r)
    return VarietyProfile(p, codim, sing_dim, proj_count, sing_count)


def _proj_space_size(n, p):
    return (p**n - 1) // (p - 1)


def certify_profile(system, primes, r=None, step_budget=DEFAULT_STEP_BUDGET):
    """First prime in ``primes`` whose profile certifies codim r and smoothness.

    Returns (prime, profile) or None.  One such prime also certifies the
    characteristic-zero profile, since codimension only drops and singular
    dimension only grows under reduction.
    """
    r = system.r if r is None else r
    for p in primes:
        try:
            prof = variety_profile(system, p, with_counts=False, step_budget=step_budget)
        except HypothesisError:
            continue
        if prof.certifies(r):
            return p, prof
    return None


# ---------------------------------------------------------------------------
# Extension fields F_{p^k} and the brute-force dimension oracle
# ---------------------------------------------------------------------------


class ExtField:
    """F_{p^k} as polynomials mod an irreducible, elements = coeff tuples."""

    def __init__(self, p, k):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = self._find_irreducible()
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def _find_irreducible(self):
        p, k = self.p, self.k
        if k == 1:
            return (0, 1)
        # monic x^k + c_{k-1} x^{k-1} + ... + c_0, brute-forced; fine for k <= 4
        for tail in product(range(p), repeat=k):
            coeffs = tail + (1,)
            if self._is_irreducible(coeffs):
                return coeffs
        raise RuntimeError("no irreducible polynomial found (impossible)")

    def _is_irreducible(self, coeffs):
        p = self.p
        deg = len(coeffs) - 1
        if any(self._poly_eval(coeffs, a) % p == 0 for a in range(p)):
            return False
        if deg <= 3:
            return True  # no roots suffices up to degree 3
        for d in range(2, deg // 2 + 1):
            for tail in product(range(p), repeat=d):
                if self._poly_divides(tail + (1,), coeffs):
                    return False
        return True

    @staticmethod
    def _poly_eval(coeffs, a):
        v = 0
        for c in reversed(coeffs):
            v = v * a + c
        return v

    def _poly_divides(self, d, f):
        p = self.p
        f = list(f)
        dd = len(d) - 1
        inv = pow(d[-1], p - 2, p)
        while len(f) - 1 >= dd and any(f):
            if f[-1] == 0:
                f.pop()
                continue
            c = (f[-1] * inv) % p
            off = len(f) - 1 - dd
            for i, dc in enumerate(d):
                f[off + i] = (f[off + i] - c * dc) % p
            f.pop()
        return not any(f)

    # -- element arithmetic ---------------------------------------------------

    def elements(self):
        return [tuple(c) for c in product(range(self.p), repeat=self.k)]

    def from_int(self, a):
        return (a % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus
        m = self.modulus
        for i in range(len(prod) - 1, k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(k):
                    prod[i - k + j] = (prod[i - k + j] - c * m[j]) % p
        return tuple(prod[:k])

    def scale(self, c, a):
        return tuple((c * x) % self.p for x in a)

    def pow(self, a, e):
        out = self.one
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def poly_eval(self, f, x):
        """Evaluate an integer polynomial at a tuple of field elements."""
        total = self.zero
        for mono, coeff in f.terms.items():
            v = self.from_int(coeff)
            for xi, e in zip(x, mono):
                if e:
                    v = self.mul(v, self.pow(xi, e))
            total = self.add(total, v)
        return total

    def projective_points(self, n):
        pts = []
        for lead in range(n):
            for tail in product(self.elements(), repeat=n - lead - 1):
                pts.append((self.zero,) * lead + (self.one,) + tail)
        return pts


def count_points_extension(system, p, k):
    """#Z(F_{p^k}) for the (homogeneous) leading-form scheme."""
    F = ExtField(p, k)
    forms = [f.leading_form() for f in system.polys if not f.is_zero()]
    count = 0
    for x in F.projective_points(system.n):
        if all(F.poly_eval(f, x) == F.zero for f in forms):
            count += 1
    return count


def _rational_subspaces(n, p, codim):
    """Codim-``codim`` linear subspaces of P^{n-1} rational over F_p.

    Returned as row-reduced coefficient matrices (tuples of rows); each is a
    distinct subspace, enumerated canonically via RREF shapes.
    """
    if codim == 0:
        return [()]
    out = []
    for pivots in combinations(range(n), codim):
        free_positions = []
        for row_idx, piv in enumerate(pivots):
            cols = [
                c
                for c in range(piv + 1, n)
                if c not in pivots
            ]
            free_positions.append(cols)
        flat = [(i, c) for i, cols in enumerate(free_positions) for c in cols]
        for values in product(range(p), repeat=len(flat)):
            rows = [[0] * n for _ in range(codim)]
            for row_idx, piv in enumerate(pivots):
                rows[row_idx][piv] = 1
            for (row_idx, col), v in zip(flat, values):
                rows[row_idx][col] = v
            out.append(tuple(tuple(r) for r in rows))
    return out


def _nullspace_basis(rows, n, p):
    """Basis of the solution space of rows . x = 0 over F_p."""
    mat = [list(r) for r in rows]
    m = len(mat)
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if mat[i][col] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [(v * inv) % p for v in mat[rank]]
        for i in range(m):
            if i != rank and mat[i][col] % p:
                c = mat[i][col]
                mat[i] = [(a - c * b) % p for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        vec = [0] * n
        vec[fc] = 1
        for row_idx, pc in enumerate(pivots):
            vec[pc] = (-mat[row_idx][fc]) % p
        basis.append(tuple(vec))
    return basis


def dimension_bruteforce(system, p, kmax=2, point_budget=DEFAULT_POINT_BUDGET):
    """Dimension oracle independent of the Groebner engine.

    Counts points of the leading-form scheme over F_{p^k} for k <= kmax and
    declares dim >= j when every F_p-rational codim-j subspace meets the
    scheme over some tested extension.  This is a lower-bound oracle in
    general (an intersection living in too large an extension is invisible);
    on the small corpora used here, with kmax = 2, it is exact.
    """
    for f in system.polys:
        if not f.is_zero() and not f.leading_form().is_homogeneous():
            raise ValueError("brute-force dimension needs homogeneous input")
    n = system.n
    cost = sum((p**k) ** (n - 1) for k in range(1, kmax + 1))
    if cost > point_budget:
        raise ResourceBudgetError(
            f"extension enumeration would touch ~{cost} points (budget {point_budget})"
        )
    forms = [f.leading_form() for f in system.polys if not f.is_zero()]
    fields = [ExtField(p, k) for k in range(1, kmax + 1)]
    zero_sets = []
    for F in fields:
        zs = set()
        for x in F.projective_points(n):
            if all(F.poly_eval(f, x) == F.zero for f in forms):
                zs.add(x)
        zero_sets.append(zs)
    if not any(zero_sets):
        return -1
    dim = 0
    for j in range(1, n):
        subspaces = _rational_subspaces(n, p, j)
        if not _all_subspaces_meet(subspaces, fields, zero_sets, n, p):
            break
        dim = j
    return dim


def _all_subspaces_meet(subspaces, fields, zero_sets, n, p):
    for rows in subspaces:
        basis = _nullspace_basis(rows, n, p)
        if not basis:
            return False
        met = False
        for F, zs in zip(fields, zero_sets):
            if not zs:
                continue
            # points of the subspace over F, normalized, checked against Z
            for coeffs in F.projective_points(len(basis)):
                x = [F.zero] * n
                for c, bvec in zip(coeffs, basis):
                    for idx, b in enumerate(bvec):
                        if b:
                            x[idx] = F.add(x[idx], F.scale(b, c))
                pt = _normalize_ext(x, F)
                if pt in zs:
                    met = True
                    break
            if met:
                break
        if not met:
            return False
    return True


def _normalize_ext(x, F):
    for c in x:
        if c != F.zero:
            inv = F.inv(c)
            return tuple(F.mul(inv, xi) for xi in x)
    raise ValueError("zero vector")


# ---------------------------------------------------------------------------
# Degenerate-direction loci (hyperplane sections of the differenced forms)
# ---------------------------------------------------------------------------


@dataclass
class DirectionReport:
    """Per-direction degeneracy dimensions and their occupancy table."""

    p: int
    per_y: dict = field(default_factory=dict)
    occupancy: dict = field(default_factory=dict)

    def occupancy_at(self, s):
        return self.occupancy.get(s, 0)


def build_T_sets(system, p, step_budget=DEFAULT_STEP_BUDGET):
    """For each direction y in P^{n-1}(F_p), the dimension of the locus where
    the y-differenced leading forms all vanish and their Jacobian drops rank.

    Hypotheses checked: the members are homogeneous of degrees d with
    p coprime to d(d-1), and the system is a smooth complete intersection
    mod p.  The occupancy table counts directions with locus dimension >= s.
    """
    n = system.n
    forms = []
    for f in system.polys:
        if f.is_zero():
            raise HypothesisError("zero member")
        F = f.leading_form().reduce_mod(p)
        if F.is_zero():
            raise HypothesisError(f"a leading form vanishes mod {p}")
        forms.append(F)
        d = f.degree()
        if (d * (d - 1)) % p == 0:
            raise HypothesisError(
                f"p={p} divides d(d-1) for a member of degree {d}"
            )
    prof = variety_profile(system, p, with_counts=False, step_budget=step_budget)
    if not prof.certifies(system.r):
        raise HypothesisError(
            f"input is not a smooth complete intersection mod {p} "
            f"(codim={prof.codim}, sing_dim={prof.sing_dim})"
        )
    r = len(forms)
    per_y = {}
    for y in projective_points(n, p):
        directional = []
        for F in forms:
            h = Polynomial.zero(n)
            for i, yi in enumerate(y):
                if yi:
                    h = h + yi * F.derivative(i)
            directional.append(h.reduce_mod(p))
        gens = [h for h in directional if not h.is_zero()]
        if len(gens) == r:
            gens = gens + [
                m.reduce_mod(p) for m in jacobian_minors(directional, r)
            ]
        # a vanished directional form already forces rank < r everywhere
        gens = [g for g in gens if not g.is_zero()]
        per_y[y] = ideal_dimension(gens, p, n, step_budget=step_budget)
    occupancy = {}
    for s in range(-1, n):
        occupancy[s] = sum(1 for v in per_y.values() if v >= s)
    return DirectionReport(p=p, per_y=per_y, occupancy=occupancy)


# ---------------------------------------------------------------------------
# Affine counts mod p and the square-root residual
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HooleyResidual:
    p: int
    count: int
    main_term: int
    residual: int
    certified: bool


def affine_count_mod(system, p, point_budget=DEFAULT_POINT_BUDGET):
    """#{u in (Z/p)^n : f_i(u) = 0 mod p for all i}, exactly (vectorized)."""
    n = system.n
    if p**n > point_budget:
        raise ResourceBudgetError(f"p^n = {p**n} exceeds budget {point_budget}")
    grids = np.indices((p,) * n, dtype=np.int64).reshape(n, -1)
    ok = np.ones(grids.shape[1], dtype=bool)
    for f in system.polys:
        vals = np.zeros(grids.shape[1], dtype=np.int64)
        for mono, coeff in f.terms.items():
            term = np.full(grids.shape[1], coeff % p, dtype=np.int64)
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = (term * grids[i]) % p
            vals = (vals + term) % p
        ok &= vals == 0
    return int(ok.sum())


def hooley_residual(system, p, point_budget=DEFAULT_POINT_BUDGET):
    """Affine solution count mod p minus the main term p^{n-r}.

    For a smooth complete intersection (certified profile) the residual obeys
    the square-root bound; when the profile hypothesis fails the residual is
    still returned, flagged uncertified.
    """
    n, r = system.n, system.r
    count = affine_count_mod(system, p, point_budget=point_budget)
    main = p ** (n - r)
    try:
        prof = variety_profile(system, p, with_counts=False)
        certified = prof.certifies(r)
    except HypothesisError:
        certified = False
    return HooleyResidual(p=p, count=count, main_term=main, residual=count - main, certified=certified)
