"""Sparse multivariate polynomials over the integers, exactly.

A monomial is an exponent tuple (one entry per variable); a polynomial maps
monomials to nonzero integer coefficients.  All arithmetic is arbitrary
precision: heights and shifted coefficients grow like B^d and every oracle in
this package compares values for exact equality, so no floating point enters
here.

The canonical ordering used for printing and for the Groebner engine is
graded reverse lexicographic (grevlex).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product

NEG_INF = float("-inf")  # degree of the zero polynomial


def grevlex_key(mono):
    """Sort key realizing grevlex: bigger key = bigger monomial."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def total_degree(mono):
    return sum(mono)


class Polynomial:
    """Immutable-by-convention sparse polynomial in ``n`` variables."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        if n < 0:
            raise ValueError("variable count must be non-negative")
        self.n = n
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise ValueError(f"monomial {mono} has length {len(mono)}, expected {n}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in monomial {mono}")
            coeff = int(coeff)
            if coeff:
                clean[mono] = clean.get(mono, 0) + coeff
        self.terms = {m: c for m, c in clean.items() if c}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def constant(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n, i, power=1):
        """The monomial x_{i+1}^power (0-based index i)."""
        mono = [0] * n
        mono[i] = power
        return cls(n, {tuple(mono): 1})

    @classmethod
    def from_terms(cls, n, pairs):
        """Build from an iterable of (coefficient, exponent-tuple) pairs."""
        acc = {}
        for coeff, mono in pairs:
            mono = tuple(mono)
            acc[mono] = acc.get(mono, 0) + coeff
        return cls(n, acc)

    # -- basic queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(total_degree(m) for m in self.terms)

    def is_homogeneous(self):
        if not self.terms:
            return True
        degs = {total_degree(m) for m in self.terms}
        return len(degs) == 1

    def height(self):
        return max((abs(c) for c in self.terms.values()), default=0)

    def support(self):
        """Indices of variables that actually occur."""
        used = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(i)
        return used

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    __hash__ = None

    def __neg__(self):
        return Polynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.n, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.n, other)
        return NotImplemented

    # -- the operations the rest of the package is built on -----------------

    def evaluate(self, x):
        """Exact value at the integer point x."""
        if len(x) != self.n:
            raise ValueError(f"point has length {len(x)}, expected {self.n}")
        total = 0
        for mono, coeff in self.terms.items():
            v = coeff
            for xi, e in zip(x, mono):
                if e:
                    v *= xi**e
            total += v
        return total

    def leading_form(self):
        """Homogeneous part of top degree.  Rejects the zero polynomial."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading form")
        d = self.degree()
        return Polynomial(
            self.n, {m: c for m, c in self.terms.items() if total_degree(m) == d}
        )

    def derivative(self, i):
        """Partial derivative with respect to variable i (0-based)."""
        out = {}
        for mono, coeff in self.terms.items():
            e = mono[i]
            if e:
                m = list(mono)
                m[i] = e - 1
                m = tuple(m)
                out[m] = out.get(m, 0) + coeff * e
        return Polynomial(self.n, out)

    def gradient(self):
        return [self.derivative(i) for i in range(self.n)]

    def shift(self, v):
        """f(x + v) for an integer vector v, expanded exactly."""
        if len(v) != self.n:
            raise ValueError("shift vector length mismatch")
        out = {}
        for mono, coeff in self.terms.items():
            # expand coeff * prod_i (x_i + v_i)^{e_i} one variable at a time
            partial = {(): coeff}
            for e, vi in zip(mono, v):
                nxt = {}
                for prefix, c in partial.items():
                    if e == 0:
                        nxt[prefix + (0,)] = nxt.get(prefix + (0,), 0) + c
                        continue
                    for k in range(e + 1):
                        w = c * math.comb(e, k) * vi ** (e - k)
                        if w:
                            key = prefix + (k,)
                            nxt[key] = nxt.get(key, 0) + w
                partial = nxt
            for m, c in partial.items():
                out[m] = out.get(m, 0) + c
        return Polynomial(self.n, out)

    def reduce_mod(self, p):
        """Coefficients reduced into [0, p); zero terms dropped."""
        if p <= 0:
            raise ValueError("modulus must be positive")
        return Polynomial(self.n, {m: c % p for m, c in self.terms.items()})

    def map_vars(self, images, n_new):
        """Substitute variable i by the polynomial images[i] (all in n_new vars)."""
        if len(images) != self.n:
            raise ValueError("need one image per variable")
        result = Polynomial.zero(n_new)
        cache = {}
        for mono, coeff in self.terms.items():
            term = Polynomial.constant(n_new, coeff)
            for i, e in enumerate(mono):
                if not e:
                    continue
                key = (i, e)
                if key not in cache:
                    cache[key] = images[i] ** e
                term = term * cache[key]
            result = result + term
        return result

    # -- canonical text ------------------------------------------------------

    def to_text(self):
        """Canonical form: grevlex-descending sum of c*x1^e1*... terms."""
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[mono]
            factors = [
                f"x{i + 1}^{e}" for i, e in enumerate(mono) if e
            ]
            if factors:
                parts.append(f"{c}*" + "*".join(factors))
            else:
                parts.append(str(c))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, n, text):
        """Inverse of to_text (used for fixture round-trips)."""
        text = text.strip()
        if text == "0":
            return cls.zero(n)
        acc = {}
        for chunk in text.split(" + "):
            factors = chunk.split("*")
            coeff = int(factors[0])
            mono = [0] * n
            for f in factors[1:]:
                m = re.fullmatch(r"x(\d+)\^(\d+)", f)
                if not m:
                    raise ValueError(f"bad factor {f!r}")
                mono[int(m.group(1)) - 1] = int(m.group(2))
            key = tuple(mono)
            acc[key] = acc.get(key, 0) + coeff
        return cls(n, acc)

    def __repr__(self):
        return f"Polynomial({self.n}, {self.to_text()!r})"


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------


class PolySystem:
    """An ordered tuple of polynomials, stored sorted by ascending degree.

    The stable degree sort fixes one index convention for degree groups,
    suffix groups and triangular pencil tables.  Members of degree <= 1 are
    rejected unless ``strict=False`` (reductions mod p and differenced
    systems may legitimately degenerate).
    """

    __slots__ = ("n", "polys", "modulus")

    def __init__(self, n, polys, strict=True, modulus=None):
        self.n = n
        polys = tuple(polys)
        for f in polys:
            if f.n != n:
                raise ValueError("member has wrong variable count")
        if strict:
            for f in polys:
                if f.degree() < 2:
                    raise ValueError(
                        f"member {f.to_text()!r} has degree < 2; "
                        "the congruence machinery needs every degree >= 2"
                    )
        self.polys = tuple(
            sorted(polys, key=lambda f: (f.degree() is NEG_INF, f.degree()))
        )
        self.modulus = modulus

    # -- shape ---------------------------------------------------------------

    @property
    def r(self):
        return len(self.polys)

    def degrees(self):
        return tuple(f.degree() for f in self.polys)

    @property
    def max_degree(self):
        degs = [d for d in self.degrees() if d is not NEG_INF]
        return max(degs) if degs else NEG_INF

    def degree_counts(self):
        """{d: number of members of degree d} for d >= 2."""
        counts = {}
        for d in self.degrees():
            counts[d] = counts.get(d, 0) + 1
        return counts

    def members_of_degree(self, d):
        return tuple(f for f in self.polys if f.degree() == d)

    def zero_members(self):
        """Indices of identically-zero members (possible after reduction)."""
        return tuple(i for i, f in enumerate(self.polys) if f.is_zero())

    def height(self):
        return max((f.height() for f in self.polys), default=0)

    def leading_forms(self, strict=True):
        return PolySystem(
            self.n,
            [f.leading_form() for f in self.polys],
            strict=strict,
            modulus=self.modulus,
        )

    def suffix(self, i):
        """Members of degree >= i + 2 (the i-th suffix group)."""
        if i < 0:
            raise ValueError("suffix level must be >= 0")
        return PolySystem(
            self.n,
            [f for f in self.polys if f.degree() >= i + 2],
            strict=False,
            modulus=self.modulus,
        )

    def tail(self, j):
        """The last j members in the ascending-degree order."""
        if not 0 <= j <= self.r:
            raise ValueError("tail length out of range")
        return PolySystem(
            self.n, self.polys[self.r - j :], strict=False, modulus=self.modulus
        )

    # -- transformations ------------------------------------------------------

    def reduce_mod(self, p):
        """Member-wise reduction; zero members retained (see zero_members)."""
        return PolySystem(
            self.n, [f.reduce_mod(p) for f in self.polys], strict=False, modulus=p
        )

    def evaluate(self, x):
        return tuple(f.evaluate(x) for f in self.polys)

    def canonical_text(self):
        return "; ".join(f.to_text() for f in self.polys)

    def __eq__(self, other):
        return (
            isinstance(other, PolySystem)
            and self.n == other.n
            and self.polys == other.polys
            and self.modulus == other.modulus
        )

    __hash__ = None

    def __repr__(self):
        return f"PolySystem(n={self.n}, [{self.canonical_text()}])"


def group_by_degree(system):
    """Return (degree_groups, suffix_groups).

    degree_groups maps each degree d in [2, D] to the tuple of members of
    that degree; suffix_groups[i] holds the members of degree >= i + 2 for
    0 <= i <= D - 2.
    """
    degs = system.degrees()
    if any(d is NEG_INF or d < 2 for d in degs):
        raise ValueError("grouping requires every member degree >= 2")
    D = system.max_degree
    degree_groups = {d: system.members_of_degree(d) for d in range(2, D + 1)}
    suffix_groups = [system.suffix(i) for i in range(D - 1)]
    return degree_groups, suffix_groups


# ---------------------------------------------------------------------------
# Differencing and affine substitution
# ---------------------------------------------------------------------------


def difference(f, y, p):
    """f(x + p*y) - f(x), expanded exactly.

    For y != 0 and deg f = d >= 1 the result has degree d - 1 with leading
    form p * (y . grad F), F the leading form of f, unless that directional
    form vanishes identically (in which case the degree drops further).
    """
    if len(y) != f.n:
        raise ValueError("direction vector length mismatch")
    if p < 1:
        raise ValueError("shift multiplier must be >= 1")
    v = tuple(p * yi for yi in y)
    return f.shift(v) - f


def directional_form(f, y, p):
    """p * (y . grad F) for F = leading_form(f); the expected leading form."""
    F = f.leading_form()
    out = Polynomial.zero(f.n)
    for i, yi in enumerate(y):
        if yi:
            out = out + yi * F.derivative(i)
    return p * out


@dataclass(frozen=True)
class UnimodularMap:
    """An n x n integer matrix with determinant +-1."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        if abs(det_int(rows)) != 1:
            raise ValueError("matrix is not unimodular")

    @property
    def n(self):
        return len(self.rows)

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def entry_bound(self):
        return max(abs(v) for row in self.rows for v in row)

    def apply(self, vec):
        """Matrix-vector product M v."""
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        return tuple(sum(m * v for m, v in zip(row, vec)) for row in self.rows)

    def transpose(self):
        return UnimodularMap(tuple(zip(*self.rows)))

    def inverse(self):
        """Exact inverse (again integral, since det = +-1)."""
        n = self.n
        d = det_int(self.rows)
        cof = [
            [
                ((-1) ** (i + j))
                * det_int(
                    [
                        [self.rows[a][b] for b in range(n) if b != j]
                        for a in range(n)
                        if a != i
                    ]
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        inv = tuple(tuple(d * cof[j][i] for j in range(n)) for i in range(n))
        return UnimodularMap(inv)


def det_int(rows):
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def complete_to_unimodular(a):
    """Unimodular M with M^T a = e_n, for a primitive integer vector a.

    Built from elementary row operations (integer Euclid), so entries stay
    small for small inputs.
    """
    n = len(a)
    if n == 0:
        raise ValueError("empty vector")
    if math.gcd(*a) != 1:
        raise ValueError("vector must be primitive")
    w = list(a)
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # V a = w holds

    def rowop(i, j, q):
        # w_i -= q w_j, and the same on V
        w[i] -= q * w[j]
        for k in range(n):
            v[i][k] -= q * v[j][k]

    while True:
        nz = [i for i in range(n) if w[i]]
        if len(nz) == 1:
            break
        piv = min(nz, key=lambda i: abs(w[i]))
        for i in nz:
            if i != piv:
                # floor division leaves 0 <= remainder < |w[piv]|
                rowop(i, piv, w[i] // w[piv])
    i = next(i for i in range(n) if w[i])
    if w[i] < 0:
        w[i] = -w[i]
        v[i] = [-x for x in v[i]]
    if w[i] != 1:
        raise ValueError("vector must be primitive")
    if i != n - 1:
        w[i], w[n - 1] = w[n - 1], w[i]
        v[i], v[n - 1] = v[n - 1], v[i]
    V = UnimodularMap(tuple(tuple(row) for row in v))
    return V.transpose()


def substitute_affine(f, M, b):
    """f(M (x_1,...,x_{n-1}, b)) as a polynomial in n-1 variables.

    When M^T a = e_n, restricting to the hyperplane a.x = b in the original
    coordinates is exactly pinning the last new coordinate to b.
    """
    n = f.n
    if M.n != n:
        raise ValueError("matrix size mismatch")
    images = []
    for row in M.rows:
        img = Polynomial.constant(n - 1, row[-1] * b)
        for k in range(n - 1):
            if row[k]:
                img = img + row[k] * Polynomial.variable(n - 1, k)
        images.append(img)
    return f.map_vars(images, n - 1)


# ---------------------------------------------------------------------------
# Pencils (unit-triangular changes of generators)
# ---------------------------------------------------------------------------


def pencil_combine(system, table):
    """Apply a unit-triangular pencil to the members of a system.

    ``table`` maps (i, j) -> integer for equal-degree mixing (j < i,
    deg f_j = deg f_i) and (i, j, k) -> integer for lower-degree mixing
    (j < i, deg f_j < deg f_i), where the new member i picks up
    lambda * x_{k+1}^{deg_i - deg_j} * f_j.  Indices are 0-based positions
    in the ascending-degree order.  The diagonal is implicitly 1; an
    explicit (i, i) entry must equal 1.

    The result has the same multidegree and generates the same ideal.
    """
    polys = list(system.polys)
    degs = [f.degree() for f in polys]
    r = len(polys)
    adds = [[] for _ in range(r)]
    for key, lam in table.items():
        lam = int(lam)
        if len(key) == 2:
            i, j = key
            if i == j:
                if lam != 1:
                    raise ValueError("diagonal entries must equal 1")
                continue
            if not (0 <= j < i < r):
                raise ValueError(f"entry {key} is not lower-triangular")
            if degs[i] != degs[j]:
                raise ValueError(f"entry {key} mixes unequal degrees without a monomial")
            if lam:
                adds[i].append(lam * polys[j])
        elif len(key) == 3:
            i, j, k = key
            if not (0 <= j < i < r):
                raise ValueError(f"entry {key} is not lower-triangular")
            if degs[i] <= degs[j]:
                raise ValueError(f"entry {key} needs deg f_i > deg f_j")
            if not 0 <= k < system.n:
                raise ValueError(f"entry {key} names variable {k} out of range")
            if lam:
                mono = Polynomial.variable(system.n, k, degs[i] - degs[j])
                adds[i].append(lam * (mono * polys[j]))
        else:
            raise ValueError(f"bad table key {key}")
    out = []
    for i, f in enumerate(polys):
        g = f
        for extra in adds[i]:
            g = g + extra
        if g.degree() != degs[i]:
            raise ValueError("pencil destroyed a leading form; table is invalid")
        out.append(g)
    return PolySystem(system.n, out, strict=False, modulus=system.modulus)


def pencil_invert(system_g, table):
    """Recover the original members from a pencil output by forward substitution."""
    polys = list(system_g.polys)
    degs = [f.degree() for f in polys]
    r = len(polys)
    originals = [None] * r
    for i in range(r):
        g = polys[i]
        for key, lam in table.items():
            if len(key) == 2 and key[0] == i and key[0] != key[1] and lam:
                g = g - lam * originals[key[1]]
            elif len(key) == 3 and key[0] == i and lam:
                _, j, k = key
                mono = Polynomial.variable(system_g.n, k, degs[i] - degs[j])
                g = g - lam * (mono * originals[j])
        originals[i] = g
    return PolySystem(system_g.n, originals, strict=False, modulus=system_g.modulus)
