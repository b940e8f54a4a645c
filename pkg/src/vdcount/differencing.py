"""The differencing apparatus: prime selection, modulus plans, system
regularization, hyperplane slicing, differenced ensembles, and the variance
decomposition of the congruence-count experiment.

The objects here follow one index convention throughout: system members are
kept in ascending-degree order, the prime tuple is (p_0, p_1, ..., p_m) with
p_m the differencing prime, and suffix level i means "members of degree at
least i + 2" (the members that survive at least i differencing steps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
import sympy

from .counting import DEFAULT_ENUM_CAP, weight_mass, weighted_count
from .errors import HypothesisError, PrimeSearchError, ResourceBudgetError
from .exponents import savings_exponents
from .ffgeom import certify_profile, variety_profile, singular_ideal
from .groebner import DEFAULT_STEP_BUDGET, ideal_dimension
from .poly import (
    NEG_INF,
    Polynomial,
    PolySystem,
    complete_to_unimodular,
    difference,
    pencil_combine,
    substitute_affine,
)
from .weights import pair_weight

XI_FLOOR = 8.0  # explicit constant behind the "xi large against log height" gate
SLICE_RECIPROCAL_THRESHOLD = 0.5  # largest allowed sum of 1/p over the slice primes


# ---------------------------------------------------------------------------
# Prime tuples and modulus plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeTuple:
    """(p_0, ..., p_m): p_0 near xi^2, the others near xi, all good primes."""

    primes: tuple
    xi: float
    tol: float = 2.0
    max_degree: int = 2

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", primes)
        if not primes:
            raise ValueError("need at least p_0")
        if len(set(primes)) != len(primes):
            raise ValueError("primes must be pairwise distinct")
        fact = math.factorial(self.max_degree)
        for p in primes:
            if not sympy.isprime(p):
                raise ValueError(f"{p} is not prime")
            if math.gcd(p, fact) != 1:
                raise ValueError(f"{p} shares a factor with {self.max_degree}!")
        lo, hi = 1.0 / self.tol, self.tol
        if not lo <= primes[0] / self.xi**2 <= hi:
            raise ValueError(f"p_0={primes[0]} is not within tol of xi^2={self.xi ** 2}")
        for p in primes[1:]:
            if not lo <= p / self.xi <= hi:
                raise ValueError(f"{p} is not within tol of xi={self.xi}")

    @property
    def m(self):
        return len(self.primes) - 1

    @property
    def differencing_prime(self):
        return self.primes[-1]

    def ratios(self):
        return (self.primes[0] / self.xi**2,) + tuple(
            p / self.xi for p in self.primes[1:]
        )


@dataclass(frozen=True)
class ModulusPlan:
    """Per-degree moduli q_d = product of the last min(m, d-2) + 1 primes."""

    primes: PrimeTuple
    q_by_degree: dict
    member_moduli: tuple
    Q: int
    tilde_q_by_degree: dict
    Q_tilde: int


def modulus_plan(primes, system):
    """The modulus ladder for ``system`` at the given prime tuple.

    Degree-d members receive q_d = p_m p_{m-1} ... (min(m, d-2) + 1 factors),
    so each extra differencing step strips exactly one prime.  The tilde
    variants divide out p_m (they govern the degree >= 3 subsystem after one
    step); Q_tilde = p_m^{-r} Q always holds.
    """
    degs = system.degrees()
    if any(d is NEG_INF or d < 2 for d in degs):
        raise ValueError("every member must have degree >= 2")
    D = system.max_degree
    t = primes.primes
    m = primes.m
    q = {}
    for d in range(2, D + 1):
        k = min(m, d - 2)
        q[d] = math.prod(t[m - i] for i in range(k + 1))
    member_moduli = tuple(q[d] for d in degs)
    Q = math.prod(member_moduli)
    p_m = primes.differencing_prime
    tilde = {d: q[d] // p_m for d in range(3, D + 1)}
    counts = system.degree_counts()
    Q_tilde = math.prod(tilde[d] ** counts.get(d, 0) for d in tilde) if tilde else 1
    return ModulusPlan(
        primes=primes,
        q_by_degree=q,
        member_moduli=member_moduli,
        Q=Q,
        tilde_q_by_degree=tilde,
        Q_tilde=Q_tilde,
    )


# ---------------------------------------------------------------------------
# Prime selection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SelectedPrimes:
    primes: PrimeTuple
    xi_gate: float
    gate_margin: float
    window_small: tuple
    window_large: tuple
    rejected: dict


def _prime_qualifies(system, p, fact, step_budget):
    """(1.4) coprimality plus the full certifying profile at p."""
    if math.gcd(p, fact) != 1:
        return "coprimality"
    try:
        prof = variety_profile(system, p, with_counts=False, step_budget=step_budget)
    except HypothesisError:
        return "profile"
    if prof.codim != system.r:
        return "profile"
    D = system.max_degree
    for i in range(D - 1):
        sub = system.suffix(i)
        sprof = variety_profile(sub, p, with_counts=False, step_budget=step_budget)
        if sprof.sing_dim != -1:
            return "profile"
    return None


def select_primes(
    system,
    xi,
    m,
    tol=2.0,
    xi_floor=XI_FLOOR,
    enforce_gate=True,
    step_budget=DEFAULT_STEP_BUDGET,
):
    """Sieve [xi/tol, tol*xi] for p_1..p_m and [xi^2/tol, tol*xi^2] for p_0.

    A prime qualifies when it is coprime to D!, the system reduces to codim r
    at it, and every suffix group stays smooth.  The smallest qualifying
    primes win, so the result is deterministic.
    """
    if xi < 2:
        raise ValueError("xi must be >= 2")
    D = system.max_degree
    if not 0 <= m <= D - 2:
        raise ValueError(f"m={m} out of range for top degree {D}")
    gate = max(xi_floor, math.log(max(system.height(), 1)))
    if enforce_gate and xi < gate:
        raise HypothesisError(
            f"xi={xi} is below the selection gate {gate:.3f} "
            "(xi must dominate the log of the height)"
        )
    fact = math.factorial(D)
    rejected = {"coprimality": 0, "profile": 0, "distinct": 0}
    small_window = (math.ceil(xi / tol), math.floor(xi * tol))
    large_window = (math.ceil(xi**2 / tol), math.floor(xi**2 * tol))

    small = []
    for p in sympy.primerange(small_window[0], small_window[1] + 1):
        if len(small) == m:
            break
        reason = _prime_qualifies(system, p, fact, step_budget)
        if reason:
            rejected[reason] += 1
            continue
        small.append(p)
    if len(small) < m:
        raise PrimeSearchError(
            f"window {small_window} holds only {len(small)} qualifying primes, "
            f"need {m}",
            failures=rejected,
        )
    p0 = None
    for p in sympy.primerange(large_window[0], large_window[1] + 1):
        if p in small:
            rejected["distinct"] += 1
            continue
        reason = _prime_qualifies(system, p, fact, step_budget)
        if reason:
            rejected[reason] += 1
            continue
        p0 = p
        break
    if p0 is None:
        raise PrimeSearchError(
            f"window {large_window} has no qualifying prime", failures=rejected
        )
    tup = PrimeTuple(
        primes=(p0, *small), xi=float(xi), tol=float(tol), max_degree=D
    )
    return SelectedPrimes(
        primes=tup,
        xi_gate=gate,
        gate_margin=xi - gate,
        window_small=small_window,
        window_large=large_window,
        rejected=rejected,
    )


def good_primes_in(system, lo, hi, need=1, coprime_to=None, step_budget=DEFAULT_STEP_BUDGET):
    """The first ``need`` primes in [lo, hi] passing the certifying profile."""
    fact = coprime_to if coprime_to is not None else math.factorial(system.max_degree)
    out = []
    for p in sympy.primerange(math.ceil(lo), math.floor(hi) + 1):
        if _prime_qualifies(system, p, fact, step_budget) is None:
            out.append(p)
            if len(out) == need:
                break
    return out


# ---------------------------------------------------------------------------
# Regularization (nested smooth suffixes via a unit-triangular pencil)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularizedSystem:
    system: PolySystem
    table: dict
    witness_prime: int
    entry_bound: int
    height_before: int
    height_after: int


def _pencil_slots(system):
    degs = system.degrees()
    slots = []
    for i in range(1, system.r):
        for j in range(i):
            if degs[j] == degs[i]:
                slots.append((i, j))
            else:
                for k in range(system.n):
                    slots.append((i, j, k))
    return slots


def _values_up_to(cap):
    vals = [0]
    for v in range(1, cap + 1):
        vals.extend((v, -v))
    return vals


def _nested_witness(system, pool, step_budget):
    """A pool prime at which every tail is a smooth complete intersection."""
    for p in pool:
        ok = True
        for j in range(1, system.r + 1):
            try:
                prof = variety_profile(
                    system.tail(j), p, with_counts=False, step_budget=step_budget
                )
            except HypothesisError:
                ok = False
                break
            if not prof.certifies(j):
                ok = False
                break
        if ok:
            return p
    return None


def regularize(system, prime_pool, entry_cap=4, step_budget=DEFAULT_STEP_BUDGET):
    """Search unit-triangular pencils until every tail subsystem is smooth.

    Entries are tried in the order 0, 1, -1, 2, -2, ... with the maximum
    entry bound growing one step at a time, so the identity table is checked
    first and the first success is deterministic.  Height growth is recorded
    against the input height.
    """
    if certify_profile(system, prime_pool) is None:
        raise HypothesisError(
            "no pool prime certifies the full system as a smooth complete "
            "intersection; regularization needs that hypothesis"
        )
    slots = _pencil_slots(system)
    tried = set()
    for cap in range(entry_cap + 1):
        values = _values_up_to(cap)
        for combo in product(values, repeat=len(slots)):
            if combo and max(abs(v) for v in combo) != cap:
                continue  # already tried at a smaller bound
            if not combo and cap > 0:
                continue
            table = {s: v for s, v in zip(slots, combo) if v}
            candidate = pencil_combine(system, table)
            witness = _nested_witness(candidate, prime_pool, step_budget)
            if witness is not None:
                return RegularizedSystem(
                    system=candidate,
                    table=table,
                    witness_prime=witness,
                    entry_bound=cap,
                    height_before=system.height(),
                    height_after=candidate.height(),
                )
    raise ResourceBudgetError(
        f"no regularizing pencil with entries bounded by {entry_cap}"
    )


# ---------------------------------------------------------------------------
# Hyperplane slicing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceResult:
    a: tuple
    records: dict  # p -> {"before": profile, "after": profile}


def _slice_candidates(n, max_norm):
    """Primitive vectors of max-norm exactly ``max_norm``, canonical signs,
    ordered by L1 weight then lexicographically descending (so coordinate
    vectors come first)."""
    cands = []
    for a in product(range(-max_norm, max_norm + 1), repeat=n):
        if max(abs(v) for v in a) != max_norm:
            continue
        if math.gcd(*a) != 1:
            continue
        first = next(v for v in a if v)
        if first < 0:
            continue
        cands.append(a)
    cands.sort(key=lambda a: (sum(abs(v) for v in a), tuple(-v for v in a)))
    return cands


def find_slice(
    system,
    primes,
    max_norm_cap=6,
    threshold=SLICE_RECIPROCAL_THRESHOLD,
    step_budget=DEFAULT_STEP_BUDGET,
):
    """A primitive direction a whose hyperplane section behaves generically.

    At every prime in ``primes`` the section must drop the dimension by one
    and drop the singular dimension to max(-1, s - 1).  The candidate order
    is deterministic; the first success wins.  Requires codim r at every
    prime and a small sum of reciprocals.
    """
    n = system.n
    if not primes:
        e1 = (1,) + (0,) * (n - 1)
        return SliceResult(a=e1, records={})
    if sum(1.0 / p for p in primes) > threshold:
        raise HypothesisError(
            f"sum of reciprocals exceeds the slicing threshold {threshold}"
        )
    before = {}
    for p in primes:
        prof = variety_profile(system, p, with_counts=False, step_budget=step_budget)
        if prof.codim != system.r:
            raise HypothesisError(
                f"codimension at {p} is {prof.codim}, expected {system.r}"
            )
        before[p] = prof
    forms = [f.leading_form() for f in system.polys]
    for max_norm in range(1, max_norm_cap + 1):
        for a in _slice_candidates(n, max_norm):
            M = complete_to_unimodular(a)
            sliced = [substitute_affine(F, M, 0) for F in forms]
            if any(G.is_zero() for G in sliced):
                continue
            sliced_sys = PolySystem(n - 1, sliced, strict=False)
            ok = True
            records = {}
            for p in primes:
                try:
                    prof = variety_profile(
                        sliced_sys, p, with_counts=False, step_budget=step_budget
                    )
                except HypothesisError:
                    ok = False
                    break
                want_sing = max(-1, before[p].sing_dim - 1)
                if prof.codim != system.r or prof.sing_dim != want_sing:
                    ok = False
                    break
                records[p] = {"before": before[p], "after": prof}
            if ok:
                return SliceResult(a=a, records=records)
    raise ResourceBudgetError(f"no slicing direction with max-norm <= {max_norm_cap}")


# ---------------------------------------------------------------------------
# Differenced ensembles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightTransform:
    """Realizes the weight produced by one differencing step with shift p*y."""

    shift: tuple  # p_m * y, an integer vector

    def apply(self, W, B):
        return pair_weight(W, tuple(s / B for s in self.shift))


def difference_system(system, y, p_m):
    """One differencing step: drop the degree-2 group, difference the rest.

    Returns (differenced system, weight transform).  Members of degree d
    become degree d - 1 (lower if the direction is degenerate for them);
    y = 0 yields the zero system.
    """
    if len(y) != system.n:
        raise ValueError("direction length mismatch")
    diffs = [
        difference(f, y, p_m) for f in system.polys if f.degree() >= 3
    ]
    out = PolySystem(system.n, diffs, strict=False)
    return out, WeightTransform(shift=tuple(p_m * yi for yi in y))


def _forms_profile(forms, p, n, expected_count, step_budget):
    """(codim, sing_dim) of a list of forms mod p, tolerating vanished ones.

    A vanished (or missing) form makes every maximal minor vanish, so the
    singular locus fills the whole zero scheme.
    """
    reduced = [F.reduce_mod(p) for F in forms if not F.is_zero()]
    live = [F for F in reduced if not F.is_zero()]
    if not live:
        return 0, n - 1
    dim = ideal_dimension(live, p, n, step_budget=step_budget)
    codim = (n - 1) - dim
    if len(live) < expected_count:
        return codim, dim
    gens = singular_ideal(live, p)
    sing = ideal_dimension(gens, p, n, step_budget=step_budget)
    return codim, sing


@dataclass
class DirectionClassification:
    primes: PrimeTuple
    bound: int
    per_y: dict  # y -> (rho, s)
    class_counts: dict  # (rho, s) -> count

    def count_s_at_least(self, t):
        return sum(
            c for (_, s), c in self.class_counts.items() if s >= t
        )

    def count_rho(self, rho):
        return sum(c for (r0, _), c in self.class_counts.items() if r0 == rho)


def classify_directions(system, primes, bound, step_budget=DEFAULT_STEP_BUDGET):
    """Classify every direction |y| <= bound by the profiles of its
    differenced system at the non-differencing primes.

    rho(y) is the worst codimension of the differenced degree >= 3 ensemble
    over p_0..p_{m-1}; s(y) the worst singular dimension over the suffix
    levels, pairing prime p_i with the members of original degree
    >= max(3, i + 2).  y = 0 is recorded as fully degenerate.
    """
    if primes.m < 1:
        raise ValueError("classification needs at least one differencing step")
    p_m = primes.differencing_prime
    lower = primes.primes[:-1]
    n = system.n
    members = [(f.degree(), f) for f in system.polys if f.degree() >= 3]
    r_tilde = len(members)
    per_y = {}
    for y in product(range(-bound, bound + 1), repeat=n):
        if not any(y):
            per_y[y] = (0, n - 1)
            continue
        diffs = [(d, difference(f, y, p_m)) for d, f in members]
        forms = [
            (d, g.leading_form() if not g.is_zero() else Polynomial.zero(n))
            for d, g in diffs
        ]
        rho = r_tilde
        s = -1
        for i, p in enumerate(lower):
            all_forms = [F for _, F in forms]
            codim, _ = _forms_profile(all_forms, p, n, r_tilde, step_budget)
            rho = min(rho, codim)
            level = [F for d, F in forms if d >= max(3, i + 2)]
            if level:
                _, sing = _forms_profile(level, p, n, len(level), step_budget)
                s = max(s, sing)
        per_y[y] = (rho, s)
    counts = {}
    for v in per_y.values():
        counts[v] = counts.get(v, 0) + 1
    return DirectionClassification(
        primes=primes, bound=bound, per_y=per_y, class_counts=counts
    )


# ---------------------------------------------------------------------------
# Variance decomposition
# ---------------------------------------------------------------------------


@dataclass
class VarianceReport:
    plan: ModulusPlan
    B: int
    mass: float
    expected: float  # expected per-class weighted count
    upsilon: dict  # residue class u (mod p_m) -> weighted count, nonzero ones
    zero_classes: int  # classes u with every member divisible by p_m at u
    deviation_sum: float  # S: sum over zero classes of (upsilon - expected)
    variance: float  # Sigma: sum over all u of (upsilon - expected)^2
    cross_residual: float  # relative defect of the square-expansion identity
    empty: bool  # no zero classes at all

    def cauchy_consistent(self):
        return self.deviation_sum**2 <= self.zero_classes * self.variance + 1e-9


def variance_report(system, B, plan, W, enum_cap=DEFAULT_ENUM_CAP):
    """Per-class weighted counts and their variance, plus the exact-identity
    cross-check that ties the class decomposition to the differenced sums.

    Needs m >= 1 (with m = 0 there is nothing to difference).
    """
    if plan.primes.m < 1:
        raise HypothesisError("variance decomposition needs m >= 1")
    n = system.n
    p_m = plan.primes.differencing_prime
    high = [(f, plan.tilde_q_by_degree[f.degree()]) for f in system.polys if f.degree() >= 3]
    M = int(math.floor(W.radius * B))
    side = 2 * M + 1
    if side**n > enum_cap:
        raise ResourceBudgetError("support box exceeds enumeration cap")

    mass = weight_mass(W, B)
    Qt = plan.Q_tilde
    total_classes = p_m**n * Qt
    expected = mass / total_classes

    # one pass over the support box, binning by (u mod p_m, residues mod q~)
    bins = {}
    for x in product(range(-M, M + 1), repeat=n):
        w = W(tuple(xi / B for xi in x))
        if not w:
            continue
        u = tuple(xi % p_m for xi in x)
        res = tuple(f.evaluate(x) % qt for f, qt in high)
        bins.setdefault((u, res), []).append(w)
    X = {key: math.fsum(vs) for key, vs in sorted(bins.items())}

    zero_res = tuple(0 for _ in high)
    upsilon = {}
    for (u, res), v in X.items():
        if res == zero_res:
            upsilon[u] = v

    # classes u with p_m dividing every member value at u
    zero_classes = []
    for u in product(range(p_m), repeat=n):
        if all(f.evaluate(u) % p_m == 0 for f in system.polys):
            zero_classes.append(u)
    empty = not zero_classes

    deviation_sum = math.fsum(
        upsilon.get(u, 0.0) - expected for u in zero_classes
    )
    # variance over all p_m^n classes u at the zero residue tuple
    hit = [upsilon.get(u, 0.0) for u in sorted(upsilon)]
    variance = math.fsum((v - expected) ** 2 for v in hit) + (
        p_m**n - len(hit)
    ) * expected**2

    # direct value of the augmented square sum over all (u, res) classes
    direct = math.fsum((v - expected) ** 2 for v in X.values()) + (
        total_classes - len(X)
    ) * expected**2
    # assembled value: pair sums over differenced systems minus the main term
    pair_total = _pair_sum(system, high, B, W, M, p_m)
    assembled = pair_total - mass**2 / total_classes
    scale = max(abs(direct), abs(assembled), 1e-300)
    cross_residual = abs(direct - assembled) / scale

    return VarianceReport(
        plan=plan,
        B=B,
        mass=mass,
        expected=expected,
        upsilon=upsilon,
        zero_classes=len(zero_classes),
        deviation_sum=deviation_sum,
        variance=variance,
        cross_residual=cross_residual,
        empty=empty,
    )


def _pair_sum(system, high, B, W, M, p_m):
    """sum over y of the W_y-weighted count of the y-differenced congruences.

    Equals the sum of squared class masses by exact regrouping of the lattice
    pairs (x, x + p_m y); computed here from shifted grids so that the two
    sides of the identity come from genuinely different enumerations.
    """
    n = system.n
    ymax = (2 * M) // p_m
    ext = M + p_m * ymax
    coords = np.arange(-ext, ext + 1, dtype=np.int64)
    axes = np.meshgrid(*([coords] * n), indexing="ij")

    value_grids = []
    for f, qt in high:
        acc = np.zeros(axes[0].shape, dtype=np.int64)
        for mono, coeff in f.terms.items():
            term = np.full(axes[0].shape, coeff % qt, dtype=np.int64)
            for i, e in enumerate(mono):
                if e:
                    base = axes[i] % qt
                    for _ in range(e):
                        term = (term * base) % qt
            acc = (acc + term) % qt
        value_grids.append(acc)

    wvals = np.zeros(axes[0].shape, dtype=np.float64)
    it = np.nditer(wvals, flags=["multi_index"], op_flags=["writeonly"])
    for cell in it:
        x = tuple(idx - ext for idx in it.multi_index)
        if max(abs(v) for v in x) <= M:
            cell[...] = W(tuple(xi / B for xi in x))

    center = slice(ext - M, ext + M + 1)
    box = (center,) * n
    w_box = wvals[box]
    g_box = [g[box] for g in value_grids]

    contribs = []
    for y in product(range(-ymax, ymax + 1), repeat=n):
        off = tuple(
            slice(ext - M + p_m * yi, ext + M + 1 + p_m * yi) for yi in y
        )
        w_shift = wvals[off]
        prod_w = w_box * w_shift
        if not prod_w.any():
            contribs.append(0.0)
            continue
        cond = np.ones(w_box.shape, dtype=bool)
        for g in value_grids:
            cond &= g[off] == g[box]
        contribs.append(float(np.sum(prod_w * cond)))
    return math.fsum(contribs)


# ---------------------------------------------------------------------------
# The residual of the weighted asymptotic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticResidual:
    B: int
    xi: float
    m: int
    primes: PrimeTuple
    s: int
    lhs: float
    envelope_main: float
    envelope_secondary: float
    weighted: float
    mass: float
    Q: int

    @property
    def ratio_main(self):
        return self.lhs / self.envelope_main if self.envelope_main else math.inf


def asymptotic_residual(
    system, B, xi, m, W, primes=None, enum_cap=DEFAULT_ENUM_CAP,
    step_budget=DEFAULT_STEP_BUDGET,
):
    """|N_W - mass/Q| against the two proved envelope shapes.

    The envelopes carry unspecified absolute constants, so callers assert
    ratio boundedness over sweeps, never equalities.  Hypothesis: every
    selected prime gives codimension r; s is the worst suffix singular
    dimension, pairing prime p_i with suffix level i.
    """
    if primes is None:
        primes = select_primes(system, xi, m, step_budget=step_budget).primes
    if primes.m != m:
        raise ValueError("prime tuple depth disagrees with m")
    r = system.r
    s = -1
    if r:
        D = system.max_degree
        for i, p in enumerate(primes.primes):
            prof = variety_profile(system, p, with_counts=False, step_budget=step_budget)
            if prof.codim != r:
                raise HypothesisError(
                    f"codimension at p_{i}={p} is {prof.codim}, need {r}"
                )
            level = min(i, D - 2)
            sprof = variety_profile(
                system.suffix(level), p, with_counts=False, step_budget=step_budget
            )
            s = max(s, sprof.sing_dim)
    plan = modulus_plan(primes, system) if r else None
    Q = plan.Q if plan else 1
    mass = weight_mass(W, B)
    if r:
        nw = weighted_count(system, B, list(plan.member_moduli), W, enum_cap=enum_cap)
        weighted = nw.value
    else:
        weighted = mass
    lhs = abs(weighted - mass / Q)
    n = system.n
    counts = system.degree_counts() if r else {}
    saving, _ = savings_exponents(counts, m) if r else (Fraction(0), Fraction(0))
    env1 = B**n * xi ** float(-saving) * (xi / B) ** ((n - s - 2) / 2**m)
    env2 = B**n * xi ** (-r / 2) * (xi / B) ** ((n - s - 1) / 2)
    return AsymptoticResidual(
        B=B,
        xi=float(xi),
        m=m,
        primes=primes,
        s=s,
        lhs=lhs,
        envelope_main=env1,
        envelope_secondary=env2,
        weighted=weighted,
        mass=mass,
        Q=Q,
    )
