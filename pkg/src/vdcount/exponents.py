"""Closed-form exponent reports, in exact rational arithmetic.

Admissibility thresholds sit on half-integer boundaries, so everything here
is a Fraction; floats appear only in the diagnostic slope fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class ExponentReport:
    inputs: dict
    eta: Fraction
    exponent: Fraction
    admissible: bool
    violation: str | None = None
    aux: dict = field(default_factory=dict)


def uniform_degree_report(n, r, d):
    """Exponent report for r equations of one degree d >= 4 in n variables.

    eta = 2^{d-2}(d-1) r / (n + 2^{d-2}(d-1) r - 1); the box-count exponent
    is n - r d (1 - eta), admissible when n > 2^{d-2}(d-1) r.
    """
    if d < 4:
        raise ValueError("uniform-degree report requires degree >= 4")
    if r < 1:
        raise ValueError("need at least one equation")
    weight = 2 ** (d - 2) * (d - 1) * r
    eta = Fraction(weight, n + weight - 1)
    exponent = Fraction(n) - r * d * (1 - eta)
    admissible = n > weight
    return ExponentReport(
        inputs={"n": n, "r": r, "d": d},
        eta=eta,
        exponent=exponent,
        admissible=admissible,
        violation=None if admissible else f"requires n > {weight}",
        aux={"threshold": weight, "heuristic": Fraction(n - r * d)},
    )


def mixed_degree_report(n, r_by_degree):
    """Exponent report for a multidegree profile {degree d: count r_d}.

    D' = sum_{d<D} (d-1) r_d + D r_D,
    Delta = sum_{d<D} (d - 2 + 2^{1-d}) r_d + (D-1) r_D,
    eta = 2^{D-2} Delta / (n + 2^{D-2} Delta - 1),
    exponent = n - D'(1 - eta), admissible when n > 2^{D-2} Delta.
    """
    counts = {int(d): int(c) for d, c in r_by_degree.items() if c}
    if not counts:
        raise ValueError("empty degree profile")
    if any(d < 2 for d in counts):
        raise ValueError("degrees must be >= 2")
    D = max(counts)
    if D < 4:
        raise ValueError("mixed-degree report requires top degree >= 4")
    d_prime = sum((d - 1) * c for d, c in counts.items() if d < D) + D * counts[D]
    delta = sum(
        (Fraction(d - 2) + Fraction(1, 2 ** (d - 1))) * c
        for d, c in counts.items()
        if d < D
    ) + (D - 1) * counts[D]
    scaled = 2 ** (D - 2) * delta
    eta = scaled / (n + scaled - 1)
    exponent = Fraction(n) - d_prime * (1 - eta)
    admissible = Fraction(n) > scaled
    return ExponentReport(
        inputs={"n": n, "r_by_degree": dict(sorted(counts.items()))},
        eta=eta,
        exponent=exponent,
        admissible=admissible,
        violation=None if admissible else f"requires n > {scaled}",
        aux={
            "D": D,
            "D_prime": Fraction(d_prime),
            "Delta": delta,
            "threshold": scaled,
            "total_degree": sum(d * c for d, c in counts.items()),
        },
    )


def savings_exponents(r_by_degree, m):
    """(saving, growth) exponents of the modulus scheme at depth m.

    saving = sum_{i=2}^{m+1} (1 - 2^{-i+1}) r_i + sum_{i=m+2}^{D} r_i is the
    power of the base scale gained on the main term; growth is the exponent
    with which the combined modulus grows: sum_{i<=m+1} (i-1) r_i +
    (m+2) sum_{i>=m+2} r_i.  At m = 0 the saving equals the number of
    equations.
    """
    counts = {int(d): int(c) for d, c in r_by_degree.items()}
    if any(d < 2 for d in counts):
        raise ValueError("degrees must be >= 2")
    D = max(counts) if counts else 2
    if not 0 <= m <= max(D - 2, 0):
        raise ValueError(f"differencing depth m={m} out of range for D={D}")
    saving = Fraction(0)
    growth = Fraction(0)
    for d, c in counts.items():
        if d <= m + 1:
            saving += (1 - Fraction(1, 2 ** (d - 1))) * c
            growth += (d - 1) * c
        else:
            saving += c
            growth += (m + 2) * c
    return saving, growth


def birch_threshold(d, r, s_star):
    """Minimal admissible variable count under the classical circle-method
    condition n > s* + 2^{d-1}(d-1) r (r+1).  ``s_star`` is caller-supplied
    (the affine rank-drop locus dimension is not computed here)."""
    if d < 2:
        raise ValueError("degree must be >= 2")
    if r < 0 or s_star < -1:
        raise ValueError("bad inputs")
    bound = s_star + 2 ** (d - 1) * (d - 1) * r * (r + 1)
    return bound + 1


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    max_abs_residual: float


def empirical_slope(table):
    """Least-squares slope of log N against log B.  Diagnostic only."""
    rows = [(float(b), float(nv)) for b, nv in table]
    if len(rows) < 3:
        raise ValueError("need at least 3 rows")
    if any(b <= 0 or nv <= 0 for b, nv in rows):
        raise ValueError("B and N must be positive")
    if len({b for b, _ in rows}) < 2:
        raise ValueError("degenerate table: all B equal")
    xs = np.log([b for b, _ in rows])
    ys = np.log([nv for _, nv in rows])
    A = np.vstack([xs, np.ones_like(xs)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - (slope * xs + intercept)
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        max_abs_residual=float(np.max(np.abs(resid))),
    )
