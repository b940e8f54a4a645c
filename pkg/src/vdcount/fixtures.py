"""The versioned fixture corpus used by tests, demos and the CLI examples.

Each fixture is a small named system together with the facts the test suite
pins against it (witness primes, expected search results).  The JSON files
shipped under fixtures/ mirror the same systems in the CLI input format.
"""

from __future__ import annotations

from pathlib import Path

from .poly import Polynomial, PolySystem

CORPUS_VERSION = 1

_DIR = Path(__file__).parent / "fixtures"


def _diag(n, d, coeffs=None):
    coeffs = coeffs or [1] * n
    out = Polynomial.zero(n)
    for i, c in enumerate(coeffs):
        out = out + c * Polynomial.variable(n, i, d)
    return out


def circle_affine():
    """x1^2 + x2^2 - 2: four integral points at height 1."""
    x1, x2 = (Polynomial.variable(2, i) for i in range(2))
    return PolySystem(2, [x1 * x1 + x2 * x2 - 2])


def conic():
    """The diagonal conic in three variables; smooth away from 2."""
    return PolySystem(3, [_diag(3, 2)])


def diagonal_cubic():
    """x1^3 + x2^3 + x3^3; smooth away from 3."""
    return PolySystem(3, [_diag(3, 3)])


def diagonal_quartic():
    """x1^4 + ... + x4^4; smooth away from 2."""
    return PolySystem(4, [_diag(4, 4)])


def quadric4():
    return PolySystem(4, [_diag(4, 2)])


def cubic4():
    return PolySystem(4, [_diag(4, 3)])


def pair_conic_cubic():
    """A conic and a cubic in P^2 meeting transversally (r = 2)."""
    return PolySystem(3, [_diag(3, 2), _diag(3, 3, [1, 2, 3])])


def mixed_singular_pair():
    """Smooth conic plus a rank-2 (singular) conic generating a smooth pencil.

    The full intersection is a smooth complete intersection, but the second
    member alone is singular, so regularization must mix in the first; the
    stored expectation is the entry-bound-1 table {(1, 0): 1}.
    """
    x1, x2, x3 = (Polynomial.variable(3, i) for i in range(3))
    f1 = x1 * x1 + x2 * x2 + x3 * x3
    f2 = x2 * x2 + 2 * x3 * x3
    return PolySystem(3, [f1, f2])


def mixed_degree_system():
    """Degrees (2, 3, 4) in four variables, for modulus-plan bookkeeping."""
    return PolySystem(4, [_diag(4, 2), _diag(4, 3), _diag(4, 4)])


REGISTRY = {
    "circle_affine": circle_affine,
    "conic": conic,
    "diagonal_cubic": diagonal_cubic,
    "diagonal_quartic": diagonal_quartic,
    "quadric4": quadric4,
    "cubic4": cubic4,
    "pair_conic_cubic": pair_conic_cubic,
    "mixed_singular_pair": mixed_singular_pair,
    "mixed_degree_system": mixed_degree_system,
}

# the five smooth complete intersections used by the square-root-residual runs
HOOLEY_FIXTURES = ("conic", "quadric4", "diagonal_cubic", "cubic4", "pair_conic_cubic")

# stored search witnesses, frozen from the deterministic searches
MIXED_PAIR_TABLE = {(1, 0): 1}
MIXED_PAIR_WITNESS = 7
CONIC_SLICE = (1, 0, 0)


def load(name):
    return REGISTRY[name]()


def fixture_path(name):
    """Path of the JSON file for a fixture (for the CLI)."""
    return _DIR / f"{name}.json"
