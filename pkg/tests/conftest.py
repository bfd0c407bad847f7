"""Shared fixtures: seeded generators, fields and random cochains."""

import numpy as np
import pytest

from src.core.hochschild import PolyDiffCochain, coefficient_ring
from src.core.ncpoly import AlgebraSpec, NCPoly
from src.core.scalars import ScalarField

SEED = 20240517


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def QQ_field():
    return ScalarField.rational()


@pytest.fixture
def R():
    """QQ[x, y, h] with generators x, y, h."""
    return coefficient_ring(ScalarField.rational())


@pytest.fixture
def weyl():
    return AlgebraSpec.weyl()


@pytest.fixture
def generic():
    return AlgebraSpec.generic()


def random_ncpoly(rng, algebra, degree=3, terms=3):
    poly = algebra.zero()
    for _ in range(terms):
        i, j = (int(v) for v in rng.integers(0, degree + 1, size=2))
        c = int(rng.integers(-3, 4))
        if c:
            poly = poly + NCPoly.monomial(algebra, i, j, c)
    return poly


def random_slots(rng, arity, max_order=2):
    slots = []
    for _ in range(arity):
        order = int(rng.integers(0, max_order + 1))
        a = int(rng.integers(0, order + 1))
        slots.append((a, order - a))
    return tuple(slots)


def random_cochain(rng, arity, terms=3, degree=2, max_order=2):
    """Random cochain with small integer coefficients, not necessarily homogeneous."""
    R = coefficient_ring(ScalarField.rational())
    out = {}
    for _ in range(terms):
        slots = random_slots(rng, arity, max_order)
        i, j = (int(v) for v in rng.integers(0, degree + 1, size=2))
        c = int(rng.integers(-3, 4))
        out[slots] = out.get(slots, R.zero) + R.from_dict({(i, j, 0): c})
    return PolyDiffCochain(arity, out)


def random_homogeneous(rng, arity, bidegree, terms=3, max_order=2):
    """Random cochain of one bidegree; may come out zero."""
    R = coefficient_ring(ScalarField.rational())
    u, v = bidegree
    out = {}
    for _ in range(terms):
        slots = random_slots(rng, arity, max_order)
        i = u + sum(a for a, _ in slots)
        j = v + sum(b for _, b in slots)
        if i < 0 or j < 0:
            continue
        c = int(rng.integers(-3, 4))
        out[slots] = out.get(slots, R.zero) + R.from_dict({(i, j, 0): c})
    return PolyDiffCochain(arity, out)


def random_poly(rng, degree=3, terms=4):
    R = coefficient_ring(ScalarField.rational())
    out = R.zero
    for _ in range(terms):
        i, j = (int(v) for v in rng.integers(0, degree + 1, size=2))
        out += R.from_dict({(i, j, 0): int(rng.integers(-3, 4))})
    return out
