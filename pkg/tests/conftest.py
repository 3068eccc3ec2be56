"""Shared fixtures: seeded random set generators and the bundled scenario."""

import os

import numpy as np
import pytest

from zonokit import ConstrainedZonotope, Zonotope
from zonokit.io import read_scenario

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def make_zonotope(rng, n, n_g, scale=1.0):
    G = rng.normal(size=(n, n_g)) * scale
    c = rng.normal(size=n) * scale
    return Zonotope(c, G)


def make_conzono(rng, n, n_g, n_c, scale=1.0):
    """Random constrained zonotope that is guaranteed nonempty.

    b is chosen as A @ xi0 for a strictly interior xi0, so the
    coefficient polytope always has volume.
    """
    G = rng.normal(size=(n, n_g)) * scale
    c = rng.normal(size=n) * scale
    A = rng.normal(size=(n_c, n_g))
    xi0 = rng.uniform(-0.8, 0.8, size=n_g)
    return ConstrainedZonotope(c, G, A, A @ xi0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def zono_factory(rng):
    def factory(n=2, n_g=5, scale=1.0):
        return make_zonotope(rng, n, n_g, scale)
    return factory


@pytest.fixture
def conzono_factory(rng):
    def factory(n=2, n_g=6, n_c=2, scale=1.0):
        return make_conzono(rng, n, n_g, n_c, scale)
    return factory


@pytest.fixture(scope="session")
def vehicle_scenario():
    return read_scenario(os.path.join(FIXTURES, "backward_reach_scenario.json"))
