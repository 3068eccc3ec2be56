import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zonokit import (
    ConstrainedZonotope,
    Zonotope,
    generalized_intersection,
    reduce_fully,
    remove_redundant_pair,
)
from zonokit.reduction import (
    eliminate_pair,
    lift,
    merge_parallel_generators,
    merge_parallel_lifted,
)
from zonokit import oracle

from conftest import make_conzono


DIAMOND = Zonotope([0.0, 0.0], [[1.0, 1.0], [1.0, -1.0]])
SQUARE = Zonotope([0.0, 0.0], np.eye(2))


def test_intersection_then_reduce_golden():
    Zc = generalized_intersection(DIAMOND, SQUARE)
    assert np.allclose(Zc.G, [[1, 1, 0, 0], [1, -1, 0, 0]])
    assert np.allclose(Zc.A, [[1, 1, -1, 0], [1, -1, 0, -1]])
    assert np.allclose(Zc.b, [0.0, 0.0])
    Zf = reduce_fully(Zc)
    assert (Zf.n_g, Zf.n_c) == (2, 0)
    assert oracle.sets_equal(Zf, SQUARE)


def test_binding_constraint_survives():
    # xi1 + xi2 = 1 cuts the square down to a segment; the constraint
    # binds, so eliminating it would grow the set.  Regression test for
    # the circular-refinement bug: the row must not certify itself.
    Z = ConstrainedZonotope([0.0, 0.0], np.eye(2), [[1.0, 1.0]], [1.0])
    Zr, removed = remove_redundant_pair(Z)
    assert not removed
    assert not oracle.membership(Zr, [2.0, -1.0])
    assert oracle.sets_equal(Z, Zr)


def test_supporting_fold_is_stripped():
    from zonokit import Halfspace, conzono_halfspace_intersection, support

    rng = np.random.default_rng(0)
    for _ in range(20):
        Zp = Zonotope(rng.normal(size=2), rng.normal(size=(2, 4)))
        h = rng.normal(size=2)
        hs = Halfspace(h, support(Zp, h) + abs(rng.normal()) + 0.1)
        cut = conzono_halfspace_intersection(Zp, hs)
        red, removed = remove_redundant_pair(cut)
        assert removed and red.n_c == 0
        assert oracle.sets_equal(red, Zp, grid=7)


def test_contained_intersections_mostly_collapse():
    rng = np.random.default_rng(7)
    collapsed = total = 0
    for _ in range(100):
        g1, g2 = rng.uniform(-1, 1, size=(2, 2)).T * 0.7
        # DIAMOND is exactly {|x| + |y| <= 2}: check the four vertices
        if max(np.abs(s1 * g1 + s2 * g2).sum()
               for s1 in (-1, 1) for s2 in (1,)) > 2.0 - 1e-9:
            continue
        total += 1
        Z2 = Zonotope([0.0, 0.0], np.column_stack([g1, g2]))
        Zf = reduce_fully(generalized_intersection(DIAMOND, Z2))
        assert oracle.sets_equal(Zf, Z2, grid=7)  # intersection IS Z2 here
        if (Zf.n_g, Zf.n_c) == (2, 0):
            collapsed += 1
    # the interval certificate is sufficient, not complete: most but not
    # necessarily all redundant rows are found
    assert collapsed >= 0.9 * total


class TestEliminatePair:
    def test_zeroes_one_row_and_column(self):
        rng = np.random.default_rng(1)
        Z = make_conzono(rng, 2, 5, 2)
        out = eliminate_pair(Z, 0, 0)
        assert (out.n_g, out.n_c) == (Z.n_g - 1, Z.n_c - 1)

    def test_rejects_zero_pivot(self):
        Z = ConstrainedZonotope([0.0], [[1.0, 0.0]], [[0.0, 1.0]], [0.5])
        with pytest.raises(ValueError):
            eliminate_pair(Z, 0, 0)


class TestParallelMerging:
    def test_merges_and_drops_zero_columns(self):
        Z = Zonotope([0.0, 0.0], [[1.0, 2.0, 0.0, -3.0], [0.0, 0.0, 0.0, 0.0]])
        M = merge_parallel_generators(Z)
        assert M.n_g == 1
        assert abs(M.G[0, 0]) == pytest.approx(6.0)
        assert oracle.sets_equal(M, Z)

    def test_rejects_conzono_and_bad_eps(self):
        Zc = ConstrainedZonotope([0.0], [[1.0]], [[1.0]], [0.5])
        with pytest.raises(ValueError):
            merge_parallel_generators(Zc)
        with pytest.raises(ValueError):
            merge_parallel_generators(SQUARE, eps=0.0)

    def test_lifted_merge_respects_constraints(self):
        # parallel in G but not in [G; A]: must NOT merge
        Za = ConstrainedZonotope([0.0], [[1.0, 2.0]], [[1.0, -1.0]], [0.5])
        assert merge_parallel_lifted(Za).n_g == 2
        # parallel in the lifted sense: merges, set unchanged
        Zb = ConstrainedZonotope([0.0], [[1.0, 2.0]], [[1.0, 2.0]], [0.5])
        Mb = merge_parallel_lifted(Zb)
        assert Mb.n_g == 1
        assert oracle.sets_equal(Mb, Zb)

    def test_lift_roundtrip_shape(self):
        rng = np.random.default_rng(2)
        Z = make_conzono(rng, 2, 4, 2)
        L = lift(Z)
        assert L.n == Z.n + Z.n_c and L.n_g == Z.n_g and L.n_c == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_reduce_fully_is_exact_and_never_grows(seed):
    rng = np.random.default_rng(seed)
    Z = make_conzono(rng, 2, rng.integers(3, 7), rng.integers(1, 4))
    R = reduce_fully(Z)
    assert R.n_g <= Z.n_g and R.n_c <= Z.n_c
    assert oracle.sets_equal(R, Z, grid=5)
    again = reduce_fully(R)
    assert (again.n_g, again.n_c) == (R.n_g, R.n_c)


def test_remove_redundant_pair_canonicalizes_vacuous_rows():
    # duplicated constraint: RREF exposes a zero row, which is dropped
    # even when no (row, generator) pair qualifies for elimination
    Z = ConstrainedZonotope([0.0, 0.0], np.eye(2),
                            [[1.0, 1.0], [2.0, 2.0]], [1.0, 2.0])
    Zr, removed = remove_redundant_pair(Z)
    assert not removed
    assert Zr.n_c == 1
    assert oracle.sets_equal(Zr, Z)
