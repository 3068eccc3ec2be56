import numpy as np
import pytest

from zonokit import HPolytope, Zonotope, is_empty
from zonokit.reach import LinearSystem, wayset, wayset_inner_box, wayset_reduce
from zonokit import oracle


# Raw representation sizes each skip-or-fold strategy lands on for the
# bundled 3-state vehicle scenario (position / velocity / stored energy
# under a 10-step horizon).
RAW_SIZES = {"ZH": (7, 37), "GI": (30, 60), "LP": (7, 37), "IA": (16, 46)}


@pytest.fixture(scope="module")
def waysets(vehicle_scenario):
    doc = vehicle_scenario
    return {s: wayset(doc.system, doc.x_star, doc.N, strategy=s)[0]
            for s in RAW_SIZES}


class TestVehicleScenario:
    def test_raw_sizes(self, waysets):
        got = {s: (Z.n_c, Z.n_g) for s, Z in waysets.items()}
        assert got == RAW_SIZES

    def test_all_strategies_reduce_to_one_representation(self, waysets):
        reduced = {s: wayset_reduce(Z) for s, Z in waysets.items()}
        for Z in reduced.values():
            assert (Z.n_c, Z.n_g) == (7, 37)
        assert oracle.sets_equal(reduced["GI"], reduced["LP"], grid=5)

    def test_strategies_agree_as_sets(self, waysets):
        base = waysets["LP"]
        for s in ("ZH", "IA"):
            assert oracle.sets_equal(waysets[s], base, grid=5)

    def test_trace_is_zonotope_until_first_fold(self, vehicle_scenario):
        doc = vehicle_scenario
        Z, trace = wayset(doc.system, doc.x_star, doc.N, strategy="LP",
                          keep_trace=True)
        assert len(trace) == doc.N
        sizes = [(T.n_c, T.n_g) for T in trace]
        assert sizes[:6] == [(0, 3 * (k + 1)) for k in range(6)]
        assert sizes[-1] == (Z.n_c, Z.n_g)
        # backward tube widens until the state constraints start cutting
        assert all(a.n_c <= b.n_c for a, b in zip(trace, trace[1:]))

    def test_known_upstream_state_is_in_the_wayset(self, vehicle_scenario,
                                                   waysets):
        doc = vehicle_scenario
        assert doc.x_star_minus is not None
        assert oracle.membership(waysets["LP"], doc.x_star_minus, tol=1e-7)

    def test_forward_feasibility_of_sampled_members(self, vehicle_scenario,
                                                    waysets):
        doc = vehicle_scenario
        W = waysets["LP"]
        for x0 in oracle.sample_inside(W, 15, seed=8):
            assert oracle.horizon_feasible(doc.system, x0, doc.x_star, doc.N)
        # support points pushed outward must lose feasibility
        for d in oracle.directions(3, seed=9)[:6]:
            val, point = oracle._support_point(W, d)
            outside = point + 1e-3 * d / np.linalg.norm(d)
            assert not oracle.horizon_feasible(doc.system, outside,
                                               doc.x_star, doc.N)

    def test_inner_box(self, vehicle_scenario, waysets):
        doc = vehicle_scenario
        W = waysets["LP"]
        box = wayset_inner_box(W)
        assert box.n_c == 0 and box.n_g == 3
        for d in oracle.directions(3, seed=10)[:20]:
            assert oracle.support_lp(box, d) <= oracle.support_lp(W, d) + 1e-6
        anchored = wayset_inner_box(W, anchor=doc.x_star_minus)
        assert oracle.membership(anchored, doc.x_star_minus, tol=1e-6)


def toy_sys():
    X = HPolytope(np.vstack([np.eye(2), -np.eye(2)]), [10, 10, 10, 10])
    U = Zonotope([0.0], [[0.5]])
    return LinearSystem([[1.0, 1.0], [0.0, 1.0]], [[0.0], [1.0]], X, U)


def test_single_step_is_preimage():
    sys = toy_sys()
    target = np.array([1.0, 0.0])
    Z, trace = wayset(sys, target, 1)
    assert Z.n_c == 0  # X never cuts this deep inside
    for x in oracle.sample_inside(Z, 30, seed=11):
        u = np.linalg.lstsq(sys.B, target - sys.A @ x, rcond=None)[0]
        assert oracle.membership(sys.U, u, tol=1e-7)


def test_unreachable_target_comes_back_empty():
    sys = toy_sys()
    Z, _ = wayset(sys, [60.0, 0.0], 1)
    assert is_empty(Z)


def test_argument_validation(vehicle_scenario):
    sys = vehicle_scenario.system
    with pytest.raises(ValueError, match="strategy"):
        wayset(sys, [0, 0, 0], 2, strategy="QP")
    with pytest.raises(ValueError, match="dimension"):
        wayset(sys, [0, 0], 2)
    with pytest.raises(ValueError, match="at least 1"):
        wayset(sys, [0, 0, 0], 0)


def test_singular_dynamics_rejected():
    X = HPolytope(np.vstack([np.eye(2), -np.eye(2)]), [1, 1, 1, 1])
    with pytest.raises(ValueError, match="invertible"):
        LinearSystem([[1.0, 0.0], [2.0, 0.0]], [[0.0], [1.0]], X,
                     Zonotope([0.0], [[1.0]]))


def test_system_shape_checks():
    X = HPolytope(np.vstack([np.eye(2), -np.eye(2)]), [1, 1, 1, 1])
    U1 = Zonotope([0.0], [[1.0]])
    with pytest.raises(TypeError, match="HPolytope"):
        LinearSystem(np.eye(2), [[0.0], [1.0]], np.eye(2), U1)
    with pytest.raises(ValueError, match="rows"):
        LinearSystem(np.eye(2), np.zeros((3, 1)), X, U1)
    with pytest.raises(ValueError, match="column count"):
        LinearSystem(np.eye(2), [[0.0], [1.0]], X,
                     Zonotope([0.0, 0.0], np.eye(2)))
