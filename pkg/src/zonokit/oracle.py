"""Brute-force geometric ground truth at desk scale.

Everything here recomputes set predicates from the raw (c, G, A, b)
data using scipy's linprog and Qhull directly -- deliberately not the
library's own LP wrapper or closed-form shortcuts -- so the fast paths
can be checked against an independently coded route.  Budgets are
sized for n <= 4 and a few dozen generators: this module is test
tooling, kept out of the supported API surface.
"""

import itertools
import math

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .sets import EmptySetError, as_conzono

DEFAULT_SEED = 42
MEMBERSHIP_TOL = 1e-9
SUPPORT_TOL = 1e-6
GENERATOR_BUDGET = 128

_DEDUPE_DECIMALS = 9


def directions(n, seed=DEFAULT_SEED):
    """Dense unit-direction sweep used by every oracle routine.

    n = 2 walks 720 angles, n = 3 uses a 4x-subdivided icosahedron
    (2562 directions), higher dimensions fall back to seeded Gaussian
    samples -- enough to resolve every face of the desk-scale examples.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        theta = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if n == 3:
        return _icosphere(4)
    rng = np.random.default_rng(seed)
    D = rng.standard_normal((4096, n))
    return D / np.linalg.norm(D, axis=1, keepdims=True)


def _icosphere(subdivisions):
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.asarray(v, dtype=float) for v in verts]
    verts = [v / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        cache = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        next_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            next_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = next_faces
    return np.array(verts)


def _raw(Z):
    Z = as_conzono(Z)
    return Z, Z.c, Z.G, Z.A, Z.b


def _support_point(Z, d):
    """Support value and a maximizing point, straight from the data."""
    Z, c, G, A, b = _raw(Z)
    d = np.asarray(d, dtype=float).reshape(-1)
    if Z.n_g == 0:
        if Z.n_c and np.max(np.abs(b)) > MEMBERSHIP_TOL:
            raise EmptySetError("empty set has no support")
        return float(d @ c), c.copy()
    if Z.n_c == 0:
        signs = np.sign(G.T @ d)
        signs[signs == 0] = 1.0
        return float(d @ c + np.abs(G.T @ d).sum()), c + G @ signs
    q = G.T @ d
    res = linprog(-q, A_eq=A, b_eq=b,
                  bounds=np.column_stack([-np.ones(Z.n_g), np.ones(Z.n_g)]),
                  method="highs")
    if res.status == 2:
        raise EmptySetError("empty set has no support")
    if res.status != 0:
        raise RuntimeError(f"support LP failed: {res.message}")
    return float(d @ c - res.fun), c + G @ res.x


def support_lp(Z, d):
    """Support value max over the set of d . x (LP route)."""
    return _support_point(Z, d)[0]


def membership(Z, point, tol=MEMBERSHIP_TOL):
    """Whether the point is within tol (sup-norm) of the set.

    Solves min t s.t. |p - c - G xi| <= t, A xi = b, |xi| <= 1; a
    positive tol therefore tests against the tol-inflated set.
    """
    Z, c, G, A, b = _raw(Z)
    p = np.asarray(point, dtype=float).reshape(-1)
    if p.size != Z.n:
        raise ValueError("point dimension mismatch")
    gap = p - c
    if Z.n_g == 0:
        if Z.n_c and np.max(np.abs(b)) > MEMBERSHIP_TOL:
            return False
        return bool(np.max(np.abs(gap), initial=0.0) <= tol)
    n_g, n = Z.n_g, Z.n
    cost = np.zeros(n_g + 1)
    cost[-1] = 1.0
    ones = np.ones((n, 1))
    A_ub = np.block([[G, -ones], [-G, -ones]])
    b_ub = np.concatenate([gap, -gap])
    A_eq = np.hstack([A, np.zeros((Z.n_c, 1))]) if Z.n_c else None
    bounds = [(-1.0, 1.0)] * n_g + [(0.0, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq,
                  b_eq=b if Z.n_c else None, bounds=bounds, method="highs")
    if res.status == 2:
        return False
    if res.status != 0:
        raise RuntimeError(f"membership LP failed: {res.message}")
    return bool(res.fun <= tol)


def _empty_lp(Z):
    Z, c, G, A, b = _raw(Z)
    if Z.n_c == 0:
        return False
    if Z.n_g == 0:
        return bool(np.max(np.abs(b)) > MEMBERSHIP_TOL)
    res = linprog(np.zeros(Z.n_g), A_eq=A, b_eq=b,
                  bounds=[(-1.0, 1.0)] * Z.n_g, method="highs")
    if res.status == 2:
        return True
    if res.status != 0:
        raise RuntimeError(f"feasibility LP failed: {res.message}")
    return False


def _dedupe(points):
    rounded = np.round(points, _DEDUPE_DECIMALS)
    _, keep = np.unique(rounded, axis=0, return_index=True)
    return points[np.sort(keep)]


def enumerate_vertices(Z, max_generators=GENERATOR_BUDGET):
    """Vertices of a set with n <= 3, by direction-sweep LPs.

    Returns an array of vertex rows; 2-D output is ordered
    counterclockwise starting from the lexicographically smallest
    vertex, 3-D output is unordered.  Degenerate (flat) sets come back
    as the vertices of the lower-dimensional hull.
    """
    Z = as_conzono(Z)
    if Z.n > 3:
        raise ValueError("vertex enumeration supports n <= 3 only")
    if Z.n_g > max_generators:
        raise ValueError(
            f"generator budget exceeded ({Z.n_g} > {max_generators})")
    candidates = []
    for d in directions(Z.n):
        _, point = _support_point(Z, d)  # EmptySetError propagates
        candidates.append(point)
    pts = _dedupe(np.array(candidates))
    if len(pts) == 1:
        return pts
    mean = pts.mean(axis=0)
    centered = pts - mean
    U, s, Vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > 1e-9 * max(s[0], 1.0)))
    if rank == 0:
        return mean.reshape(1, -1)
    if rank == 1:
        along = centered @ Vt[0]
        return _dedupe(np.array([pts[np.argmin(along)], pts[np.argmax(along)]]))
    if rank == 2 and Z.n == 3:
        plane = centered @ Vt[:2].T
        order = _hull_2d(plane)
        return pts[order]
    if Z.n == 2:
        return pts[_hull_2d(pts)]
    hull = ConvexHull(pts)
    return pts[np.sort(np.unique(hull.vertices))]


def _hull_2d(pts):
    hull = ConvexHull(pts)
    order = list(hull.vertices)  # counterclockwise per Qhull's 2-D contract
    corner = min(range(len(order)), key=lambda i: tuple(pts[order[i]]))
    return np.array(order[corner:] + order[:corner])


def polygon_area(vertices):
    """Shoelace area of an ordered planar polygon."""
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def zonotope_facets(Z):
    """Exact H-Rep of a full-dimensional zonotope with n <= 3.

    Every facet of a zonotope is itself a zonotope spanned by the
    generators parallel to it, so the outward normals are the
    perpendiculars of single generators (n = 2) or cross products of
    generator pairs (n = 3); offsets follow from the support formula
    h @ c + sum |h @ g_i|.  Both signs of every normal are emitted and
    duplicates merged.  Flat sets are rejected: a slab H-Rep would
    strictly contain them.
    """
    Z = as_conzono(Z)
    if Z.n_c != 0:
        raise ValueError("facet enumeration applies to unconstrained zonotopes")
    n, G = Z.n, Z.G
    if np.linalg.matrix_rank(G) < n:
        raise ValueError("facet enumeration needs a full-dimensional zonotope")
    if n == 1:
        normals = [np.array([1.0])]
    elif n == 2:
        normals = [np.array([-g[1], g[0]]) for g in G.T]
    elif n == 3:
        normals = [np.cross(gi, gj)
                   for gi, gj in itertools.combinations(G.T, 2)]
    else:
        raise ValueError("facet enumeration supports n <= 3 only")
    kept = []
    for h in normals:
        norm = np.linalg.norm(h)
        if norm <= 1e-12:
            continue
        h = h / norm
        if any(abs(h @ k) > 1.0 - 1e-12 for k in kept):
            continue
        kept.append(h)
    H = np.vstack([np.array(kept), -np.array(kept)])
    f = H @ Z.c + np.abs(H @ G).sum(axis=1)
    from .sets import HPolytope
    return HPolytope(H, f)


def zonotope_volume_exact(Z):
    """Exact volume of an unconstrained zonotope: 2^n * sum of |det|
    over all n-subsets of generators.  Combinatorial -- desk scale only.
    """
    Z = as_conzono(Z)
    if Z.n_c != 0:
        raise ValueError("exact formula applies to unconstrained zonotopes")
    n, n_g = Z.n, Z.n_g
    if n_g < n:
        return 0.0
    if math.comb(n_g, n) > 400_000:
        raise ValueError("generator budget exceeded for exact volume")
    total = 0.0
    for idx in itertools.combinations(range(n_g), n):
        total += abs(np.linalg.det(Z.G[:, idx]))
    return (2.0 ** n) * total


class _SetProbe:
    """Bulk point classifier: a support-sweep outer polytope rejects,
    the hull of the support points accepts, LPs resolve the thin band
    in between.
    """

    def __init__(self, Z, tol=MEMBERSHIP_TOL):
        self.Z = as_conzono(Z)
        self.tol = tol
        D = directions(self.Z.n)
        vals, pts = [], []
        for d in D:
            v, p = _support_point(self.Z, d)
            vals.append(v)
            pts.append(p)
        self.D = D
        self.f = np.array(vals)
        try:
            hull = ConvexHull(_dedupe(np.array(pts)))
            self.inner = hull.equations
        except (QhullError, ValueError):
            self.inner = None  # flat set: fall through to LPs

    def classify(self, points):
        points = np.asarray(points, dtype=float)
        m = len(points)
        result = np.zeros(m, dtype=bool)
        undecided = np.ones(m, dtype=bool)
        for start in range(0, m, 4096):
            rows = slice(start, min(start + 4096, m))
            chunk = points[rows]
            outer = np.max(chunk @ self.D.T - self.f, axis=1) <= self.tol
            undecided[rows] = outer
            if self.inner is not None:
                inside = np.max(
                    chunk @ self.inner[:, :-1].T + self.inner[:, -1],
                    axis=1) <= self.tol
                result[rows] = outer & inside
                undecided[rows] = outer & ~inside
        for i in np.flatnonzero(undecided):
            result[i] = membership(self.Z, points[i], self.tol)
        return result


def volume(Z, samples=200_000, seed=DEFAULT_SEED):
    """Volume estimate with standard error, for n <= 4.

    n <= 2 is exact (support interval / shoelace polygon, stderr 0);
    n = 3, 4 is a Monte Carlo hit ratio over the bounding box of the
    parent zonotope, deterministic for a given seed.
    """
    Z = as_conzono(Z)
    n = Z.n
    if n > 4:
        raise ValueError("volume oracle supports n <= 4 only")
    if _empty_lp(Z):
        return 0.0, 0.0
    if n == 1:
        hi = support_lp(Z, [1.0])
        lo = -support_lp(Z, [-1.0])
        return hi - lo, 0.0
    if n == 2:
        verts = enumerate_vertices(Z)
        return polygon_area(verts), 0.0
    lo, hi = Z.parent_zonotope().interval_hull()
    widths = hi - lo
    box_volume = float(np.prod(widths))
    if box_volume <= 0.0:
        return 0.0, 0.0
    samples = int(samples)
    if samples < 1:
        raise ValueError("samples must be positive")
    probe = _SetProbe(Z)
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = samples
    while remaining > 0:
        m = min(remaining, 65536)
        pts = lo + rng.random((m, n)) * widths
        hits += int(probe.classify(pts).sum())
        remaining -= m
    p = hits / samples
    estimate = box_volume * p
    stderr = box_volume * math.sqrt(max(p * (1.0 - p), 0.0) / samples)
    return estimate, stderr


def volume_ratio(X, Y, samples=200_000, seed=DEFAULT_SEED):
    """Scale-linear size comparison (V(X)/V(Y))^(1/n)."""
    X, Y = as_conzono(X), as_conzono(Y)
    if X.n != Y.n:
        raise ValueError("dimension mismatch")
    vol_x, _ = volume(X, samples, seed)
    vol_y, _ = volume(Y, samples, seed + 1)
    if vol_y <= 0.0:
        raise ValueError("reference set has zero volume")
    return (vol_x / vol_y) ** (1.0 / X.n)


def _grid(lo, hi, density):
    axes = [np.linspace(lo[i], hi[i], density) for i in range(len(lo))]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def sets_equal(X, Y, grid=15, tol=SUPPORT_TOL):
    """Set equality by support sweep plus bidirectional grid membership.

    A support mismatch beyond tol anywhere on the direction sweep, or
    a grid point inside one set but outside the tol-inflated other,
    decides inequality.  n <= 3.
    """
    X, Y = as_conzono(X), as_conzono(Y)
    if X.n != Y.n:
        raise ValueError("dimension mismatch")
    if X.n > 3:
        raise ValueError("equality oracle supports n <= 3 only")
    empty_x, empty_y = _empty_lp(X), _empty_lp(Y)
    if empty_x or empty_y:
        return empty_x and empty_y
    for d in directions(X.n):
        if abs(support_lp(X, d) - support_lp(Y, d)) > tol:
            return False
    lo_x, hi_x = X.parent_zonotope().interval_hull()
    lo_y, hi_y = Y.parent_zonotope().interval_hull()
    lo = np.minimum(lo_x, lo_y)
    hi = np.maximum(hi_x, hi_y)
    for p in _grid(lo, hi, int(grid)):
        in_x = membership(X, p)
        in_y = membership(Y, p)
        if in_x and not in_y and not membership(Y, p, tol):
            return False
        if in_y and not in_x and not membership(X, p, tol):
            return False
    return True


def pontryagin_oracle(Z1, Z2, grid=41, tol=MEMBERSHIP_TOL):
    """Definitional difference check: grid points z with z + Z2 inside Z1.

    Returns (points, mask).  A point passes iff every vertex v of Z2
    satisfies z + v in Z1 -- sufficient because shifting a polytope
    keeps it the hull of its shifted vertices and Z1 is convex.  n <= 3.
    """
    Z1, Z2 = as_conzono(Z1), as_conzono(Z2)
    if Z1.n != Z2.n:
        raise ValueError("dimension mismatch")
    if Z1.n > 3:
        raise ValueError("difference oracle supports n <= 3 only")
    verts = enumerate_vertices(Z2)
    lo, hi = Z1.parent_zonotope().interval_hull()
    anchor = verts.mean(axis=0)  # in Z2, so the difference fits the shifted box
    points = _grid(lo - anchor, hi - anchor, int(grid))
    mask = np.zeros(len(points), dtype=bool)
    for i, z in enumerate(points):
        mask[i] = all(membership(Z1, z + v, tol) for v in verts)
    return points, mask


def horizon_feasible(sys, x0, x_star, N, tol=MEMBERSHIP_TOL):
    """One-shot LP over the whole control horizon: can x0 reach x_star?

    Stacks the input coefficients of all N steps into a single vector
    eta (one block per step, box bounds), writes every state as an
    affine function of eta, and asks HiGHS for feasibility of

        x(j) = A^j x0 + sum_i A^(j-1-i) B (c_u + G_u eta_i),
        H x(j) <= f  for j = 0..N-1,   x(N) = x_star.

    The terminal condition is an equality up to tol (two-sided rows),
    which keeps points produced by float recursions from being rejected
    on roundoff.  Independent of the backward recursion: it never calls
    the set operations whose output it is meant to judge.
    """
    A = np.asarray(sys.A, dtype=float)
    B = np.asarray(sys.B, dtype=float)
    H, f = np.asarray(sys.X.H, dtype=float), np.asarray(sys.X.f, dtype=float)
    c_u, G_u = np.asarray(sys.U.c, dtype=float), np.asarray(sys.U.G, dtype=float)
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    x_star = np.asarray(x_star, dtype=float).reshape(-1)
    n, m = A.shape[0], G_u.shape[1]
    N = int(N)
    if N < 1:
        raise ValueError("horizon must be at least one step")

    # coef[j] has shape (n, N*m): x(j) = const[j] + coef[j] @ eta
    const = [x0]
    coef = [np.zeros((n, N * m))]
    for j in range(N):
        const.append(A @ const[j] + B @ c_u)
        step = A @ coef[j]
        step[:, j * m:(j + 1) * m] += B @ G_u
        coef.append(step)

    A_ub = np.vstack([H @ coef[j] for j in range(N)])
    b_ub = np.concatenate([f - H @ const[j] for j in range(N)])
    gap = x_star - const[N]
    A_ub = np.vstack([A_ub, coef[N], -coef[N]])
    b_ub = np.concatenate([b_ub, gap + tol, -gap + tol])
    res = linprog(np.zeros(N * m), A_ub=A_ub, b_ub=b_ub,
                  bounds=[(-1.0, 1.0)] * (N * m), method="highs")
    if res.status == 2:
        return False
    if res.status != 0:
        raise RuntimeError(f"horizon LP failed: {res.message}")
    return True


def sample_coeffs(Z, count, seed=DEFAULT_SEED):
    """Feasible coefficient vectors: uniform for plain zonotopes,
    convex combinations of LP-found coefficient-polytope vertices when
    equality constraints are present.
    """
    Z, c, G, A, b = _raw(Z)
    rng = np.random.default_rng(seed)
    count = int(count)
    if Z.n_g == 0:
        if Z.n_c and np.max(np.abs(b)) > MEMBERSHIP_TOL:
            raise EmptySetError("cannot sample an empty set")
        return np.zeros((count, 0))
    if Z.n_c == 0:
        return rng.uniform(-1.0, 1.0, (count, Z.n_g))
    basis = []
    for _ in range(min(max(2 * Z.n_g, 8), 48)):
        d = rng.standard_normal(Z.n_g)
        res = linprog(-d, A_eq=A, b_eq=b, bounds=[(-1.0, 1.0)] * Z.n_g,
                      method="highs")
        if res.status == 2:
            raise EmptySetError("cannot sample an empty set")
        if res.status != 0:
            raise RuntimeError(f"sampling LP failed: {res.message}")
        basis.append(res.x)
    basis = np.array(basis)
    weights = rng.dirichlet(np.ones(len(basis)), size=count)
    return weights @ basis


def sample_inside(Z, count, seed=DEFAULT_SEED):
    """Points guaranteed inside the set (see sample_coeffs)."""
    Z = as_conzono(Z)
    return Z.c + sample_coeffs(Z, count, seed) @ Z.G.T
