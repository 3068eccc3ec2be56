"""Robust positively invariant (RPI) outer approximations.

For stable x+ = A x + w with zonotopic disturbance bound W, the minimal
RPI set is the limit of the disturbance-reach sums ⊕ A^i W, which has
no finite representation in general.  Two computable stand-ins are
provided: the classic iterative scaling F = (1-alpha)^{-1} F_s whose
error against the true minimal set is user-bounded, and a one-LP
construction that picks per-generator scales on the reach template so
that invariance holds by a containment certificate.
"""

import numpy as np

from .numerics import (
    InfeasibleProgram,
    LpBuilder,
    NumericalError,
    lin_coeff,
    optimize_scaling,
    row_abs_coeff,
)
from .sets import (
    ConstrainedZonotope,
    HPolytope,
    Zonotope,
    contains_point,
    linear_map,
    support,
)

# Stability margin: spectral radius must clear 1 by at least this.
STABILITY_TOL = 1e-9


def _plain_zonotope(W, name):
    if isinstance(W, Zonotope):
        return W
    if isinstance(W, ConstrainedZonotope) and W.n_c == 0:
        return Zonotope(W.c, W.G)
    raise ValueError(f"{name} must be an unconstrained zonotope")


class AutonomousSystem:
    """Autonomous linear dynamics x+ = A x + w, w in W.

    A must be strictly stable (spectral radius below 1 - 1e-9) and W, a
    zonotope, must contain the origin.  ``W_h`` optionally supplies W's
    exact H-Rep for the support-ratio tests; without it one is derived
    for axis-aligned W in any dimension, or by facet enumeration for
    n <= 3.
    """

    def __init__(self, A, W, W_h=None):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.W = _plain_zonotope(W, "W")
        n = self.W.n
        if self.A.shape != (n, n):
            raise ValueError(f"A must be {n} x {n} to match W")
        if not np.isfinite(self.A).all():
            raise ValueError("A must be finite")
        rho = float(np.abs(np.linalg.eigvals(self.A)).max(initial=0.0))
        if rho >= 1.0 - STABILITY_TOL:
            raise ValueError(f"A must be strictly stable; spectral radius {rho:.6g}")
        if not contains_point(self.W, np.zeros(n)):
            raise ValueError("W must contain the origin")
        if W_h is not None:
            if not isinstance(W_h, HPolytope):
                raise TypeError("W_h must be an HPolytope")
            if W_h.n != n:
                raise ValueError("W_h dimension differs from W")
        self.W_h = W_h
        self.spectral_radius = rho

    @property
    def n(self):
        return self.W.n

    def __repr__(self):
        return f"AutonomousSystem(n={self.n}, rho={self.spectral_radius:.4f})"


def f_s(sys, s):
    """Accumulated disturbance reach over s+1 steps: ⊕_{i=0}^{s} A^i W.

    The generator matrix is exactly [G_w, A G_w, ..., A^s G_w] (so
    f_s(sys, s+1) extends f_s(sys, s) in representation, not just as a
    set) and the center is the matching power sum.
    """
    s = int(s)
    if s < 0:
        raise ValueError("s must be nonnegative")
    W, A = sys.W, sys.A
    blocks = []
    center = np.zeros(sys.n)
    P = np.eye(sys.n)
    for _ in range(s + 1):
        blocks.append(P @ W.G)
        center += P @ W.c
        P = A @ P
    return Zonotope(center, np.hstack(blocks))


def _w_hrep(sys):
    """H-Rep of W for the support-ratio test."""
    if sys.W_h is not None:
        return sys.W_h
    W = sys.W
    if (np.count_nonzero(W.G, axis=0) <= 1).all():
        # Axis-aligned generators: W is the box c +- sum|G|.
        lo, hi = W.interval_hull()
        eye = np.eye(W.n)
        return HPolytope(np.vstack([eye, -eye]), np.concatenate([hi, -lo]))
    if W.n <= 3:
        from .oracle import zonotope_facets
        return zonotope_facets(W)
    raise ValueError(
        "facet enumeration of a non-axis-aligned W is only built in for "
        "n <= 3; pass W_h explicitly")


def _support_ratio(Z, P):
    """Smallest alpha with Z inside alpha * {x : P.H x <= P.f} (P convex,
    containing the origin); inf when some row makes it impossible."""
    worst = 0.0
    for h, f in zip(P.H, P.f):
        reach = support(Z, h)
        if f > 1e-12:
            worst = max(worst, reach / f)
        elif reach > 1e-12:
            return np.inf
    return worst


def mrpi_iterative(sys, eps, s_max=10000):
    """Outer approximation of the minimal RPI set to inf-norm error eps.

    Grows the number of Minkowski terms s of F_s = ⊕_{i=0}^{s-1} A^i W
    until alpha / (1 - alpha) * M(s) <= eps, where alpha is the support
    ratio certifying A^s W ⊆ alpha W (evaluated algebraically on W's
    facet rows) and M(s) bounds F_s by a box: the max over the 2n
    coordinate directions of the partial support sums.  Returns
    (F, alpha, s) with F = (1 - alpha)^{-1} F_s, which is RPI and
    within eps of the true minimal RPI set.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    W, A = sys.W, sys.A
    Wh = _w_hrep(sys)
    n = sys.n

    eye = np.eye(n)
    dir_sums = np.zeros(2 * n)   # running Σ_i support(W, +-(A^T)^i e_j)
    D = eye.copy()               # columns are (A^T)^i e_j
    As = eye.copy()              # A^s
    for s in range(1, s_max + 1):
        for j in range(n):
            dir_sums[j] += support(W, D[:, j])
            dir_sums[n + j] += support(W, -D[:, j])
        D = A.T @ D
        As = A @ As
        alpha = _support_ratio(linear_map(As, W), Wh)
        if alpha < 1.0 and alpha / (1.0 - alpha) * dir_sums.max() <= eps:
            F = f_s(sys, s - 1)
            scale = 1.0 / (1.0 - alpha)
            return Zonotope(scale * F.c, scale * F.G), float(alpha), s
    raise NumericalError(
        f"no s <= {s_max} met the error bound {eps}; is the spectral "
        f"radius ({sys.spectral_radius:.4f}) too close to 1?")


def rpi_onestep(sys, s, norm="inf"):
    """RPI set from one LP on the disturbance-reach template.

    The template generators are those of f_s(sys, s); the LP finds
    nonnegative per-generator scales phi (minimizing ||phi||_norm) and
    a center c such that the scaled template Z = {G diag(phi), c}
    absorbs one dynamics step: A Z ⊕ W ⊆ Z, enforced through
    generator-matching multipliers

        A G Phi = G Gamma1,   G_w = G Gamma2,
        (I - A) c - c_w = G beta,
        |Gamma1| 1 + |Gamma2| 1 + |beta| <= Phi 1   (row-wise),

    which is an exact transcription of the zonotope containment
    certificate scaled by the template rows.  Mathematical unknowns:
    n_g^2 + n_g (n_w + 2) + n.

    Returns (Z, ScalingResult); the result's certificate stores the raw
    multipliers (gamma = [Gamma1, Gamma2], beta), whose containment
    budgets are relative to phi rather than 1.  Raises ValueError when
    no scaling on this template supports invariance (s too small).
    """
    W, A = sys.W, sys.A
    n = sys.n
    G = f_s(sys, s).G
    n_g, n_w = G.shape[1], W.n_g
    AG = A @ G

    b = LpBuilder()
    b.var("phi", n_g, lo=0.0)
    b.var("c", n)
    b.var("g1p", (n_g, n_g), lo=0.0)
    b.var("g1n", (n_g, n_g), lo=0.0)
    b.var("g2p", (n_g, n_w), lo=0.0)
    b.var("g2n", (n_g, n_w), lo=0.0)
    b.var("bp", n_g, lo=0.0)
    b.var("bn", n_g, lo=0.0)

    # vec(A G Phi) column block i holds phi_i * (A g_i).
    phi_cols = np.zeros((n * n_g, n_g))
    for i in range(n_g):
        phi_cols[i * n:(i + 1) * n, i] = AG[:, i]
    map1 = lin_coeff((n_g, n_g), left=G)
    b.eq({"phi": phi_cols, "g1p": -map1, "g1n": map1}, np.zeros(n * n_g))
    map2 = lin_coeff((n_g, n_w), left=G)
    b.eq({"g2p": map2, "g2n": -map2}, W.G.reshape(-1, order="F"))
    b.eq({"c": np.eye(n) - A, "bp": -G, "bn": G}, W.c)
    r1 = row_abs_coeff((n_g, n_g))
    r2 = row_abs_coeff((n_g, n_w))
    eye_g = np.eye(n_g)
    b.le({"g1p": r1, "g1n": r1, "g2p": r2, "g2n": r2,
          "bp": eye_g, "bn": eye_g, "phi": -eye_g}, np.zeros(n_g))

    try:
        x = optimize_scaling(b, "phi", norm, maximize=False)
    except InfeasibleProgram:
        raise ValueError(
            f"no invariant scaling exists on the s={s} template; "
            "increase s") from None

    from .containment import ContainmentCertificate, ScalingResult
    phi = np.maximum(b.value(x, "phi"), 0.0)
    c = b.value(x, "c")
    gamma = np.hstack([b.value(x, "g1p") - b.value(x, "g1n"),
                       b.value(x, "g2p") - b.value(x, "g2n")])
    beta = b.value(x, "bp") - b.value(x, "bn")
    cert = ContainmentCertificate(gamma, beta)
    return Zonotope(c, G * phi), ScalingResult(phi, c, cert)


def onestep_decision_vars(n_g, n_w, n):
    """Mathematical unknown count of the rpi_onestep program."""
    return n_g * n_g + n_g * (n_w + 2) + n


def lqr_closed_loop(A, B, Q, R, W, W_h=None, tol=1e-12, max_iter=200000):
    """Discrete LQR closed loop A + B K, packaged as an AutonomousSystem.

    Iterates the Riccati recursion to a fixed point (max-norm change
    below ``tol``), takes K = -(R + B'PB)^{-1} B'PA, and pairs the
    closed-loop matrix with the disturbance set W.  Non-stabilizable
    pairs never converge and are reported as NumericalError.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("A must be square")
    if B.shape[0] != n:
        B = B.reshape(n, -1)
    m = B.shape[1]
    if Q.shape != (n, n) or R.shape != (m, m):
        raise ValueError("Q must be n x n and R must be m x m")

    P = Q.copy()
    for _ in range(max_iter):
        BtP = B.T @ P
        with np.errstate(over="ignore", invalid="ignore"):
            K = -np.linalg.solve(R + BtP @ B, BtP @ A)
            Pn = Q + A.T @ P @ (A + B @ K)
        if not np.isfinite(Pn).all():
            raise NumericalError(
                "Riccati recursion diverged; (A, B) may not be stabilizable")
        if np.abs(Pn - P).max(initial=0.0) <= tol * max(1.0, np.abs(Pn).max()):
            P = Pn
            break
        P = Pn
    else:
        raise NumericalError(
            "Riccati recursion did not converge; (A, B) may not be stabilizable")

    BtP = B.T @ P
    K = -np.linalg.solve(R + BtP @ B, BtP @ A)
    return AutonomousSystem(A + B @ K, W, W_h)
