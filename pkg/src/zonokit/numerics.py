"""Dense LP abstraction and linear-algebra utilities.

Every optimization-backed operation in the package funnels through
:func:`solve_lp`, so the solver backend (scipy's HiGHS) is swappable in
exactly one place.  The module also provides Gauss-Jordan elimination
with full pivoting, a null-space basis, and a pseudoinverse solve --
the three dense kernels the set algebra needs.
"""

import numpy as np
import scipy.linalg
from scipy.optimize import linprog


class NumericalError(RuntimeError):
    """The LP backend failed; the result would be untrustworthy.

    Raised instead of silently returning a wrong answer.  Distinct from
    an LP being infeasible or unbounded, which are legitimate outcomes.
    """


OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
FAILURE = "numerical-failure"

# Feasibility tolerance used when sanity-checking solver output.
LP_TOL = 1e-6


class LinearProgram:
    """minimize (or maximize) objective @ x subject to

        a_ub @ x <= b_ub,    a_eq @ x == b_eq,    lo <= x <= hi

    with lo/hi allowing +-inf entries.
    """

    def __init__(self, objective, a_ub=None, b_ub=None, a_eq=None, b_eq=None,
                 lo=None, hi=None, maximize=False):
        self.objective = np.asarray(objective, dtype=float).reshape(-1)
        n = self.objective.size
        self.a_ub, self.b_ub = _check_rows(a_ub, b_ub, n, "a_ub")
        self.a_eq, self.b_eq = _check_rows(a_eq, b_eq, n, "a_eq")
        self.lo = np.full(n, -np.inf) if lo is None else np.asarray(lo, dtype=float).reshape(-1)
        self.hi = np.full(n, np.inf) if hi is None else np.asarray(hi, dtype=float).reshape(-1)
        if self.lo.size != n or self.hi.size != n:
            raise ValueError("bounds length does not match the objective")
        self.maximize = bool(maximize)

    @property
    def n_vars(self):
        return self.objective.size


def _check_rows(a, b, n, name):
    if a is None:
        return np.zeros((0, n)), np.zeros(0)
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError(f"{name} must be a matrix with {n} columns")
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size != a.shape[0]:
        raise ValueError(f"{name} rows and rhs length differ")
    return a, b


class LpOutcome:
    """Solver verdict: status, solution vector (iff optimal), objective value."""

    def __init__(self, status, x=None, value=None):
        self.status = status
        self.x = x
        self.value = value

    @property
    def ok(self):
        return self.status == OPTIMAL

    def __repr__(self):
        return f"LpOutcome({self.status}, value={self.value})"


def solve_lp(p, tol=None):
    """Solve a :class:`LinearProgram` and classify the outcome.

    The returned solution of an optimal outcome is verified feasible to
    1e-6; a violation is reported as numerical-failure rather than
    returned silently.  ``tol`` overrides the backend's feasibility
    tolerances when given.
    """
    n = p.n_vars
    if n == 0:
        # Degenerate but legal: no variables. Feasible iff the constant
        # constraints hold.
        feas = (p.b_ub >= -LP_TOL).all() and (np.abs(p.b_eq) <= LP_TOL).all()
        return LpOutcome(OPTIMAL, np.zeros(0), 0.0) if feas else LpOutcome(INFEASIBLE)

    c = -p.objective if p.maximize else p.objective
    bounds = list(zip(p.lo, p.hi))
    options = {}
    if tol is not None:
        options["primal_feasibility_tolerance"] = tol
        options["dual_feasibility_tolerance"] = tol
    try:
        res = linprog(
            c,
            A_ub=p.a_ub if p.a_ub.size else None,
            b_ub=p.b_ub if p.a_ub.size else None,
            A_eq=p.a_eq if p.a_eq.size else None,
            b_eq=p.b_eq if p.a_eq.size else None,
            bounds=bounds,
            method="highs",
            options=options or None,
        )
    except Exception as exc:  # solver blew up outright
        raise NumericalError(f"LP backend raised: {exc}") from exc

    if res.status == 2:
        return LpOutcome(INFEASIBLE)
    if res.status == 3:
        return LpOutcome(UNBOUNDED)
    if res.status != 0 or res.x is None:
        return LpOutcome(FAILURE)

    x = np.asarray(res.x, dtype=float)
    if not _feasible(p, x, LP_TOL):
        return LpOutcome(FAILURE)
    value = float(p.objective @ x)
    return LpOutcome(OPTIMAL, x, value)


def _feasible(p, x, tol):
    scale = max(1.0, float(np.abs(x).max(initial=0.0)))
    if p.a_ub.size and (p.a_ub @ x - p.b_ub).max(initial=-np.inf) > tol * scale:
        return False
    if p.a_eq.size and np.abs(p.a_eq @ x - p.b_eq).max(initial=0.0) > tol * scale:
        return False
    if (x - p.hi).max(initial=-np.inf) > tol or (p.lo - x).max(initial=-np.inf) > tol:
        return False
    return True


def gauss_jordan_full_pivot(A, b, tol=1e-9):
    """Reduce [A | b] to reduced row-echelon form with full pivoting.

    Row operations are accumulated so the reduction is reversible, and
    column swaps are recorded as a permutation of the original columns.

    Returns ``(R, d, info)`` with

        R = info["row_transform"] @ A[:, info["col_perm"]]
        d = info["row_transform"] @ b

    ``info`` also carries ``rank``, ``zero_rows`` (indices of reduced
    rows with no pivot -- rank deficiency), and ``inconsistent_rows``
    (zero rows whose rhs is nonzero, i.e. an infeasible system).
    Rank deficiency is reported, never raised.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float).reshape(-1)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    m, n = A.shape
    if b.size != m:
        raise ValueError("row count of A must equal the length of b")

    T = np.eye(m)
    col_perm = np.arange(n)
    scale = np.abs(A).max(initial=0.0)
    thresh = tol * max(scale, 1e-300)

    rank = 0
    for k in range(min(m, n)):
        sub = np.abs(A[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= thresh:
            break
        pr, pc = k + i, k + j
        if pr != k:
            A[[k, pr]] = A[[pr, k]]
            T[[k, pr]] = T[[pr, k]]
            b[[k, pr]] = b[[pr, k]]
        if pc != k:
            A[:, [k, pc]] = A[:, [pc, k]]
            col_perm[[k, pc]] = col_perm[[pc, k]]
        piv = A[k, k]
        A[k] /= piv
        T[k] /= piv
        b[k] /= piv
        for r in range(m):
            if r == k:
                continue
            f = A[r, k]
            if f != 0.0:
                A[r] -= f * A[k]
                T[r] -= f * T[k]
                b[r] -= f * b[k]
        rank += 1

    zero_rows = list(range(rank, m))
    rhs_scale = max(np.abs(b).max(initial=0.0), 1.0)
    inconsistent = [r for r in zero_rows if abs(b[r]) > tol * rhs_scale]
    info = {
        "rank": rank,
        "col_perm": col_perm,
        "row_transform": T,
        "zero_rows": zero_rows,
        "inconsistent_rows": inconsistent,
    }
    return A, b, info


def nullspace_basis(A):
    """Orthonormal basis for the null space of a full-row-rank A.

    Columns of the returned T satisfy A @ T = 0 (to 1e-9) and number
    exactly cols(A) - rows(A).  Rank-deficient input is rejected; run
    :func:`gauss_jordan_full_pivot` first and drop the zero rows.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    m, n = A.shape
    if m == 0:
        return np.eye(n)
    T = scipy.linalg.null_space(A)
    if T.shape[1] != n - m:
        raise ValueError(
            f"A is rank deficient ({n - T.shape[1]} of {m} rows independent); "
            "preprocess with gauss_jordan_full_pivot"
        )
    return T


def pinv_solve(A, b):
    """Minimum-norm least-squares solution of A @ s = b (s = pinv(A) b)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    if A.shape[0] == 0:
        return np.zeros(A.shape[1])
    s, *_ = np.linalg.lstsq(A, b, rcond=None)
    return s


### LP assembly over named variable blocks ##################################
#
# The containment and scaling programs all share a shape: a handful of
# matrix/vector unknowns tied together by linear identities plus
# row-wise absolute-value budgets.  Absolute values are encoded by
# splitting a matrix into nonnegative parts P - N; any feasible split
# certifies the underlying constraint (the row sums of P + N
# over-estimate |P - N| row sums), and every true certificate is
# representable by the canonical split, so feasibility is preserved in
# both directions.

class LpBuilder:
    """Assemble a LinearProgram from named variable blocks.

    Blocks are vectors or matrices; matrices enter the flat variable
    vector in column-major order, so coefficient matrices built with
    :func:`lin_coeff` line up with them.
    """

    def __init__(self):
        self._offset = {}
        self._shape = {}
        self._n = 0
        self._lo = []
        self._hi = []
        self._eq = []
        self._le = []
        self._obj = None
        self._maximize = False

    def var(self, name, shape, lo=-np.inf, hi=np.inf):
        if name in self._offset:
            raise ValueError(f"duplicate variable block {name!r}")
        shape = (int(shape),) if np.isscalar(shape) else tuple(int(s) for s in shape)
        size = int(np.prod(shape))
        self._offset[name] = self._n
        self._shape[name] = shape
        self._n += size
        self._lo.append(np.full(size, lo, dtype=float))
        self._hi.append(np.full(size, hi, dtype=float))
        return name

    def size(self, name):
        return int(np.prod(self._shape[name]))

    def eq(self, terms, rhs):
        """Add rows  sum_name terms[name] @ x_name == rhs."""
        self._eq.append((terms, np.asarray(rhs, dtype=float).reshape(-1)))

    def le(self, terms, rhs):
        self._le.append((terms, np.asarray(rhs, dtype=float).reshape(-1)))

    def objective(self, terms, maximize=False):
        self._obj = terms
        self._maximize = maximize

    def _assemble(self, rows):
        mats, rhss = [], []
        for terms, rhs in rows:
            k = rhs.size
            M = np.zeros((k, self._n))
            for name, coeff in terms.items():
                coeff = np.asarray(coeff, dtype=float)
                if coeff.ndim == 1:
                    coeff = coeff.reshape(k, -1)
                off = self._offset[name]
                M[:, off:off + self.size(name)] = coeff
            mats.append(M)
            rhss.append(rhs)
        if not mats:
            return None, None
        return np.vstack(mats), np.concatenate(rhss)

    def build(self):
        c = np.zeros(self._n)
        if self._obj:
            for name, coeff in self._obj.items():
                off = self._offset[name]
                c[off:off + self.size(name)] = np.asarray(coeff, dtype=float).reshape(-1)
        a_ub, b_ub = self._assemble(self._le)
        a_eq, b_eq = self._assemble(self._eq)
        return LinearProgram(
            c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq,
            lo=np.concatenate(self._lo) if self._lo else None,
            hi=np.concatenate(self._hi) if self._hi else None,
            maximize=self._maximize,
        )

    def value(self, x, name):
        """Extract a named block from a solution vector."""
        off = self._offset[name]
        shape = self._shape[name]
        block = x[off:off + self.size(name)]
        if len(shape) == 1:
            return block.copy()
        return block.reshape(shape, order="F")


def optimize_scaling(builder, phi_name, norm, maximize, fw_iters=40):
    """Optimize ||phi||_norm over the constraint set loaded in a builder.

    ``norm`` is 1, 2 or "inf".  The 1-norm and inf-norm cases are
    single LPs (the inf-norm couples phi to a fresh bound variable
    shared by every entry).  The 2-norm is quadratic: minimization is
    delegated to cvxpy (optional dependency), maximization -- a convex
    maximization, so NP-hard in general -- is handled by iterated
    linearization from the 1-norm optimum and is a documented local
    optimum, not a global one.

    Returns the full solution vector; raises on infeasibility with the
    outcome attached (callers map this to their own domain errors).
    """
    norm = str(norm).lower()
    if norm not in ("1", "2", "inf"):
        raise ValueError("norm must be 1, 2 or 'inf'")
    m = builder.size(phi_name)
    ones = np.ones(m)

    if norm == "1" or (norm == "2" and maximize):
        builder.objective({phi_name: ones}, maximize=maximize)
        out = solve_lp(builder.build())
        _require_optimal(out)
        x = out.x
        if norm == "1":
            return x
        # 2-norm maximization: iterate linearizations of the gradient.
        prev = -np.inf
        for _ in range(fw_iters):
            phi = builder.value(x, phi_name)
            nrm = float(np.linalg.norm(phi))
            if nrm <= prev + 1e-12:
                break
            prev = nrm
            grad = phi / nrm if nrm > 0 else ones
            builder.objective({phi_name: grad}, maximize=True)
            out = solve_lp(builder.build())
            _require_optimal(out)
            x = out.x
        return x

    if norm == "inf":
        t = builder.var("_phi_bound", 1)
        S = np.eye(m)
        tcol = np.ones((m, 1))
        if maximize:
            # max t with t <= phi_i for all i.
            builder.le({"_phi_bound": tcol, phi_name: -S}, np.zeros(m))
        else:
            # min t with phi_i <= t for all i.
            builder.le({phi_name: S, "_phi_bound": -tcol}, np.zeros(m))
        builder.objective({"_phi_bound": np.ones(1)}, maximize=maximize)
        out = solve_lp(builder.build())
        _require_optimal(out)
        return out.x

    # norm == "2", minimize: a QP; use cvxpy when available.
    p = builder.build()
    off = builder._offset[phi_name]
    sl = slice(off, off + m)
    return _min_norm2(p, sl)


class InfeasibleProgram(Exception):
    """Raised by optimize_scaling when the constraint set is empty."""

    def __init__(self, outcome):
        super().__init__(f"program is {outcome.status}")
        self.outcome = outcome


def _require_optimal(out):
    if out.status == INFEASIBLE:
        raise InfeasibleProgram(out)
    if out.status == UNBOUNDED:
        raise NumericalError("scaling program is unbounded; the enclosing "
                             "set is not bounded or the template is degenerate")
    if not out.ok:
        raise NumericalError(f"scaling program failed: {out.status}")


def _min_norm2(p, sl):
    try:
        import cvxpy as cp
    except ImportError as exc:
        raise NumericalError(
            "2-norm minimization needs cvxpy (install the 'qp' extra); "
            "norms 1 and inf are pure-LP"
        ) from exc
    x = cp.Variable(p.n_vars)
    cons = []
    if p.a_ub.size:
        cons.append(p.a_ub @ x <= p.b_ub)
    if p.a_eq.size:
        cons.append(p.a_eq @ x == p.b_eq)
    lo_f = np.isfinite(p.lo)
    hi_f = np.isfinite(p.hi)
    if lo_f.any():
        cons.append(x[np.flatnonzero(lo_f)] >= p.lo[lo_f])
    if hi_f.any():
        cons.append(x[np.flatnonzero(hi_f)] <= p.hi[hi_f])
    prob = cp.Problem(cp.Minimize(cp.sum_squares(x[sl])), cons)
    prob.solve()
    if prob.status in ("infeasible", "infeasible_inaccurate"):
        raise InfeasibleProgram(LpOutcome(INFEASIBLE))
    if x.value is None:
        raise NumericalError(f"QP solver returned {prob.status}")
    return np.asarray(x.value, dtype=float).reshape(-1)


def lin_coeff(shape, left=None, right=None):
    """Coefficient matrix C with C @ vec(X) = vec(left @ X @ right).

    ``vec`` is column-major; ``shape`` is the shape of X; a missing
    factor defaults to the identity.
    """
    r, c = shape
    L = np.eye(r) if left is None else np.asarray(left, dtype=float)
    R = np.eye(c) if right is None else np.asarray(right, dtype=float)
    return np.kron(R.T, L)


def row_abs_coeff(shape):
    """Coefficient matrix S with S @ vec(X) = row sums of X (column-major vec).

    Applied to both halves of a nonnegative split this yields the
    row-wise absolute-value sums |X| 1.
    """
    r, c = shape
    return np.kron(np.ones((1, c)), np.eye(r)).reshape(r, r * c)
