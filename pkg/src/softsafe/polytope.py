"""Halfspace polyhedra and the maximal positive invariant set.

A polyhedron is stored as {e | H e <= h}. Redundancy removal and inclusion
tests are LPs solved by :mod:`softsafe.lp`; all comparisons use an absolute
slack tolerance (``TOL``).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from softsafe import lp
from softsafe.errors import DimensionMismatch, DomainError, EmptySet, NoConvergence

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    H: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        H = np.atleast_2d(np.asarray(self.H, dtype=float))
        h = np.asarray(self.h, dtype=float).ravel()
        if H.shape[0] != h.size:
            raise DimensionMismatch(f"H has {H.shape[0]} rows but h has {h.size} entries")
        if H.shape[0] < 1 or H.shape[1] < 1:
            raise DimensionMismatch("a polyhedron needs at least one row and one dimension")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "h", h)

    @property
    def dim(self):
        return self.H.shape[1]

    @property
    def n_rows(self):
        return self.H.shape[0]

    def contains(self, e, tol=TOL):
        """Membership test; ``e`` may be a point or an (N, dim) batch."""
        e = np.asarray(e, dtype=float)
        if e.ndim == 1:
            return bool(np.all(self.H @ e <= self.h + tol))
        return np.all(e @ self.H.T <= self.h + tol, axis=1)

    def is_empty(self):
        return not lp.is_feasible(self.H, self.h)

    def support(self, direction):
        """max direction @ e over the set (inf if unbounded, -inf if empty)."""
        res = lp.linprog_max(direction, self.H, self.h)
        if res.status == lp.UNBOUNDED:
            return np.inf
        if res.status == lp.INFEASIBLE:
            return -np.inf
        return res.value

    def bounding_box(self):
        eye = np.eye(self.dim)
        upper = np.array([self.support(d) for d in eye])
        lower = np.array([-self.support(-d) for d in eye])
        return lower, upper

    def to_text(self):
        """Plain-text form: ``n r`` then one ``coeffs... offset`` line per row."""
        lines = [f"{self.dim} {self.n_rows}"]
        for row, off in zip(self.H, self.h):
            lines.append(" ".join(repr(float(v)) for v in (*row, off)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, r = (int(tok) for tok in lines[0].split())
        if len(lines) - 1 != r:
            raise DimensionMismatch(f"header declares {r} rows, found {len(lines) - 1}")
        rows = np.array([[float(tok) for tok in ln.split()] for ln in lines[1:]])
        if rows.shape[1] != n + 1:
            raise DimensionMismatch(f"expected {n + 1} numbers per row, got {rows.shape[1]}")
        return cls(rows[:, :n], rows[:, n])

    def __repr__(self):
        return f"HPolyhedron(dim={self.dim}, rows={self.n_rows})"


def _check_same_dim(P, Q):
    if P.dim != Q.dim:
        raise DimensionMismatch(f"dimensions differ: {P.dim} vs {Q.dim}")


def safe_set(w_lb):
    """Error-coordinate safe set for one augmented actuator.

    ``w_lb`` is the distance of the physical lower bound below the maximum,
    so the set is -w_lb <= e1 <= 0 with the affine coordinate pinned at
    e2 = 0 (kept as two opposing inequalities).
    """
    if not w_lb > 0:
        raise DomainError(f"lower bound must be positive in error coordinates, got {w_lb}", "w_lb")
    H = np.array([[-1.0, 0.0],
                  [0.0, -1.0],
                  [1.0, 0.0],
                  [0.0, 1.0]])
    h = np.array([float(w_lb), 0.0, 0.0, 0.0])
    return HPolyhedron(H, h)


def pre_image(A, P):
    """States mapped into ``P`` by one step of e -> A e. No minimization."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"dynamics matrix must be square, got {A.shape}")
    if A.shape[0] != P.dim:
        raise DimensionMismatch(f"matrix is {A.shape[0]}-dimensional, set is {P.dim}-dimensional")
    return HPolyhedron(P.H @ A, P.h.copy())


def minimize(P, tol=TOL):
    """Drop every row implied by the others.

    Rows are tested in order against the rows still kept, so of two
    duplicates the later one survives. Raises :class:`EmptySet` for an
    infeasible system.
    """
    if P.is_empty():
        raise EmptySet("constraint system is infeasible")
    keep = np.ones(P.n_rows, dtype=bool)
    for i in range(P.n_rows):
        others = keep.copy()
        others[i] = False
        res = lp.linprog_max(P.H[i], P.H[others], P.h[others])
        if res.status == lp.OPTIMAL and res.value <= P.h[i] + tol:
            keep[i] = False
    if not keep.any():
        # every row was vacuous: the whole space
        return HPolyhedron(np.zeros((1, P.dim)), [0.0])
    return HPolyhedron(P.H[keep], P.h[keep])


def intersect(P, Q, tol=TOL):
    _check_same_dim(P, Q)
    stacked = HPolyhedron(np.vstack([P.H, Q.H]), np.concatenate([P.h, Q.h]))
    return minimize(stacked, tol)


def is_subset(P, Q, tol=TOL):
    """True iff P is contained in Q. An empty P is a subset of anything."""
    _check_same_dim(P, Q)
    if P.is_empty():
        return True
    for q, qh in zip(Q.H, Q.h):
        res = lp.linprog_max(q, P.H, P.h)
        if res.status == lp.UNBOUNDED or res.value > qh + tol:
            return False
    return True


def set_equal(P, Q, tol=TOL):
    return is_subset(P, Q, tol) and is_subset(Q, P, tol)


def spectral_radius(A):
    return float(np.max(np.abs(np.linalg.eigvals(np.atleast_2d(A)))))


def max_invariant_set(A, S, max_iters=100, tol=TOL):
    """Maximal positive invariant subset of ``S`` under e -> A e.

    Iterates O <- Pre(A, O) intersected with O from O = S until the set
    stops changing. Returns ``(O_inf, iterations)`` where ``iterations`` is
    the number of updates performed when equality was detected (1 when S
    is already invariant).
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    rho = spectral_radius(A)
    if rho >= 1.0:
        warnings.warn(f"spectral radius {rho:.6g} >= 1; the iteration may not terminate",
                      RuntimeWarning, stacklevel=2)
    current = S
    for j in range(1, max_iters + 1):
        nxt = intersect(pre_image(A, current), current, tol)
        if set_equal(nxt, current, tol):
            return nxt, j
        current = nxt
    raise NoConvergence(f"no fixed point after {max_iters} iterations",
                        last=current, iterations=max_iters)
