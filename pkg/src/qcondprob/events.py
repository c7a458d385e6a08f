"""Events as orthogonal projection matrices.

An event is a self-adjoint idempotent matrix (``e = adjoint(e) = e @ e``).
Its trace equals its rank, which counts the dimensions the event occupies.
Rank-1 events are minimal: they cannot be split into smaller nonzero
events.  The logical structure lives in the matrix algebra:

* negation is the complement ``identity - e``,
* mutual exclusion is ``e @ f == 0``,
* implication ``f <= e`` is absorption ``e @ f == f``,
* conjunction is the lattice meet, the projection onto the intersection
  of the two ranges.

No eigendecomposition is used anywhere; ranks come from traces and the
meet comes from a fixed-point iteration on products.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, ValidationError
from .linalg import as_complex_matrix, identity
from .tolerances import DEFAULT_TOL, Tolerances

# Fixed-point iteration controls for lattice_meet.  The step threshold is
# deliberately tighter than user-facing tolerances so the returned matrix
# passes event validation with room to spare.
_MEET_STEP_TOL = 1e-12
_MEET_MAX_ITER = 10000


class Event:
    """A validated orthogonal projection.

    Instances are immutable; ``matrix`` is a read-only complex array and
    ``rank`` the integer trace.  Construct via :func:`validate_event` or
    the module helpers rather than trusting raw matrices.
    """

    __slots__ = ("_matrix", "_rank")

    def __init__(self, matrix: np.ndarray, rank: int):
        m = np.array(matrix, dtype=np.complex128)
        m.setflags(write=False)
        self._matrix = m
        self._rank = int(rank)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def is_zero(self) -> bool:
        return self._rank == 0

    def is_identity(self) -> bool:
        return self._rank == self.dim

    def is_minimal(self) -> bool:
        """True for rank-1 events, the atoms of the event lattice."""
        return self._rank == 1

    def __repr__(self) -> str:
        return f"Event(dim={self.dim}, rank={self._rank})"


def validate_event(matrix, tol: Tolerances = DEFAULT_TOL) -> Event:
    """Check that a matrix is an orthogonal projection and wrap it.

    Requires self-adjointness, idempotence and a trace within tolerance
    of a nonnegative integer, all at Frobenius scale.  The stored rank is
    that integer.  Raises :class:`ValidationError` with the failed
    property named.
    """
    m = as_complex_matrix(matrix)
    scale = 1.0 + float(np.linalg.norm(m, "fro"))
    budget = tol.atol + tol.rtol * scale
    if float(np.linalg.norm(m - m.conj().T, "fro")) > budget:
        raise ValidationError("event matrix is not self-adjoint within tolerance")
    if float(np.linalg.norm(m @ m - m, "fro")) > budget:
        raise ValidationError("event matrix is not idempotent within tolerance")
    tr = complex(np.trace(m))
    rank = int(round(tr.real))
    if abs(tr - rank) > budget or rank < 0 or rank > m.shape[0]:
        raise ValidationError(f"event trace {tr!r} is not a valid rank for dimension {m.shape[0]}")
    return Event(m, rank)


def zero_event(dim: int) -> Event:
    """The impossible event."""
    return Event(np.zeros((dim, dim), dtype=np.complex128), 0)


def identity_event(dim: int) -> Event:
    """The certain event."""
    return Event(identity(dim), dim)


def _check_same_space(e: Event, f: Event) -> None:
    if e.dim != f.dim:
        raise ValidationError(f"events live in different dimensions: {e.dim} vs {f.dim}")


def complement(e: Event) -> Event:
    """Negation: the projection onto the orthogonal complement of e."""
    return Event(identity(e.dim) - e.matrix, e.dim - e.rank)


def is_orthogonal(e: Event, f: Event, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Mutual exclusion: the product e @ f vanishes.

    Symmetric for events, since ``f @ e`` is the adjoint of ``e @ f``.
    """
    _check_same_space(e, f)
    return float(np.linalg.norm(e.matrix @ f.matrix, "fro")) <= tol.atol + tol.rtol


def implies(f: Event, e: Event, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when f is contained in e (f <= e), i.e. e absorbs f: e @ f == f."""
    _check_same_space(f, e)
    diff = e.matrix @ f.matrix - f.matrix
    return float(np.linalg.norm(diff, "fro")) <= tol.atol + tol.rtol * (1.0 + float(np.linalg.norm(f.matrix, "fro")))


def commutes(e: Event, f: Event, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when e @ f == f @ e within tolerance."""
    _check_same_space(e, f)
    scale = 1.0 + float(np.linalg.norm(e.matrix, "fro")) * float(np.linalg.norm(f.matrix, "fro"))
    return float(np.linalg.norm(e.matrix @ f.matrix - f.matrix @ e.matrix, "fro")) <= tol.atol + tol.rtol * scale


def lattice_meet(e: Event, f: Event, tol: Tolerances = DEFAULT_TOL, max_iter: int = _MEET_MAX_ITER) -> Event:
    """Conjunction: the projection onto range(e) intersected with range(f).

    Three cases, cheapest first:

    * commuting events: the product ``e @ f`` is already the meet;
    * two minimal events: distinct rank-1 events can only meet in zero,
      so the answer is ``e`` when they coincide and the zero event
      otherwise;
    * general case: iterate ``a <- (e @ f) @ a @ (f @ e)`` from
      ``a = e``.  Each step squares the contraction of the non-shared
      directions, so the iterate collapses quadratically onto the common
      subspace.  Iteration stops once a step moves less than 1e-12 in
      Frobenius norm; a cubic polish pass then snaps the eigenvalue dust
      onto {0, 1} before validation.

    Raises :class:`ConvergenceError` if the iteration cap is exhausted.
    """
    _check_same_space(e, f)
    if commutes(e, f, tol):
        return validate_event(e.matrix @ f.matrix, tol)
    if e.is_minimal() and f.is_minimal():
        if float(np.linalg.norm(e.matrix - f.matrix, "fro")) <= tol.atol + tol.rtol:
            return e
        return zero_event(e.dim)

    ef = e.matrix @ f.matrix
    fe = ef.conj().T
    a = e.matrix
    converged = False
    for _ in range(max_iter):
        nxt = ef @ a @ fe
        nxt = (nxt + nxt.conj().T) / 2.0
        step = float(np.linalg.norm(nxt - a, "fro"))
        a = nxt
        if step <= _MEET_STEP_TOL:
            converged = True
            break
    if not converged:
        raise ConvergenceError(f"lattice meet did not converge within {max_iter} iterations")
    # Cubic polish p -> 3p^2 - 2p^3: eigenvalues within eps of {0, 1}
    # move onto {0, 1} quadratically, removing accumulated dust.
    for _ in range(2):
        a2 = a @ a
        a = 3.0 * a2 - 2.0 * (a2 @ a)
        a = (a + a.conj().T) / 2.0
    return validate_event(a, tol)
