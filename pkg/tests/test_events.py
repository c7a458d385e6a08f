import numpy as np
import pytest

from qcondprob import (
    ConvergenceError,
    ValidationError,
    commutes,
    complement,
    identity_event,
    implies,
    is_orthogonal,
    lattice_meet,
    spin_projector,
    validate_event,
    zero_event,
)

from helpers import intersection_projector, random_projection, random_unitary


def test_validate_event_accepts_projections():
    e = validate_event(np.diag([1.0, 1.0, 0.0]))
    assert e.rank == 2
    assert e.dim == 3
    assert not e.is_minimal()
    assert validate_event(np.eye(2)).is_identity()
    assert validate_event(np.zeros((2, 2))).is_zero()


def test_validate_event_rejects_non_projections():
    with pytest.raises(ValidationError, match="self-adjoint"):
        validate_event(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValidationError, match="idempotent"):
        validate_event(np.diag([0.5, 0.5]))
    with pytest.raises(ValidationError, match="idempotent"):
        validate_event(2.0 * np.eye(2))


def test_event_matrix_is_read_only():
    e = validate_event(np.eye(2))
    with pytest.raises(ValueError):
        e.matrix[0, 0] = 5.0


def test_complement():
    e = validate_event(np.diag([1.0, 0.0, 0.0]))
    c = complement(e)
    assert c.rank == 2
    assert np.allclose(e.matrix + c.matrix, np.eye(3))
    assert np.allclose(complement(c).matrix, e.matrix)
    assert complement(identity_event(3)).is_zero()


def test_orthogonality():
    zp = spin_projector("z", "+")
    zm = spin_projector("z", "-")
    xp = spin_projector("x", "+")
    assert is_orthogonal(zp, zm)
    assert is_orthogonal(zm, zp)
    assert not is_orthogonal(zp, xp)
    assert is_orthogonal(zp, zero_event(2))


def test_implies():
    small = validate_event(np.diag([1.0, 0.0, 0.0]))
    big = validate_event(np.diag([1.0, 1.0, 0.0]))
    assert implies(small, big)
    assert not implies(big, small)
    assert implies(big, identity_event(3))
    assert implies(zero_event(3), small)
    assert implies(small, small)


def test_implies_needs_containment_not_overlap():
    xp = spin_projector("x", "+")
    zp = spin_projector("z", "+")
    assert not implies(xp, zp)
    assert not implies(zp, xp)


def test_commutes():
    a = validate_event(np.diag([1.0, 0.0, 0.0]))
    b = validate_event(np.diag([1.0, 1.0, 0.0]))
    assert commutes(a, b)
    assert not commutes(spin_projector("x", "+"), spin_projector("z", "+"))
    rng = np.random.default_rng(3)
    e = random_projection(rng, 4, 2)
    assert commutes(e, identity_event(4))
    assert commutes(e, complement(e))


def test_dimension_mismatch_raises():
    e2 = identity_event(2)
    e3 = identity_event(3)
    for fn in (is_orthogonal, implies, commutes, lattice_meet):
        with pytest.raises(ValidationError):
            fn(e2, e3)


def test_meet_commuting_is_product():
    a = validate_event(np.diag([1.0, 1.0, 0.0, 0.0]))
    b = validate_event(np.diag([0.0, 1.0, 1.0, 0.0]))
    m = lattice_meet(a, b)
    assert np.allclose(m.matrix, np.diag([0.0, 1.0, 0.0, 0.0]))
    assert lattice_meet(a, complement(a)).is_zero()
    assert np.allclose(lattice_meet(a, identity_event(4)).matrix, a.matrix)


def test_meet_of_minimal_events():
    xp = spin_projector("x", "+")
    yp = spin_projector("y", "+")
    assert lattice_meet(xp, yp).is_zero()
    assert lattice_meet(xp, xp).rank == 1
    # Nearly parallel minimal events still meet in zero: distinct lines
    # share only the origin.
    v1 = np.array([1.0, 1e-5])
    v1 = v1 / np.linalg.norm(v1)
    e1 = validate_event(np.outer(v1, v1))
    e0 = validate_event(np.diag([1.0, 0.0]))
    assert lattice_meet(e0, e1).is_zero()


def test_meet_known_intersection():
    # Two planes in dimension 4 sharing exactly one line.
    q = random_unitary(np.random.default_rng(5), 4)
    shared = q[:, 0:1]
    e = validate_event(q[:, 0:2] @ q[:, 0:2].conj().T)
    mix = (q[:, 1] + q[:, 2]) / np.sqrt(2)
    cols = np.column_stack([q[:, 0], mix])
    f = validate_event(cols @ cols.conj().T)
    assert not commutes(e, f)
    m = lattice_meet(e, f)
    assert m.rank == 1
    assert np.allclose(m.matrix, shared @ shared.conj().T, atol=1e-9)


def test_meet_matches_svd_oracle():
    rng = np.random.default_rng(41)
    for _ in range(40):
        dim = int(rng.integers(3, 7))
        shared_rank = int(rng.integers(0, 2))
        u = random_unitary(rng, dim)
        shared = u[:, :shared_rank]
        rest = u[:, shared_rank:]
        free = dim - shared_rank
        extra_e = int(rng.integers(1, max(2, free // 2 + 1)))
        extra_f = int(rng.integers(1, max(2, free // 2 + 1)))
        if extra_e + extra_f > free:
            continue
        ve = rest @ np.linalg.qr(rng.normal(size=(free, extra_e)) + 1j * rng.normal(size=(free, extra_e)))[0]
        vf = rest @ np.linalg.qr(rng.normal(size=(free, extra_f)) + 1j * rng.normal(size=(free, extra_f)))[0]
        ce = np.column_stack([shared, ve])
        cf = np.column_stack([shared, vf])
        e = validate_event(ce @ ce.conj().T)
        f = validate_event(cf @ cf.conj().T)
        m = lattice_meet(e, f)
        oracle = intersection_projector(e, f)
        assert m.rank == shared_rank
        assert np.allclose(m.matrix, oracle, atol=1e-8)


def test_meet_result_is_lower_bound():
    rng = np.random.default_rng(43)
    for _ in range(20):
        e = random_projection(rng, 5, 3)
        f = random_projection(rng, 5, 3)
        m = lattice_meet(e, f)
        assert implies(m, e)
        assert implies(m, f)


def test_meet_iteration_cap():
    e = random_projection(np.random.default_rng(47), 5, 3)
    f = random_projection(np.random.default_rng(48), 5, 3)
    with pytest.raises(ConvergenceError):
        lattice_meet(e, f, max_iter=1)


def test_event_repr():
    assert repr(identity_event(2)) == "Event(dim=2, rank=2)"
