import numpy as np
import pytest

from qcondprob import (
    Apparatus,
    Chain,
    UndefinedProbabilityError,
    ValidationError,
    complement,
    conditioned_on_record,
    evaluate_chain,
    is_orthogonal,
    sample_chain,
    spin_projector,
    spin_vector,
    transition_prob,
)
from qcondprob.experiments import (
    MODE_BLOCK,
    MODE_PASS,
    RULE_BLOCK,
    RULE_COHERENT_JOIN,
    RULE_INCOHERENT_SPLIT,
)
from qcondprob.fixtures import blocked_chain, detector_chain, rejoined_chain

from helpers import random_projection, random_rank1


def test_spin_projector_conventions():
    zp = spin_projector("z", "+")
    assert np.allclose(zp.matrix, np.diag([1.0, 0.0]))
    zm = spin_projector("z", "-")
    assert np.allclose(zm.matrix, np.diag([0.0, 1.0]))
    xp = spin_projector("x", "+")
    assert np.allclose(xp.matrix, np.array([[0.5, 0.5], [0.5, 0.5]]))
    yp = spin_projector("y", "+")
    assert np.allclose(yp.matrix, np.array([[0.5, -0.5j], [0.5j, 0.5]]))
    for axis in ("x", "y", "z"):
        plus = spin_projector(axis, "+")
        minus = spin_projector(axis, "-")
        assert plus.is_minimal() and minus.is_minimal()
        assert is_orthogonal(plus, minus)
        assert np.allclose(plus.matrix + minus.matrix, np.eye(2))
        # The named vector spans the same ray as the projector.
        assert np.allclose(spin_vector(axis, "+").projector().matrix, plus.matrix)
    assert spin_projector("Z", "+").rank == 1
    with pytest.raises(ValidationError):
        spin_projector("w", "+")
    with pytest.raises(ValidationError):
        spin_projector("x", "up")
    with pytest.raises(ValidationError):
        spin_vector("q", "-")


def test_spin_transition_probabilities():
    assert abs(transition_prob(spin_vector("z", "+"), spin_vector("x", "+")) - 0.5) < 1e-15
    assert abs(transition_prob(spin_vector("x", "+"), spin_vector("y", "-")) - 0.5) < 1e-15
    assert transition_prob(spin_vector("y", "+"), spin_vector("y", "+")) == 1.0


def test_apparatus_validation():
    xp = spin_projector("x", "+")
    Apparatus(xp)
    Apparatus(xp, mode=MODE_BLOCK)
    Apparatus(xp, mode=MODE_PASS, detector="negation")
    with pytest.raises(ValidationError):
        Apparatus(xp.matrix)
    with pytest.raises(ValidationError):
        Apparatus(xp, mode="absorb_everything")
    with pytest.raises(ValidationError):
        Apparatus(xp, detector="sideways")
    with pytest.raises(ValidationError):
        Apparatus(xp, mode=MODE_BLOCK, detector="positive")


def test_chain_validation():
    zp = spin_projector("z", "+")
    xp = spin_projector("x", "+")
    wide = complement(zp)
    chain = Chain(zp, [Apparatus(xp)], zp)
    assert isinstance(chain.apparatuses, tuple)
    assert chain.dim == 2
    import qcondprob

    with pytest.raises(ValidationError):
        Chain(qcondprob.identity_event(2), [], zp)
    with pytest.raises(ValidationError):
        Chain(zp, [xp], zp)
    big = qcondprob.validate_event(np.diag([1.0, 0.0, 0.0]))
    with pytest.raises(ValidationError):
        Chain(zp, [Apparatus(big)], zp)
    with pytest.raises(ValidationError):
        Chain(zp, [], big)
    assert wide.rank == 1  # complement of a minimal qubit event stays minimal


def test_rejoined_apparatus_cannot_matter():
    evaluation = evaluate_chain(rejoined_chain())
    assert abs(evaluation.value - 1.0) <= 1e-12
    assert len(evaluation.steps) == 1
    step = evaluation.steps[0]
    assert step.rule == RULE_COHERENT_JOIN
    assert step.apparatus_index == 0
    assert "certain" in step.note


def test_blocking_apparatus_conditions():
    evaluation = evaluate_chain(blocked_chain())
    assert abs(evaluation.value - 0.5) <= 1e-12
    assert [s.rule for s in evaluation.steps] == [RULE_BLOCK]


def test_detector_apparatus_splits_incoherently():
    evaluation = evaluate_chain(detector_chain())
    assert abs(evaluation.value - 0.5) <= 1e-12
    assert [s.rule for s in evaluation.steps] == [RULE_INCOHERENT_SPLIT, RULE_INCOHERENT_SPLIT]
    branches = {s.branch: s.weight for s in evaluation.steps}
    assert abs(branches["positive"] - 0.5) < 1e-12
    assert abs(branches["negation"] - 0.5) < 1e-12
    assert any("which-way record" in s.note for s in evaluation.steps)


def test_rejoined_equals_deleted_apparatus():
    rng = np.random.default_rng(443)
    for _ in range(25):
        dim = int(rng.integers(2, 6))
        prep = random_rank1(rng, dim)
        tested = random_projection(rng, dim, int(rng.integers(1, dim)))
        final = random_projection(rng, dim, int(rng.integers(1, dim + 1)))
        with_app = Chain(prep, [Apparatus(tested)], final)
        without = Chain(prep, [], final)
        assert abs(evaluate_chain(with_app).value - evaluate_chain(without).value) < 1e-12


def test_two_blocking_apparatuses_compose():
    zp = spin_projector("z", "+")
    chain = Chain(
        zp,
        [Apparatus(spin_projector("x", "+"), mode=MODE_BLOCK),
         Apparatus(spin_projector("y", "+"), mode=MODE_BLOCK)],
        zp,
    )
    assert abs(evaluate_chain(chain).value - 0.5) < 1e-12


def test_unreachable_detector_branch_is_noted():
    zp = spin_projector("z", "+")
    chain = Chain(zp, [Apparatus(zp, detector="positive")], zp)
    evaluation = evaluate_chain(chain)
    assert abs(evaluation.value - 1.0) <= 1e-12
    dead = [s for s in evaluation.steps if s.weight == 0.0]
    assert len(dead) == 1
    assert dead[0].branch == "negation"
    assert "unreachable" in dead[0].note


def test_blocking_an_impossible_event_leaves_nothing():
    zp = spin_projector("z", "+")
    zm = spin_projector("z", "-")
    chain = Chain(zp, [Apparatus(zm, mode=MODE_BLOCK)], zp)
    with pytest.raises(UndefinedProbabilityError):
        evaluate_chain(chain)


def test_conditioned_on_record_values():
    chain = detector_chain()
    assert abs(conditioned_on_record(chain, "positive") - 0.5) < 1e-12
    assert abs(conditioned_on_record(chain, "negation") - 0.5) < 1e-12
    # Recording the outlet decides a later test of the same event.
    zp = spin_projector("z", "+")
    xp = spin_projector("x", "+")
    deciding = Chain(zp, [Apparatus(xp, detector="positive")], xp)
    assert abs(conditioned_on_record(deciding, "positive") - 1.0) < 1e-12
    assert abs(conditioned_on_record(deciding, "negation") - 0.0) < 1e-12
    with pytest.raises(ValidationError):
        conditioned_on_record(chain, "both")
    with pytest.raises(ValidationError):
        conditioned_on_record(blocked_chain(), "positive")
    two = Chain(zp, [Apparatus(xp, detector="positive"), Apparatus(xp, detector="positive")], zp)
    with pytest.raises(ValidationError):
        conditioned_on_record(two, "positive")


def test_record_conditioning_skips_other_apparatus_kinds():
    zp = spin_projector("z", "+")
    xp = spin_projector("x", "+")
    yp = spin_projector("y", "+")
    chain = Chain(
        zp,
        [Apparatus(yp),  # rejoined, must not affect anything
         Apparatus(xp, detector="positive"),
         Apparatus(yp, mode=MODE_BLOCK)],
        zp,
    )
    plain = Chain(zp, [Apparatus(xp, detector="positive"), Apparatus(yp, mode=MODE_BLOCK)], zp)
    for record in ("positive", "negation"):
        assert abs(conditioned_on_record(chain, record) - conditioned_on_record(plain, record)) < 1e-12


def test_sample_chain_is_deterministic():
    chain = detector_chain()
    a = sample_chain(chain, trials=20000, seed=42)
    b = sample_chain(chain, trials=20000, seed=42)
    assert a == b
    c = sample_chain(chain, trials=20000, seed=43)
    assert c.outcome_counts != a.outcome_counts


def test_sample_chain_counts_and_frequencies():
    report = sample_chain(detector_chain(), trials=20000, seed=42)
    assert sum(report.outcome_counts.values()) == 20000
    assert "blocked" not in report.outcome_counts
    assert abs(report.frequencies["positive"] + report.frequencies["negation"] - 1.0) < 1e-15
    assert report.analytic == {"positive": 0.5, "negation": 0.5}
    assert report.max_abs_deviation < 0.02
    assert sum(report.detector_counts.values()) == 20000
    assert set(report.detector_counts) == {"apparatus0:positive", "apparatus0:negation"}


def test_sample_chain_blocked_trials_are_excluded():
    report = sample_chain(blocked_chain(), trials=20000, seed=42)
    assert "blocked" in report.outcome_counts
    survivors = report.outcome_counts["positive"] + report.outcome_counts["negation"]
    assert survivors + report.outcome_counts["blocked"] == 20000
    assert abs(report.frequencies["positive"] - report.outcome_counts["positive"] / survivors) < 1e-15
    assert report.max_abs_deviation < 0.02
    assert report.detector_counts == {}


def test_sample_chain_certain_outcome_is_exact():
    report = sample_chain(rejoined_chain(), trials=5000, seed=42)
    assert report.outcome_counts == {"positive": 5000, "negation": 0}
    assert report.frequencies["positive"] == 1.0


def test_sample_chain_worker_split():
    chain = detector_chain()
    split = sample_chain(chain, trials=999, seed=11, workers=4)
    again = sample_chain(chain, trials=999, seed=11, workers=4)
    assert split == again
    assert sum(split.outcome_counts.values()) == 999
    assert split.workers == 4
    lone = sample_chain(chain, trials=999, seed=11, workers=1)
    assert lone.workers == 1
    # More workers than trials still runs and still sums correctly.
    sparse = sample_chain(chain, trials=3, seed=11, workers=8)
    assert sum(sparse.outcome_counts.values()) == 3


def test_sample_chain_validation():
    chain = detector_chain()
    with pytest.raises(ValidationError):
        sample_chain(chain, trials=0, seed=1)
    with pytest.raises(ValidationError):
        sample_chain(chain, trials=2.5, seed=1)
    with pytest.raises(ValidationError):
        sample_chain(chain, trials=10, seed=1, workers=0)


def test_sample_chain_with_nothing_surviving():
    zp = spin_projector("z", "+")
    zm = spin_projector("z", "-")
    chain = Chain(zp, [Apparatus(zm, mode=MODE_BLOCK)], zm)
    with pytest.raises(UndefinedProbabilityError):
        sample_chain(chain, trials=50, seed=3)
