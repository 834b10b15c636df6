from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilherm import linalg
from nilherm.catalog import abelian, example_a, example_b, heisenberg
from nilherm.exterior import Form, alpha, beta, exterior_d, wedge
from nilherm.liealg import adapted_k, algebra_invariants, change_coframe
from nilherm.metrics import NotAdaptedError, lee_form_two_step, nn_form_from_atilde
from nilherm.scalar import ONE, ZERO, Scalar
from nilherm.search import (
    find_balanced, find_lcb, metric_from_factor, pfaffian, random_adapted_algebra, rigidity_experiment,
    sample_metric, trial_rngs, two_zero_obstruction,
)

half = Fraction(1, 2)


def diag(*xs):
    n = len(xs)
    return [[Scalar(xs[i]) if i == j else ZERO for j in range(n)] for i in range(n)]


# -- sampling ----------------------------------------------------------------------------

def test_sample_metric_deterministic_and_positive():
    a = sample_metric(4, np.random.default_rng(9))
    b = sample_metric(4, np.random.default_rng(9))
    assert a == b and a.is_positive()


def test_zero_factor_gives_identity():
    assert metric_from_factor(linalg.zeros(3, 3)).rows() == diag(1, 1, 1)


def test_trial_streams_independent_of_count():
    short = [r.integers(0, 10 ** 9) for r in trial_rngs(7, 3)]
    long = [r.integers(0, 10 ** 9) for r in trial_rngs(7, 10)][:3]
    assert short == long


@given(st.integers(0, 10 ** 6), st.integers(3, 6), st.sampled_from(["mixed", "holomorphic", "abelian"]))
@settings(max_examples=40)
def test_random_adapted_algebra_is_valid(seed, n, kind):
    rng = np.random.default_rng(seed)
    alg = random_adapted_algebra(n, rng, kind=kind, complex_=bool(seed % 2))
    assert alg.validation.valid
    assert algebra_invariants(alg).step <= 2
    assert adapted_k(alg) is not None


# -- balanced search -------------------------------------------------------------------------

def test_balanced_example_b3():
    alg = example_b(3, (1, -2))
    res = find_balanced(alg)
    assert res.status == "found"
    assert res.witness.atilde == diag(1, half, 1)
    assert lee_form_two_step(alg, res.witness).balanced
    assert not res.lee


def test_balanced_example_b4():
    res = find_balanced(example_b(4, (1, 2, -1)))
    assert res.status == "found"
    assert res.witness.is_positive()
    assert lee_form_two_step(example_b(4, (1, 2, -1)), res.witness).balanced


def test_balanced_abelian_and_obstructed():
    assert find_balanced(abelian(3)).witness.atilde == diag(1, 1, 1)
    res = find_balanced(heisenberg(2))
    assert res.status == "infeasible_linear" and res.witness is None
    assert res.certificate
    assert find_balanced(example_a(1, 3)).status == "infeasible_linear"


def test_balanced_requires_adapted():
    swap = [[ZERO, ZERO, ONE], [ZERO, ONE, ZERO], [ONE, ZERO, ZERO]]
    with pytest.raises(NotAdaptedError):
        find_balanced(change_coframe(example_a(1, 3), swap))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15)
def test_balanced_witness_invariants(seed):
    rng = np.random.default_rng(seed)
    alg = random_adapted_algebra(int(rng.integers(3, 5)), rng, kind="abelian")
    res = find_balanced(alg, rng=rng, trials=200)
    assert res.status in ("found", "infeasible_linear", "no_positive_point_found")
    if res.status == "found":
        assert res.witness.is_positive()
        W = res.witness.form()
        assert not exterior_d(alg, W)
    else:
        assert res.witness is None


# -- lcb search ----------------------------------------------------------------------------------

@pytest.mark.parametrize("alg", [example_b(3, (1, -2)), abelian(3), heisenberg(2), example_a(1, 3)],
                         ids=lambda a: a.name)
def test_lcb_found(alg):
    res = find_lcb(alg)
    assert res.status == "found" and res.solution_space_dim is None
    theta = lee_form_two_step(alg, res.witness).theta
    assert theta == res.lee and not exterior_d(alg, theta)


# -- (2,0)-forms --------------------------------------------------------------------------------

def test_pfaffian_small():
    assert pfaffian([[ZERO, Scalar(3)], [Scalar(-3), ZERO]]) == 3
    J4 = [[ZERO, ONE, ZERO, ZERO], [-ONE, ZERO, ZERO, ZERO], [ZERO, ZERO, ZERO, ONE], [ZERO, ZERO, -ONE, ZERO]]
    assert pfaffian(J4) == 1


@pytest.mark.parametrize("theta", [beta(4, 4), beta(4, 4) + beta(4, 1), beta(4, 1) * 3],
                         ids=["b4", "b4+b1", "3b1"])
def test_heisenberg_obstruction(theta):
    rep = two_zero_obstruction(heisenberg(2), theta)
    assert rep.kernel_dim == 0 and not rep.nondegenerate_solution_exists
    assert rep.certificate == "kernel is {0}"


def test_heisenberg_zero_theta_degenerate_kernel():
    rep = two_zero_obstruction(heisenberg(2), Form(4))
    assert rep.kernel_dim == 3 and not rep.nondegenerate_solution_exists
    for w in rep.kernel_basis:
        assert not exterior_d(heisenberg(2), w)


def test_abelian_has_solution():
    rep = two_zero_obstruction(abelian(4), Form(4))
    assert rep.kernel_dim == 6 and rep.nondegenerate_solution_exists


def test_obstruction_odd_and_bad_input():
    assert not two_zero_obstruction(abelian(3), Form(3)).nondegenerate_solution_exists
    with pytest.raises(ValueError):
        two_zero_obstruction(heisenberg(2), beta(4, 4) * Scalar(0, 1))
    with pytest.raises(ValueError):
        two_zero_obstruction(example_a(1, 4), beta(4, 2) + wedge(alpha(4, 1), alpha(4, 2)))


@pytest.mark.parametrize("seed", range(50))
def test_heisenberg_obstruction_random_multiple(seed):
    t = Fraction(int(np.random.default_rng(seed).integers(1, 40)), int(np.random.default_rng(seed + 99).integers(1, 7)))
    rep = two_zero_obstruction(heisenberg(2), beta(4, 4) * t)
    assert not rep.nondegenerate_solution_exists
    for w in rep.kernel_basis:
        assert exterior_d(heisenberg(2), w) == wedge(beta(4, 4) * t, w)


# -- rigidity --------------------------------------------------------------------------------------

def test_heisenberg_rigid():
    rep = rigidity_experiment(heisenberg(2), 20, seed=3)
    assert rep.rigid and rep.vaisman_ok
    assert set(rep.scalar_signs) == {-1}
    assert len(rep.lee_forms) == 20 and all(rep.lee_forms)


def test_abelian_fractions_one():
    rep = rigidity_experiment(abelian(3), 10)
    assert rep.balanced_fraction == rep.gauduchon_zero_fraction == rep.pluriclosed_fraction == 1
    assert rep.vaisman_ok is None


def test_example_b_sign_constant():
    rep = rigidity_experiment(example_b(3, (1, -2)), 20)
    assert rep.sign_constant and rep.balanced_fraction == 0


def test_rigidity_reproducible():
    a = rigidity_experiment(example_a(1, 3), 10, seed=5)
    b = rigidity_experiment(example_a(1, 3), 10, seed=5)
    assert a.scalars == b.scalars and a.lee_forms == b.lee_forms
