import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilherm.catalog import abelian, example_a, example_b, heisenberg
from nilherm.exterior import Form, alpha, alpha_bar, wedge
from nilherm.liealg import (
    HypothesisError, StructureEquations, adapted_coframe, adapted_k, algebra_invariants, bracket,
    brackets_from_d, change_coframe, classify_complex_structure, d_lambda10_bidegrees, is_adapted,
    validate_algebra,
)
from nilherm.scalar import ONE, ZERO, Scalar
from nilherm.search import random_adapted_algebra, random_scalar

CATALOG = [abelian(2), abelian(3), heisenberg(1), heisenberg(2), example_a(1, 3), example_a(-2, 4),
           example_b(3, (1, -2)), example_b(4, (1, 2, -1))]


def _holomorphic3():
    n = 3
    return StructureEquations(n, (Form(n), Form(n), wedge(alpha(n, 1), alpha(n, 2))), "holo3")


def _random_matrix(n, rng):
    while True:
        M = [[random_scalar(rng, bound=1, dens=(1,)) for _ in range(n)] for _ in range(n)]
        from nilherm import linalg
        if not linalg.det(M).is_zero():
            return M


# -- validation -------------------------------------------------------------------

@pytest.mark.parametrize("alg", CATALOG, ids=lambda a: a.name)
def test_catalog_valid(alg):
    assert validate_algebra(alg).valid


def test_integrability_failure():
    n = 3
    bad = StructureEquations(n, (Form(n), wedge(alpha_bar(n, 1), alpha_bar(n, 3)), Form(n)), "bad")
    rep = validate_algebra(bad)
    assert not rep.valid
    assert any(f.kind == "integrability" and f.generator == 2 for f in rep.failures)


def test_jacobi_failure():
    n = 3
    # d a2 = a1 ^ ~a3, d a3 = a1 ^ ~a2: d(d a2) = -a1 ^ ~a1 ^ a2 != 0
    d = (Form(n), wedge(alpha(n, 1), alpha_bar(n, 3)), wedge(alpha(n, 1), alpha_bar(n, 2)))
    rep = validate_algebra(StructureEquations(n, d, "nojacobi"))
    assert any(f.kind == "jacobi" for f in rep.failures)


def test_degree_failure():
    n = 2
    rep = validate_algebra(StructureEquations(n, (Form(n), alpha(n, 1)), "deg"))
    assert any(f.kind == "degree" for f in rep.failures)


# -- brackets -----------------------------------------------------------------------

def _nonzero_brackets(alg):
    br = brackets_from_d(alg)
    dim = 2 * alg.n
    return {(a, b): br[a][b] for a in range(dim) for b in range(a + 1, dim) if any(br[a][b])}


def test_abelian_brackets_vanish():
    assert not _nonzero_brackets(abelian(3))


@pytest.mark.parametrize("m", [1, 2])
def test_heisenberg_brackets(m):
    alg = heisenberg(m)
    n = alg.n
    z = 2 * (n - 1) + 1       # y-part of a_n
    nz = _nonzero_brackets(alg)
    assert set(nz) == {(2 * i, 2 * i + 1) for i in range(n - 1)}
    for v in nz.values():
        assert v == [ONE if c == z else ZERO for c in range(2 * n)]


def test_example_a_single_bracket():
    nz = _nonzero_brackets(example_a(1, 3))
    assert list(nz) == [(0, 1)]
    (v,) = nz.values()
    assert [c for c, x in enumerate(v) if x] == [5]


@pytest.mark.parametrize("alg", CATALOG, ids=lambda a: a.name)
def test_brackets_antisymmetric_and_jacobi(alg):
    br = brackets_from_d(alg)
    dim = 2 * alg.n
    e = [[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)]
    for a in range(dim):
        for b in range(dim):
            assert br[a][b] == [-x for x in br[b][a]]
            for c in range(dim):
                s = [x + y + z for x, y, z in zip(bracket(br, e[a], bracket(br, e[b], e[c])),
                                                   bracket(br, e[b], bracket(br, e[c], e[a])),
                                                   bracket(br, e[c], bracket(br, e[a], e[b])))]
                assert not any(s)


# -- invariants -----------------------------------------------------------------------

def test_abelian_invariants():
    inv = algebra_invariants(abelian(3))
    assert (inv.step, inv.center_dim, inv.two_step, inv.center_J_invariant) == (1, 6, False, True)
    assert inv.derived_dims == (6, 0)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_heisenberg_invariants(m):
    inv = algebra_invariants(heisenberg(m))
    assert inv.step == 2 and inv.two_step and inv.center_J_invariant
    assert inv.center_dim == 2
    assert inv.k == 2 * m - 1


@pytest.mark.parametrize("n,cs", [(3, (1, -2)), (4, (1, 2, -1)), (5, (1, 1, 1, -2))])
def test_example_b_k(n, cs):
    inv = algebra_invariants(example_b(n, cs))
    assert inv.step == 2 and inv.k == n - 1


def test_example_a_k_counts_the_whole_center():
    # only a_1 and ~a_1 enter any bracket, so the (1,0)-center has dimension n-1
    for n in (3, 4, 5):
        inv = algebra_invariants(example_a(1, n))
        assert inv.center_dim == 2 * (n - 1)
        assert inv.k == 1


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25)
def test_invariants_strictly_decreasing(seed):
    rng = np.random.default_rng(seed)
    alg = random_adapted_algebra(int(rng.integers(2, 5)), rng, complex_=True)
    inv = algebra_invariants(alg)
    dims = inv.derived_dims
    assert dims[-1] == 0 and all(x > y for x, y in zip(dims, dims[1:]))
    assert inv.step >= 1 and inv.step <= 2


# -- complex structure ----------------------------------------------------------------------

def test_classify_heisenberg():
    c = classify_complex_structure(heisenberg(2))
    assert c.nilpotent_J and not c.bi_invariant and c.abelian_J and not c.prop44_all_nn_closed


def test_classify_holomorphic():
    c = classify_complex_structure(_holomorphic3())
    assert c.bi_invariant and c.prop44_all_nn_closed and not c.abelian_J


def test_classify_abelian():
    c = classify_complex_structure(abelian(3))
    assert c.nilpotent_J and c.bi_invariant and c.abelian_J and c.prop44_all_nn_closed


@given(st.integers(0, 10 ** 6), st.sampled_from(["mixed", "holomorphic", "abelian"]))
@settings(max_examples=50)
def test_bi_invariance_equivalences(seed, kind):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 6))
    alg = random_adapted_algebra(n, rng, k=int(rng.integers(2, n)), complex_=True, kind=kind)
    c = classify_complex_structure(alg)
    holo = d_lambda10_bidegrees(alg) <= {(2, 0)}
    assert c.bi_invariant == c.prop44_all_nn_closed == holo
    if c.bi_invariant and c.abelian_J:
        assert all(not f for f in alg.d_alpha)


# -- adapted co-frames -------------------------------------------------------------------------

@pytest.mark.parametrize("alg", [example_a(1, 3), example_a(3, 5), heisenberg(2), example_b(3, (1, -2))],
                         ids=lambda a: a.name)
def test_adapted_identity(alg):
    M, adapted = adapted_coframe(alg)
    assert M == [[ONE if i == j else ZERO for j in range(alg.n)] for i in range(alg.n)]
    assert adapted == alg


def test_scrambled_example_a_recovers_shape():
    rng = np.random.default_rng(3)
    alg = example_a(1, 3)
    scrambled = change_coframe(alg, _random_matrix(3, rng))
    assert adapted_k(scrambled) is None or scrambled == alg
    M, adapted = adapted_coframe(scrambled)
    k = algebra_invariants(scrambled).k
    assert is_adapted(adapted, k)
    assert algebra_invariants(adapted) == algebra_invariants(alg)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20)
def test_adapted_round_trip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    alg = random_adapted_algebra(n, rng, complex_=True)
    scrambled = change_coframe(alg, _random_matrix(n, rng))
    assert validate_algebra(scrambled).valid
    inv = algebra_invariants(scrambled)
    assert inv == algebra_invariants(alg)
    if inv.two_step and inv.center_J_invariant:
        _, adapted = adapted_coframe(scrambled)
        assert is_adapted(adapted, inv.k)


def test_adapted_refuses_three_step():
    n = 3
    d = (Form(n), wedge(alpha(n, 1), alpha_bar(n, 1)), wedge(alpha(n, 1), alpha_bar(n, 2))
         + wedge(alpha(n, 2), alpha_bar(n, 1)))
    alg = StructureEquations(n, d, "threestep")
    assert validate_algebra(alg).valid
    assert algebra_invariants(alg).step == 3
    with pytest.raises(HypothesisError, match="step"):
        adapted_coframe(alg)
