import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itokit import (
    build_group_poisson,
    build_standard,
    check_axioms,
    convolution_checks,
    cyclic_group,
    cyclic_irreps,
    decompose,
    gns_build,
    s3_irreps,
    spectral_decompose,
    symmetric_group_3,
    synthesize,
)
from itokit.errors import AxiomWarning, IncompleteIrrepsError, ParameterError
from itokit.groups import FiniteGroupData, builtin_group, delta_function

from oracles import cyclic_convolution


def test_group_tables():
    for G in (cyclic_group(1), cyclic_group(4), symmetric_group_3()):
        e = G.identity
        inv = G.inverse
        for g in range(G.order):
            assert G.mul(g, inv[g]) == e and G.mul(inv[g], g) == e
            assert G.mul(e, g) == g == G.mul(g, e)


def test_bad_cayley_rejected():
    with pytest.raises(ParameterError):
        FiniteGroupData([[0, 1], [0, 1]])
    # Latin square that is not associative
    with pytest.raises(ParameterError):
        FiniteGroupData([[0, 1, 2], [1, 0, 2], [2, 2, 0]])


def test_s3_is_nonabelian():
    G = symmetric_group_3()
    assert not np.array_equal(G.cayley, G.cayley.T)
    assert G.names[G.identity] == "e"


@pytest.mark.parametrize("G, irreps", [builtin_group("Z3"), builtin_group("S3"), builtin_group("Z1")])
def test_irreps_are_unitary_homomorphisms(G, irreps):
    assert sum(ir.dim**2 for ir in irreps) == G.order
    for ir in irreps:
        U = ir.matrices
        for g in range(G.order):
            np.testing.assert_allclose(U[g].conj().T @ U[g], np.eye(ir.dim), atol=1e-12)
            for h in range(G.order):
                np.testing.assert_allclose(U[g] @ U[h], U[G.mul(g, h)], atol=1e-12)


def test_trivial_group_gives_poisson():
    G = cyclic_group(1)
    alg = build_group_poisson(G, [1.0])
    p = build_standard("poisson")
    assert alg.dim == 2
    np.testing.assert_array_equal(alg.mul, p.mul)
    np.testing.assert_array_equal(alg.star_matrix, p.star_matrix)


def test_cyclic_delta_table():
    N = 5
    G = cyclic_group(N)
    alg = build_group_poisson(G, delta_function(G))
    for i in range(N):
        for k in range(N):
            di, dk = alg.basis(f"d_{i}"), alg.basis(f"d_{k}")
            out = alg.mul_elements(di, alg.star(dk))
            expect = alg.basis(f"d_{(i - k) % N}") + (i == k) * alg.basis("d_t")
            np.testing.assert_array_equal(out, expect)


def test_group_poisson_commutativity():
    for G, abelian in ((cyclic_group(4), True), (symmetric_group_3(), False)):
        alg = build_group_poisson(G, delta_function(G))
        assert alg.report.passed and check_axioms(alg).passed
        worst = 0.0
        for i in range(alg.dim):
            for j in range(alg.dim):
                comm = alg.mul[i, j] - alg.mul[j, i]
                worst = max(worst, float(np.linalg.norm(comm)))
        if abelian:
            assert worst <= 1e-9
        else:
            assert worst > 0.5


def test_group_poisson_without_self_inverse_is_still_valid():
    # lambda = 1/2 on Z_2 is positive definite but not self-inverse; positivity only needs PSD
    G = cyclic_group(2)
    with warnings.catch_warnings():
        warnings.simplefilter("error", AxiomWarning)
        alg = build_group_poisson(G, [0.5, 0.5])
    assert alg.report.passed
    assert not convolution_checks(G, [0.5, 0.5]).self_inverse


def test_group_poisson_rejects_non_positive():
    G = cyclic_group(2)
    with pytest.raises(ParameterError):
        build_group_poisson(G, [1.0, 2.0])
    with pytest.raises(ParameterError):
        build_group_poisson(G, [1.0, 0.5j])


def test_group_poisson_is_pure_levy():
    for G in (cyclic_group(3), symmetric_group_3()):
        alg = build_group_poisson(G, delta_function(G))
        rep = gns_build(alg)
        d = decompose(alg, rep)
        assert d.brownian_basis == [] and len(d.levy_basis) == G.order
        # A-blocks form a unital algebra
        np.testing.assert_allclose(d.E, np.eye(rep.gns_dim), atol=1e-9)


# Convolution checks -----------------------------------------------------------------


def test_delta_is_self_inverse():
    for G in (cyclic_group(1), cyclic_group(6), symmetric_group_3()):
        r = convolution_checks(G, delta_function(G))
        assert r.self_inverse_residual == 0.0
        assert r.passed
        assert r.min_eigenvalue == pytest.approx(1.0)


def test_constant_on_z2_fails_self_inverse():
    r = convolution_checks(cyclic_group(2), [0.5, 0.5])
    assert not r.self_inverse
    assert r.self_inverse_residual == pytest.approx(0.5)
    assert r.positive_definite
    np.testing.assert_allclose(r.convolution, cyclic_convolution([0.5 + 0j, 0.5 + 0j]))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_convolution_matches_direct_sum(N, seed):
    rng = np.random.default_rng(seed)
    lam = rng.normal(size=N) + 1j * rng.normal(size=N)
    r = convolution_checks(cyclic_group(N), lam)
    np.testing.assert_allclose(r.convolution, cyclic_convolution(list(lam)), atol=1e-12)


# Spectral decomposition -------------------------------------------------------------


def test_z2_delta_spectrum():
    G, irreps = builtin_group("Z2")
    s = spectral_decompose(G, irreps, delta_function(G))
    for rho in s.rhos:
        np.testing.assert_allclose(rho, [[1]])
    assert s.residual <= 1e-15


def test_trivial_group_spectrum():
    G, irreps = builtin_group("Z1")
    s = spectral_decompose(G, irreps, [0.7])
    np.testing.assert_allclose(s.rhos[0], [[0.7]])


def test_incomplete_irreps():
    G = symmetric_group_3()
    with pytest.raises(IncompleteIrrepsError):
        spectral_decompose(G, s3_irreps()[:2], delta_function(G))


def _random_psd(rng, d):
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return X @ X.conj().T


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
def test_fourier_round_trip(name, rng):
    G, irreps = builtin_group(name)
    rhos = [_random_psd(rng, ir.dim) for ir in irreps]
    lam = synthesize(G, irreps, rhos)
    # synthesized from PSD spectra, so lambda is positive definite
    assert convolution_checks(G, lam).positive_definite
    s = spectral_decompose(G, irreps, lam)
    assert s.residual <= 1e-10
    for a, b in zip(s.rhos, rhos):
        np.testing.assert_allclose(a, b, atol=1e-10)
    assert min(s.min_eigenvalues) >= -1e-10


def test_cyclic_irreps_weights():
    for ir in cyclic_irreps(4):
        assert ir.weight == pytest.approx(0.25)
