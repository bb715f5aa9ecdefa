import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itokit import (
    build_periodic_wiener,
    build_standard,
    build_thermal_brownian,
    check_axioms,
    verify_mode_realization,
)
from itokit.catalog import STANDARD_NAMES, build_vacuum, mode_amplitudes, self_inverse_spectrum
from itokit.errors import AliasingError, ParameterError

from oracles import geometric_mode_sum


@pytest.mark.parametrize("name", [n for n in STANDARD_NAMES if n != "thermal_brownian"])
def test_standard_builders_pass_axioms(name):
    assert check_axioms(build_standard(name)).passed


def test_newton():
    n = build_standard("newton")
    assert n.dim == 1
    assert not np.any(n.mul)


def test_hp_idempotent():
    hp = build_standard("hp")
    e = hp.basis("e")
    np.testing.assert_array_equal(hp.mul_elements(e, e), e)


def test_mixed_orthogonal():
    m = build_standard("mixed_wiener_poisson")
    assert m.dim == 3
    assert not np.any(m.mul_elements(m.basis("d_w"), m.basis("d_m")))
    assert not np.any(m.mul_elements(m.basis("d_m"), m.basis("d_w")))


def test_thermal_brownian_table():
    tb = build_standard("thermal_brownian", {"rho_plus": 2, "rho_minus": 1})
    w, ws = tb.basis("d_w"), tb.basis("d_w*")
    np.testing.assert_array_equal(tb.mul_elements(w, ws), 2 * tb.basis("d_t"))
    np.testing.assert_array_equal(tb.mul_elements(ws, w), tb.basis("d_t"))
    assert check_axioms(tb).passed


@pytest.mark.parametrize("rp, rm", [(1, 2), (2, -0.5)])
def test_thermal_brownian_rejects_bad_parameters(rp, rm):
    with pytest.raises(ParameterError):
        build_thermal_brownian(rp, rm)


def test_unknown_name():
    with pytest.raises(ParameterError):
        build_standard("levy_flight")
    with pytest.raises(ParameterError):
        build_standard("thermal_brownian", {"rho_plus": 2})


def test_build_vacuum_matches_hp():
    hp = build_standard("hp")
    v = build_vacuum(1, [np.eye(1)])
    # relabel k_0 -> e^+, b_0 -> e_-, A_0 -> e
    order = [v.index(s) for s in ("d_t", "b_0", "k_0", "A_0")]
    np.testing.assert_allclose(v.mul[np.ix_(order, order, order)], hp.mul)
    assert check_axioms(v).passed


def test_build_vacuum_rejects_open_operator_set():
    with pytest.raises(ParameterError):
        build_vacuum(2, [np.array([[0, 1], [0, 0]])])


# Periodic Wiener --------------------------------------------------------------------


def test_periodic_k0_is_wiener():
    alg = build_periodic_wiener(0, [1.0])
    assert alg.dim == 2
    d0 = alg.basis("d_0")
    np.testing.assert_array_equal(alg.mul_elements(d0, alg.star(d0)), alg.basis("d_t"))
    np.testing.assert_array_equal(alg.mul, build_standard("wiener").mul)


def test_periodic_k1_noncommutative():
    alg = build_periodic_wiener(1, {1: 2.0})
    assert alg.dim == 4
    d1 = alg.basis("d_1")
    s = alg.star(d1)
    np.testing.assert_allclose(alg.mul_elements(d1, s), 2 * alg.basis("d_t"))
    np.testing.assert_allclose(alg.mul_elements(s, d1), 0.5 * alg.basis("d_t"))


def test_periodic_rejects_non_self_inverse():
    with pytest.raises(ParameterError):
        build_periodic_wiener(1, [1.0, 1.0, 2.0])
    with pytest.raises(ParameterError):
        build_periodic_wiener(1, [0.5, 2.0, 2.0])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.lists(st.floats(0.05, 20), min_size=3, max_size=3))
def test_periodic_is_valid_and_nilpotent(K, vals):
    rho = self_inverse_spectrum({k: vals[k - 1] for k in range(1, K + 1)}, K)
    alg = build_periodic_wiener(K, rho)
    assert alg.dim == 2 * K + 2
    assert check_axioms(alg).passed
    rng = np.random.default_rng(K)
    for _ in range(5):
        x, y = (np.append(0, rng.normal(size=alg.dim - 1) + 1j * rng.normal(size=alg.dim - 1)) for _ in range(2))
        prod = alg.mul_elements(x, y)
        assert np.linalg.norm(prod[1:]) <= 1e-12


# Mode realisation -------------------------------------------------------------------


def test_modes_single():
    r = verify_mode_realization(0, {}, 1)
    np.testing.assert_allclose(r.grid, [[1]], atol=1e-15)
    assert r.passed


def test_modes_k1_n3_against_geometric_sums():
    rho = self_inverse_spectrum({1: 2.0}, 1)
    r = verify_mode_realization(1, rho, 3)
    assert r.residual <= 1e-12 and r.star_residual <= 1e-12
    for a, i in enumerate(r.modes):
        for b, k in enumerate(r.modes):
            expected = np.sqrt(rho[i] * rho[k]) / 3 * geometric_mode_sum(i, k, 3)
            assert abs(r.grid[a, b] - expected) <= 1e-12
            assert abs(r.grid[a, b] - (rho[k] if i == k else 0)) <= 1e-12


def test_modes_aliasing():
    with pytest.raises(AliasingError) as info:
        verify_mode_realization(1, {1: 2.0}, 2)
    assert (1, -1) in info.value.report.aliased_pairs
    assert (-1, 1) in info.value.report.aliased_pairs


def test_displayed_weights_would_invert_spectrum():
    # with the creation weight sqrt(rho_k) the diagonal reads rho_{-k} instead of rho_k
    rho = self_inverse_spectrum({1: 2.0}, 1)
    ann, cre = mode_amplitudes(1, rho, 3)
    swapped = np.array([np.sqrt(rho[-k] / 3) for k in (-1, 0, 1)])[:, None] * (ann / np.abs(ann))
    diag = np.diag(swapped @ swapped.conj().T).real
    np.testing.assert_allclose(diag, [rho[1], 1, rho[-1]])
