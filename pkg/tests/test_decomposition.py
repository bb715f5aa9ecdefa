import numpy as np
import pytest

from itokit import (
    Kind,
    TwoDimType,
    build_group_poisson,
    build_hp,
    build_mixed_wiener_poisson,
    build_periodic_wiener,
    build_standard,
    build_thermal_brownian,
    build_vacuum,
    classify,
    decompose,
    gns_build,
    quotient_identity,
    thermal_split,
    vacuum_split,
)
from itokit._linalg import subspace_distance
from itokit.algebra import ThermalForm, VacuumForm, from_table
from itokit.catalog import build_vacuum_brownian
from itokit.decomposition import span_distance, vacuum_presentation
from itokit.errors import NoQuotientIdentityError
from itokit.groups import cyclic_group, delta_function


def _unit(alg, label):
    return alg.basis(label)[:, None]


def test_quotient_identity_examples():
    mixed = build_mixed_wiener_poisson()
    e = quotient_identity(mixed, gns_build(mixed))
    np.testing.assert_allclose(e, mixed.basis("d_m"), atol=1e-12)
    hp = build_hp()
    np.testing.assert_allclose(quotient_identity(hp, gns_build(hp)), hp.basis("e"), atol=1e-12)
    w = build_standard("wiener")
    assert quotient_identity(w, gns_build(w)) is None


def test_quotient_identity_is_star_fixed_idempotent(catalog):
    for name, alg in catalog.items():
        rep = gns_build(alg)
        e = quotient_identity(alg, rep)
        if e is None:
            continue
        np.testing.assert_allclose(alg.star(e), e, atol=1e-12)
        E = rep.op(e)
        np.testing.assert_allclose(E @ E, E, atol=1e-9)
        np.testing.assert_allclose(E, E.conj().T, atol=1e-9)


def test_decompose_mixed():
    alg = build_mixed_wiener_poisson()
    d = decompose(alg, gns_build(alg))
    assert subspace_distance(d.brownian_matrix(), _unit(alg, "d_w")) <= 1e-9
    assert subspace_distance(d.levy_matrix(), _unit(alg, "d_m")) <= 1e-9
    assert d.passed


def test_decompose_hp_pure_levy():
    hp = build_hp()
    d = decompose(hp, gns_build(hp))
    assert d.brownian_basis == []
    span = np.column_stack([hp.basis(x) for x in ("e_-", "e^+", "e")])
    assert subspace_distance(d.levy_matrix(), span) <= 1e-9
    # c = a for every generator
    for i, (b, c) in enumerate(d.parts[1:], start=1):
        np.testing.assert_allclose(c, hp.basis(i), atol=1e-12)
        np.testing.assert_allclose(b, 0, atol=1e-12)


def test_decompose_vacuum_brownian():
    alg = build_vacuum_brownian()
    d = decompose(alg, gns_build(alg))
    assert d.levy_basis == [] and d.e is None
    span = np.column_stack([alg.basis("e_-"), alg.basis("e^+")])
    assert subspace_distance(d.brownian_matrix(), span) <= 1e-9


def test_decompose_invariants(catalog):
    for name, alg in catalog.items():
        rep = gns_build(alg)
        d = decompose(alg, rep)
        assert d.passed, (name, d.residuals)
        for b in d.brownian_basis:
            for c in d.levy_basis:
                assert np.linalg.norm(alg.mul_elements(b, c)) <= 1e-9
                assert np.linalg.norm(alg.mul_elements(c, b)) <= 1e-9
            assert np.max(np.abs(rep.op(b))) <= 1e-9
            if d.e is not None:
                assert np.linalg.norm(alg.factor_mul(b, d.e)) <= 1e-9
                assert np.linalg.norm(alg.factor_mul(d.e, b)) <= 1e-9
            for b2 in d.brownian_basis:
                assert np.linalg.norm(alg.factor_mul(b, b2)) <= 1e-9
        full = np.column_stack([alg.death] + d.brownian_basis + d.levy_basis)
        assert np.linalg.matrix_rank(full, tol=1e-9) == alg.dim


def test_no_quotient_identity():
    # *-closed operator algebras are always unital, so force a lone nilpotent block
    hp = build_hp()
    N = np.array([[0, 1], [0, 0]])
    ops = np.zeros((4, 2, 2))
    ops[3] = N
    form = VacuumForm(2, hp.state, np.zeros((4, 2)), np.zeros((4, 2)), ops)
    with pytest.raises(NoQuotientIdentityError):
        vacuum_split(hp, form)


def test_classify_two_dim():
    w = build_standard("wiener")
    assert classify(w, gns_build(w)).two_dim_type is TwoDimType.WIENER
    p = build_standard("poisson")
    assert classify(p, gns_build(p)).two_dim_type is TwoDimType.POISSON


def test_classify_thermal_brownian():
    tb = build_thermal_brownian(2, 1)
    c = classify(tb, gns_build(tb))
    assert c.thermal_flag and c.kind is Kind.BROWNIAN
    assert not c.vacuum_flag


def test_classify_kinds(catalog):
    hp = catalog["hp"]
    c = classify(hp, gns_build(hp))
    assert c.kind is Kind.LEVY and c.vacuum_flag and not c.thermal_flag
    mixed = catalog["mixed_wiener_poisson"]
    assert classify(mixed, gns_build(mixed)).kind is Kind.MIXED
    for name, alg in catalog.items():
        rep = gns_build(alg)
        c = classify(alg, rep)
        assert (c.kind is Kind.BROWNIAN) == bool(np.max(np.abs(rep.ops), initial=0.0) <= 1e-12)


# Vacuum split -----------------------------------------------------------------------


def test_vacuum_split_hp():
    hp = build_hp()
    d = vacuum_split(hp)
    np.testing.assert_allclose(d.E, [[1]])
    assert d.brownian_basis == []
    assert span_distance(d, decompose(hp, gns_build(hp))) <= 1e-9


def test_vacuum_split_pure_brownian():
    vb = build_vacuum_brownian()
    d = vacuum_split(vb)
    np.testing.assert_allclose(d.E, 0)
    assert d.levy_basis == []
    assert span_distance(d, decompose(vb, gns_build(vb))) <= 1e-9


def test_vacuum_split_partial_support():
    # A acts on the first coordinate only
    alg = build_vacuum(2, [np.diag([1, 0])])
    d = vacuum_split(alg)
    np.testing.assert_allclose(d.E, np.diag([1, 0]), atol=1e-12)
    # xi = (1, 1) as a ket: eta on coordinate 2, zeta on coordinate 1
    x = alg.basis("k_0") + alg.basis("k_1")
    b = sum(x[i] * d.parts[i][0] for i in range(alg.dim))
    c = sum(x[i] * d.parts[i][1] for i in range(alg.dim))
    np.testing.assert_allclose(b, alg.basis("k_1"), atol=1e-12)
    np.testing.assert_allclose(c, alg.basis("k_0"), atol=1e-12)
    assert span_distance(d, decompose(alg, gns_build(alg))) <= 1e-9


def test_vacuum_split_from_fundamental_presentation(catalog):
    # every algebra is presented in vacuum form by its own fundamental representation
    for name, alg in catalog.items():
        rep = gns_build(alg)
        d = vacuum_split(alg, vacuum_presentation(rep))
        assert span_distance(d, decompose(alg, rep)) <= 1e-9, name


# Thermal split ---------------------------------------------------------------------


def test_thermal_split_zero_product():
    tb = build_thermal_brownian(2, 1)
    d = thermal_split(tb)
    assert d.levy_basis == []
    assert len(d.brownian_basis) == 2
    assert span_distance(d, decompose(tb, gns_build(tb))) <= 1e-9


def test_thermal_split_z2_all_poisson():
    G = cyclic_group(2)
    alg = build_group_poisson(G, delta_function(G))
    d = thermal_split(alg)
    assert d.brownian_basis == [] and len(d.levy_basis) == 2
    assert d.residuals["sides_agree"] <= 1e-9
    assert span_distance(d, decompose(alg, gns_build(alg))) <= 1e-9


def test_thermal_split_direct_sum():
    alg = build_mixed_wiener_poisson()
    d = thermal_split(alg)
    assert subspace_distance(d.brownian_matrix(), _unit(alg, "d_w")) <= 1e-9
    assert subspace_distance(d.levy_matrix(), _unit(alg, "d_m")) <= 1e-9
    assert d.residuals["unit_route"] <= 1e-12


def test_thermal_split_requires_unit():
    # forced presentation whose DD has no unit
    labels = ["d_t", "x"]
    alg = from_table(labels, {("x", "x"): {"d_t": 1}}, {"d_t": {"d_t": 1}, "x": {"x": 1}})
    dmul = np.zeros((2, 2, 2))
    dmul[0, 0, 1] = 1.0  # u u = v, all else zero, so DD = span{v} with v v = 0
    form = ThermalForm(2, [1, 0], [[0, 0], [1, 0]], dmul, np.eye(2), np.eye(2))
    with pytest.raises(NoQuotientIdentityError):
        thermal_split(alg, form)


def test_periodic_wiener_is_brownian():
    for K, rho in [(0, {}), (1, {1: 2.0}), (2, {1: 3.0, 2: 0.25})]:
        alg = build_periodic_wiener(K, rho)
        rep = gns_build(alg)
        assert classify(alg, rep).kind is Kind.BROWNIAN
        d = decompose(alg, rep)
        assert d.levy_basis == [] and len(d.brownian_basis) == 2 * K + 1
