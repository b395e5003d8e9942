import pytest
from hypothesis import given, settings, strategies as st

from redcx import fixtures as fx
from redcx.gradedmod import (FreeModule, GradedModule, ModuleMap, direct_sum, is_isomorphic,
                             residue_field, shift)
from redcx.reducible import betti_recurrence
from redcx.resolve import betti_numbers, estimate_complexity, omega, resolution
from redcx.yoneda import (ExtClass, ext_class_basis, free_decomposition, lift_chain_map, power,
                          product_pushout_bookkeeping, pushout, yoneda_product)
from strategies import modules


def periodicity_class(M):
    for eta in ext_class_basis(M, 3):
        if not pushout(eta).K.rel_shifts:
            return eta
    raise AssertionError("no class with free pushout")


@pytest.fixture(scope="module")
def gas_eta():
    A = fx.gasharov_ring()
    M = fx.gasharov_module(A)
    return A, M, periodicity_class(M)


@pytest.fixture(scope="module")
def dual_eta():
    A = fx.dual_numbers()
    k = residue_field(A)
    (eta,) = ext_class_basis(k, 2)
    return A, k, eta


def test_basis_empty_for_free(ci):
    assert ext_class_basis(GradedModule.free(ci), 1) == []


def test_basis_dual_numbers(dual_eta):
    A, k, eta = dual_eta
    assert eta.degree == -2 and not eta.is_zero() and eta.is_cocycle()


def test_basis_gasharov_contains_periodicity_class(gas_eta):
    A, M, eta = gas_eta
    assert eta.degree == -3
    assert len(ext_class_basis(M, 3)) == 9


def test_pushout_dual_numbers_is_free(dual_eta):
    A, k, eta = dual_eta
    P = pushout(eta)
    assert P.ses_verified and all(P.checks.values())
    assert P.K.rel_shifts == () and P.K.gens == (-1,)
    assert [P.K.dim(d) for d in (-1, 0, 1)] == [1, 1, 0]  # A(1)


def test_pushout_gasharov_is_free_rank_two(gas_eta):
    A, M, eta = gas_eta
    P = pushout(eta)
    assert P.ses_verified
    assert P.K.rel_shifts == () and len(P.K.gens) == 2


def test_pushout_of_zero_splits(gas_eta):
    A, M, eta = gas_eta
    z = eta.scale(0)
    P = pushout(z)
    assert P.ses_verified
    split = direct_sum(M, shift(omega(M, 2), z.degree))
    assert is_isomorphic(P.K, split)


def test_pushout_rejects_non_cocycle():
    A = fx.truncated_cubic()
    M = fx.quotient_by(A, "x^2")
    res = resolution(M, 3)
    # F_1 = A(-2) -> A sending the generator to 1; composing with d_2 = (x) is x != 0
    f = ModuleMap(A, res.free(1), FreeModule((0,)), [[A.const(1)]], degree=-2)
    eta = ExtClass(M, GradedModule.free(A), 1, f, res)
    assert not eta.is_cocycle()
    with pytest.raises(ValueError, match="not a cocycle"):
        pushout(eta)


def test_lift_step_zero_is_cocycle(dual_eta):
    A, k, eta = dual_eta
    (g0,) = lift_chain_map(eta, 0)
    assert g0.pretty() == eta.cocycle.pretty() == "[[1]]"


def test_lift_dual_numbers_fixture(dual_eta):
    A, k, eta = dual_eta
    assert [g.pretty() for g in lift_chain_map(eta, 3)] == ["[[1]]"] * 4


def same_map(a, b):
    R = a.ring
    return all(not R.normal_form(x - y) for ra, rb in zip(a.entries, b.entries)
               for x, y in zip(ra, rb))


def chain_map_ok(eta, gs):
    res = resolution(eta.source, eta.n + len(gs))
    return all(same_map(res.d(i).compose(gs[i]), gs[i - 1].compose(res.d(eta.n + i)))
               for i in range(1, len(gs)))


def test_lift_gasharov_isomorphisms(gas_eta):
    A, M, eta = gas_eta
    gs = lift_chain_map(eta, 4)
    assert [g.pretty() for g in gs] == ["[[1, 0], [0, 1]]"] * 5
    assert chain_map_ok(eta, gs)


def test_chain_map_condition_ci(ci):
    k = residue_field(ci)
    for n in (1, 2):
        for eta in ext_class_basis(k, n):
            assert chain_map_ok(eta, lift_chain_map(eta, 3))


def test_power_one_is_identity(dual_eta):
    A, k, eta = dual_eta
    assert power(eta, 1).equals(eta)


def test_power_gasharov_square(gas_eta):
    A, M, eta = gas_eta
    e2 = power(eta, 2)
    assert e2.n == 6 and e2.degree == -6
    K = pushout(e2).K
    assert K.rel_shifts == () and len(K.gens) == 2


def test_power_associative(ci):
    k = residue_field(ci)
    eta = ext_class_basis(k, 2)[0]
    e3 = power(eta, 3)
    assert e3.equals(yoneda_product(eta, power(eta, 2)))
    assert e3.equals(yoneda_product(power(eta, 2), eta))


def test_ci_class_powers_nonzero(ci):
    k = residue_field(ci)
    eta = ext_class_basis(k, 2)[0]
    assert all(not power(eta, t).is_zero() for t in range(1, 5))


def test_product_rejects_non_composable(ci, dual_eta):
    k = residue_field(ci)
    eta = ext_class_basis(k, 2)[0]
    Mx = fx.quotient_by(ci, "x")
    other = ext_class_basis(Mx, 1)[0]
    with pytest.raises(ValueError):
        yoneda_product(eta, other)


def test_bookkeeping_examples(dual_eta, gas_eta):
    A, k, eta = dual_eta
    r = product_pushout_bookkeeping(eta, eta)
    assert r.consistent and r.free_shifts == ()
    A, M, g = gas_eta
    r = product_pushout_bookkeeping(g, g)
    assert r.consistent
    r = product_pushout_bookkeeping(g.scale(0), g)
    assert r.consistent


def test_free_decomposition(ci):
    # HS(A) = 1 + 2t + t^2; two copies of A(-1) plus A
    hs = {0: 1, 1: 4, 2: 5, 3: 2}
    assert free_decomposition(ci, hs, 0, 1) == ((0, 1), (1, 2))
    assert free_decomposition(ci, {0: 1, 1: 1}, 0, 1) is None


def test_ext_class_json_round_trip(gas_eta):
    A, M, eta = gas_eta
    back = ExtClass.from_json(M, M, eta.to_json())
    assert back.equals(eta)


# -- properties

CI_RINGS = {"ci": fx.ci_ring, "cubic": fx.truncated_cubic, "dual": fx.dual_numbers}


@pytest.mark.parametrize("ring", sorted(CI_RINGS))
def test_cx_monotone_under_powers(ring):
    A = CI_RINGS[ring]()
    k = residue_field(A)
    for n in (1, 2):
        for eta in ext_class_basis(k, n)[:2]:
            base = estimate_complexity(betti_numbers(pushout(eta).K, 10)).value
            for t in (1, 2, 3):
                K = pushout(power(eta, t)).K
                assert estimate_complexity(betti_numbers(K, 10)).value <= base


@pytest.mark.parametrize("ring", sorted(CI_RINGS))
def test_betti_recurrence_for_reducing_classes(ring):
    A = CI_RINGS[ring]()
    k = residue_field(A)
    cxM = estimate_complexity(betti_numbers(k, 10)).value
    for n in (1, 2):
        for eta in ext_class_basis(k, n):
            K = pushout(eta).K
            if estimate_complexity(betti_numbers(K, 10)).value < cxM:
                ok, _ = betti_recurrence(k, K, n, 10)
                assert ok


@settings(max_examples=15, deadline=None)
@given(modules(), st.integers(1, 2), st.integers(0, 3))
def test_basis_cocycles_and_ses_additivity(M, n, j):
    basis = ext_class_basis(M, n)
    if not basis:
        return
    eta = basis[j % len(basis)]
    assert eta.is_cocycle()
    P = pushout(eta)
    assert P.checks["hilbert_additive"] and P.ses_verified
    Om = P.cokernel
    for d in range(-4, 8):
        assert P.K.dim(d) == M.dim(d) + Om.dim(d)
