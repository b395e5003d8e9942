import math

import pytest
from hypothesis import given, settings, strategies as st

from redcx import fixtures as fx
from redcx.gradedmod import FreeModule, GradedModule, ModuleMap, is_isomorphic, residue_field, shift
from redcx.homalg import (depth, depth_formula_check, ext_table, homology_module, is_cohen_macaulay,
                          is_gorenstein, is_mcm, p_index, q_index, ring_depth, tor_module, tor_table,
                          vanishing_window_verdict)
from redcx.reducible import Certificate, search_certificate
from redcx.resolve import betti_numbers, omega, projective_dimension
from strategies import ARTINIAN, modules


def test_ext_of_free_module(ci):
    N = fx.quotient_by(ci, "y")
    T = ext_table(GradedModule.free(ci), N, 5)
    assert T.totals() == (2, 0, 0, 0, 0, 0)


def test_ext_residue_field_gasharov_equals_betti(gasharov):
    A, _ = gasharov
    k = residue_field(A)
    assert ext_table(k, k, 4).totals() == betti_numbers(k, 4).betti


def test_ext_vanishing_ci(ci):
    M, N = fx.quotient_by(ci, "x"), fx.quotient_by(ci, "y")
    T = ext_table(M, N, 10)
    assert T.total(0) > 0
    assert all(T.vanishes(i) for i in range(1, 11))
    assert not T.truncated


def test_tor_examples(ci, xy):
    N = fx.quotient_by(ci, "y")
    assert tor_table(GradedModule.free(ci), N, 5).totals()[1:] == (0,) * 5
    T = tor_table(fx.quotient_by(ci, "x"), N, 10)
    assert all(T.vanishes(i) for i in range(1, 11))
    T = tor_table(fx.quotient_by(xy, "x"), fx.quotient_by(xy, "y"), 10)
    assert T.totals() == (1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1)
    assert T.truncated


def test_homology_module_examples(dual):
    F = FreeModule((0,))
    z = ModuleMap.zero(dual, F, F)
    H = homology_module(z, z)
    assert H.gens == (0,) and H.hilbert_function(2) == (1, 1, 0)
    x = GradedModule.from_matrix(dual, [["x"]]).presentation
    xin = ModuleMap(dual, FreeModule((2,)), FreeModule((1,)), [[dual.parse("x")]])
    assert homology_module(xin, x).is_zero()


def test_homology_module_rejects_noncomplex(dual):
    F = FreeModule((0,))
    ident = ModuleMap.identity(dual, F)
    with pytest.raises(ValueError, match="not zero"):
        homology_module(ident, ident)


def test_tor_module_is_residue_field(xy):
    T2 = tor_module(fx.quotient_by(xy, "x"), fx.quotient_by(xy, "y"), 2)
    assert is_isomorphic(T2, shift(residue_field(xy), 2))


def test_depth_examples(gasharov, xy, ci):
    assert depth(residue_field(xy)).depth == 0
    assert depth(residue_field(ci)).depth == 0
    assert ring_depth(xy) == 1
    assert is_mcm(fx.quotient_by(xy, "x"))
    A, M = gasharov
    assert depth(M).depth == 0 and depth(residue_field(A)).depth == 0
    z = depth(GradedModule.free(ci, ()))
    assert z.depth == math.inf


def test_ring_properties(gasharov, ci, xy, dual):
    assert is_cohen_macaulay(ci) and is_cohen_macaulay(xy)
    assert is_gorenstein(ci) and is_gorenstein(xy) and is_gorenstein(dual)
    assert not is_gorenstein(gasharov[0])


def test_index_examples(ci, xy):
    N = fx.quotient_by(ci, "y")
    assert q_index(GradedModule.free(ci), N, 8).value == 0
    M = fx.quotient_by(ci, "x")
    p = p_index(M, N, 10)
    assert p.value == 0 and not p.at_least_H
    assert p.value == ring_depth(ci) - depth(M).depth
    q = q_index(fx.quotient_by(xy, "x"), fx.quotient_by(xy, "y"), 10)
    assert q.at_least_H and q.value is None and str(q) == ">= 10"


def test_verdict_free_module(ci):
    F = GradedModule.free(ci)
    cert = Certificate(F, [], 0, [], [0])
    v = vanishing_window_verdict(cert, ext_table(F, residue_field(ci), 6))
    assert v.finite and v.window_length == 1 and v.predicted == (0, 0)


def test_verdict_ci_ext_and_tor(ci):
    M, N = fx.quotient_by(ci, "x"), fx.quotient_by(ci, "y")
    cert = search_certificate(M)
    assert cert is not None and cert.length == 1 and cert.chain[0].eta.n == 1
    v = vanishing_window_verdict(cert, ext_table(M, N, 10))
    assert v.finite and v.t == 1 and v.predicted == (0, 0) and v.consistent
    assert v.predicted[0] == p_index(M, N, 10).value
    v = vanishing_window_verdict(cert, tor_table(M, N, 10))
    assert v.finite and v.predicted == (0, 0)


def test_verdict_gasharov_no_window(gasharov):
    A, M = gasharov
    cert = search_certificate(M)
    v = vanishing_window_verdict(cert, ext_table(M, residue_field(A), 10))
    assert not v.finite and "no window" in v.message


def test_depth_formula_examples(ci, xy):
    M, N = fx.quotient_by(ci, "x"), fx.quotient_by(ci, "y")
    r = depth_formula_check(M, N)
    assert r.preconditions_met and r.holds
    assert (r.depth_M, r.depth_N, r.depth_A, r.depth_tensor) == (0, 0, 0, 0)
    r = depth_formula_check(GradedModule.free(xy), fx.quotient_by(xy, "x"))
    assert r.preconditions_met and r.holds
    r = depth_formula_check(fx.quotient_by(xy, "x"), fx.quotient_by(xy, "y"))
    assert not r.preconditions_met and r.holds is None
    assert any("q(M,N)" in f for f in r.failed)


def test_ext_k_k_even_never_vanishes(ci):
    k = residue_field(ci)
    T = ext_table(k, k, 10)
    assert all(T.total(2 * n) for n in range(1, 6))


FIXTURES = {
    "ci_k": lambda: residue_field(fx.ci_ring()),
    "ci_Ax": lambda: fx.quotient_by(fx.ci_ring(), "x"),
    "gasharov": lambda: fx.gasharov_module(fx.gasharov_ring()),
    "dual_k": lambda: residue_field(fx.dual_numbers()),
    "xy_Ax+y": lambda: fx.quotient_by(fx.hypersurface_xy(), "x+y"),
    "xy_k": lambda: residue_field(fx.hypersurface_xy()),
    "ci_free": lambda: GradedModule.free(fx.ci_ring(), (0, 1)),
}


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_self_ext_index_matches_pd(name):
    M = FIXTURES[name]()
    H = 8
    pd = projective_dimension(M, H)
    T = ext_table(M, M, H)
    if pd is not None:
        assert p_index(M, M, H, T).value == pd
    else:
        assert all(T.total(i) for i in range(H + 1))


@pytest.mark.parametrize("name", ["xy_k", "xy_Ax+y", "ci_k", "ci_Ax", "dual_k"])
def test_syzygy_depth_increases(name):
    M = FIXTURES[name]()
    dA = ring_depth(M.ring)
    assert depth(omega(M, 1)).depth >= min(depth(M).depth + 1, dA)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(ARTINIAN), st.data())
def test_tor_symmetric(name, data):
    M = data.draw(modules((name,), max_gens=2, max_rels=2))
    N = data.draw(modules((name,), max_gens=1, max_rels=2))
    assert tor_table(M, N, 5).totals() == tor_table(N, M, 5).totals()


@settings(max_examples=15, deadline=None)
@given(modules())
def test_ext_into_k_is_betti(M):
    k = residue_field(M.ring)
    assert ext_table(M, k, 6).totals() == betti_numbers(M, 6).betti
