from hypothesis import given, settings, strategies as st

from oracle import Oracle, parse_poly
from redcx.fixtures import dual_numbers, gasharov_module, gasharov_ring, truncated_cubic
from redcx.gradedmod import (FreeModule, GradedModule, ModuleHom, ModuleMap, direct_sum,
                             hilbert_function, is_isomorphic, minimalize, residue_field, shift)
from redcx.resolve import omega, resolution
from strategies import ARTINIAN, modules

G_GENS = ["x1^2", "x2^2", "x3^2", "x4^2", "x3*x4", "x1*x4+x2*x4", "2*x1*x3+x2*x3"]


def hs(M, D):
    return tuple(M.hilbert_function(D).coeffs)


def test_minimalize_unit_gives_zero():
    A = dual_numbers()
    assert minimalize(GradedModule.from_matrix(A, [["1"]])).is_zero()


def test_minimalize_drops_redundant_column():
    A = truncated_cubic()
    M = minimalize(GradedModule.from_matrix(A, [["x^2", "x"]]))
    assert M.presentation.pretty() == "[[x]]"
    assert M.gens == (0,)


def test_minimalize_gasharov_unchanged(gasharov):
    _, M = gasharov
    Mm = minimalize(M)
    assert Mm.presentation == M.presentation


def test_hilbert_function_examples(gasharov):
    A, M = gasharov
    assert hs(GradedModule.free(A), 3) == (1, 4, 3, 0)
    assert hs(residue_field(A), 3) == (1, 0, 0, 0)
    assert hs(hilbert_function.__globals__["GradedModule"].free(A, (0, 0)), 2) == (2, 8, 6)


def test_gasharov_module_hilbert_against_oracle(gasharov):
    _, M = gasharov
    o = Oracle(7, ["x1", "x2", "x3", "x4"], G_GENS)
    P = lambda t: parse_poly(t, o.names, 7)  # noqa: E731
    cols = [[P("x1"), {}], [P("2*x3+x4"), P("x2")]]
    expected = tuple(o.module_dim([0, 0], cols, [1, 1], d) for d in range(4))
    assert hs(M, 3) == expected == (2, 6, 0, 0)


def test_isomorphism_examples(gasharov):
    A, M = gasharov
    r = is_isomorphic(M, M)
    assert r and r.witness.compose(r.inverse).is_identity()
    r = is_isomorphic(residue_field(A), GradedModule.free(A))
    assert not r and r.reason == "hilbert"
    om3 = omega(M, 3, resolution(M, 4))
    r = is_isomorphic(om3, M, up_to_shift=True)
    assert r and r.shift == -3


def test_isomorphism_needs_search():
    A = gasharov_ring()
    # alpha^4 = alpha for alpha = 2 in GF(7): same relation matrix, but present it scaled
    M = gasharov_module(A)
    N = GradedModule.from_matrix(A, [["3*x1", "2*x3+x4"], ["0", "x2"]])
    r = is_isomorphic(M, N)
    assert r and r.reason == "witness"
    assert r.witness.is_well_defined() and r.inverse.is_well_defined()
    assert r.inverse.compose(r.witness).is_identity()


def test_non_isomorphic_same_hilbert():
    A = gasharov_ring()
    M, N = gasharov_module(A, n=1), gasharov_module(A, n=2)
    assert not is_isomorphic(M, N)


def test_direct_sum_and_shift_examples(gasharov):
    A, M = gasharov
    k = residue_field(A)
    Z = GradedModule.free(A, ())
    assert hs(direct_sum(M, Z), 4) == hs(M, 4)
    assert hs(direct_sum(k, k), 3) == (2, 0, 0, 0)
    assert hs(shift(k, 1), 3) == (0, 1, 0, 0)


def test_module_map_degree_matrix_shapes():
    A = dual_numbers()
    d = ModuleMap(A, FreeModule((1,)), FreeModule((0,)), [[A.parse("x")]])
    assert d.degree_matrix(1).shape == (1, 1)
    assert d.compose(ModuleMap.identity(A, FreeModule((1,)))) == d


# -- properties


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ARTINIAN), st.data())
def test_hilbert_additive_over_sums(name, data):
    M, N = data.draw(modules((name,))), data.draw(modules((name,)))
    S = direct_sum(M, N)
    for d in range(6):
        assert S.dim(d) == M.dim(d) + N.dim(d)


@settings(max_examples=30, deadline=None)
@given(modules(), st.integers(-2, 2))
def test_shift_translates(M, a):
    for d in range(-3, 6):
        assert shift(M, a).dim(d) == M.dim(d - a)


@settings(max_examples=40, deadline=None)
@given(modules())
def test_minimalize_properties(M):
    m = minimalize(M)
    assert not m.presentation.has_unit_entry()
    assert hs(m, 6) == hs(M, 6)
    assert minimalize(m).presentation == m.presentation


@settings(max_examples=25, deadline=None)
@given(modules(max_gens=2, max_rels=2))
def test_isomorphism_reflexive_symmetric(M):
    r = is_isomorphic(M, M)
    assert r
    assert ModuleHom(r.witness.source, r.witness.source,
                     r.inverse.compose(r.witness).matrix).is_identity()
    N = direct_sum(GradedModule.free(M.ring, ()), M)
    assert bool(is_isomorphic(M, N)) == bool(is_isomorphic(N, M))
