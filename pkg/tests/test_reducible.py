import pytest
from hypothesis import given, settings

from redcx import fixtures as fx
from redcx.gradedmod import GradedModule, is_isomorphic, residue_field
from redcx.homalg import depth, is_mcm, tor_table
from redcx.reducible import (Certificate, Link, SearchDiagnostics, betti_recurrence,
                             check_certificate, fid_hull, mcm_approximation, search_certificate,
                             syzygy_transport, tor_transfer)
from redcx.resolve import omega, projective_dimension
from redcx.ringkernel import QuotientRing
from redcx.yoneda import ext_class_basis, pushout
from strategies import modules


@pytest.fixture(scope="module")
def gas():
    A = fx.gasharov_ring()
    M = fx.gasharov_module(A)
    eta = next(e for e in ext_class_basis(M, 3) if not pushout(e).K.rel_shifts)
    return A, M, eta


@pytest.fixture(scope="module")
def ci_k_cert():
    A = fx.ci_ring()
    k = residue_field(A)
    return A, k, search_certificate(k)


def test_check_free_empty_chain(ci):
    F = GradedModule.free(ci, (0, 0))
    assert check_certificate(F, Certificate(F, [], 0, [], [0]))


def test_check_gasharov_periodicity_class(gas):
    A, M, eta = gas
    cert = Certificate(M, [Link(eta, pushout(eta).K, True)], 0, [], [])
    v = check_certificate(M, cert)
    assert v.passed and v.recurrence_ok


def test_check_gasharov_zero_class_fails_cx(gas):
    A, M, eta = gas
    z = eta.scale(0)
    v = check_certificate(M, Certificate(M, [Link(z, pushout(z).K, True)], 0, [], []))
    assert not v.passed and "complexity" in v.reason and v.failed_link == 0


def test_check_rejects_wrong_K(gas):
    A, M, eta = gas
    v = check_certificate(M, Certificate(M, [Link(eta, M, True)], 0, [], []))
    assert not v.passed and "isomorphic" in v.reason


def test_check_empty_chain_infinite_pd(gas):
    A, M, _ = gas
    assert not check_certificate(M, Certificate(M, [], None, [], []))


def test_search_free_module(ci):
    cert = search_certificate(GradedModule.free(ci))
    assert cert.length == 0 and cert.terminal_pd == 0


def test_search_gasharov(gas):
    A, M, _ = gas
    cert = search_certificate(M)
    assert cert.length == 1
    link = cert.chain[0]
    assert link.eta.n == 3 and link.K.rel_shifts == () and len(link.K.gens) == 2
    assert [c.value for c in cert.cx_trail] == [1, 0]
    assert check_certificate(M, cert).passed


def test_search_residue_field_ci(ci_k_cert):
    A, k, cert = ci_k_cert
    assert cert.length == 2
    assert [c.value for c in cert.cx_trail] == [2, 1, 0]
    assert cert.depth_trail == [0, 0, 0]
    assert check_certificate(k, cert).passed


def test_chain_of_homological_degree_two_classes(ci):
    k = residue_field(ci)
    e1 = ext_class_basis(k, 2)[0]
    K1 = pushout(e1).K
    e2 = next(e for e in ext_class_basis(K1, 2)
              if projective_dimension(pushout(e).K, 10) is not None)
    cert = Certificate(k, [Link(e1, K1, True), Link(e2, pushout(e2).K, True)], 0, [], [])
    v = check_certificate(k, cert)
    assert v.passed and v.recurrence_ok


def test_search_diagnostics_on_failure(ci):
    diag = SearchDiagnostics()
    k = residue_field(ci)
    assert search_certificate(k, budget=1, diagnostics=diag) is None
    assert diag.classes_tried >= 1


def test_certificate_json_round_trip(ci_k_cert):
    A, k, cert = ci_k_cert
    back = Certificate.from_json(A, cert.to_json())
    assert back.to_json() == cert.to_json()
    assert check_certificate(k, back).passed


def test_transport_free(ci):
    F = GradedModule.free(ci)
    out = syzygy_transport(search_certificate(F))
    assert out.length == 0 and out.module.is_zero()


def test_transport_gasharov(gas):
    A, M, _ = gas
    out = syzygy_transport(search_certificate(M))
    assert is_isomorphic(out.module, omega(M, 1))
    assert out.length == 1 and check_certificate(out.module, out).passed


def test_transport_residue_field_ci(ci_k_cert):
    A, k, cert = ci_k_cert
    out = syzygy_transport(cert)
    assert is_isomorphic(out.module, omega(k, 1))
    assert [c.value for c in out.cx_trail] == [2, 1, 0]
    assert check_certificate(out.module, out).passed


def test_transport_requires_cm_ring():
    A = QuotientRing(5, ["x", "y"], ["x^2", "x*y"])
    M = fx.quotient_by(A, "y")
    cert = Certificate(M, [], None, [], [])
    with pytest.raises(ValueError, match="Cohen-Macaulay"):
        syzygy_transport(cert)


def test_mcm_free_module(ci):
    F = GradedModule.free(ci)
    r = mcm_approximation(F)
    assert r.left.is_zero() and r.middle.presentation == F.presentation and r.verified


def test_mcm_residue_field_hypersurface(xy):
    r = mcm_approximation(residue_field(xy))
    assert r.verified and r.checks["middle_mcm"]
    assert depth(r.middle).depth == 1 == xy.krull_dim
    assert r.pd_witness is not None and r.pd_witness <= 1


def test_mcm_already_mcm(xy):
    M = fx.quotient_by(xy, "x")
    r = mcm_approximation(M)
    assert r.steps == 0 and r.left.is_zero() and r.verified


def test_mcm_requires_complete_intersection(gas):
    A, M, _ = gas
    with pytest.raises(ValueError, match="complete intersection"):
        mcm_approximation(M)


def test_hull_residue_field_hypersurface(xy):
    r = fid_hull(residue_field(xy))
    assert r.verified and r.checks["right_mcm"]
    assert is_mcm(r.right) and projective_dimension(r.middle, 10) is not None


def test_tor_transfer_free(ci):
    X, Y = GradedModule.free(ci), fx.quotient_by(ci, "y")
    r = tor_transfer(X, Y)
    assert r.steps == 0 and r.X.presentation == X.presentation
    assert r.Y.presentation == Y.presentation


def test_tor_transfer_ci(ci):
    X, Y = fx.quotient_by(ci, "x"), fx.quotient_by(ci, "y")
    r = tor_transfer(X, Y)
    assert r.preserved and all(pd is not None for pd in r.pd_after)
    assert r.depths_after == r.depths_before
    T = tor_table(r.X, r.Y, 5)
    assert all(T.vanishes(i) for i in range(1, 6))


def test_tor_transfer_precondition(ci):
    k = residue_field(ci)
    with pytest.raises(ValueError, match="precondition"):
        tor_transfer(k, k)


# -- properties


@pytest.mark.parametrize("name,make", [
    ("gasharov", lambda: fx.gasharov_module(fx.gasharov_ring())),
    ("ci_k", lambda: residue_field(fx.ci_ring())),
    ("ci_Ax", lambda: fx.quotient_by(fx.ci_ring(), "x")),
    ("cubic_k", lambda: residue_field(fx.truncated_cubic())),
    ("dual_k", lambda: residue_field(fx.dual_numbers())),
])
def test_search_output_rechecks_with_recurrence(name, make):
    M = make()
    cert = search_certificate(M)
    assert cert is not None
    v = check_certificate(M, cert)
    assert v.passed and v.recurrence_ok
    prev = M
    for link in cert.chain:
        assert betti_recurrence(prev, link.K, link.eta.n, 10)[0]
        prev = link.K


@settings(max_examples=10, deadline=None)
@given(modules(("ci", "cubic", "dual"), max_gens=1, max_rels=2))
def test_random_search_is_sound(M):
    cert = search_certificate(M, max_hdeg=2, budget=40)
    if cert is not None:
        assert check_certificate(M, cert).passed
