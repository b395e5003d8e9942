"""Reducible-complexity certificates and the constructions built on them.

A certificate for M is a chain K_0 = M, K_1, ..., K_c of pushout modules
K_i = K_{η_i} along classes η_i in Ext(K_{i-1}, K_{i-1}), with equal depth,
strictly dropping complexity and K_c of finite projective dimension.  Finite
projective dimension is witnessed by a zero Betti number within H.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gradedmod import (
    FreeModule, GradedModule, ModuleHom, ModuleMap, direct_sum, is_isomorphic, minimalize,
    minimalize_with_map, shift,
)
from .homalg import depth, is_cohen_macaulay, is_mcm, tor_table
from .resolve import (
    ComplexityEstimate, betti_numbers, estimate_complexity, omega, projective_dimension,
    resolution,
)
from .yoneda import (
    ExtClass, ext_class_basis, free_decomposition, lift_chain_map, power, pushout,
    transport_class, verify_ses,
)

DEFAULT_H = 10


@dataclass
class Link:
    eta: ExtClass
    K: GradedModule
    ses_verified: bool

    def to_json(self):
        return {
            "n": self.eta.n,
            "degree": self.eta.degree,
            "cocycle": self.eta.cocycle.to_json(),
            "K": self.K.presentation.to_json(),
            "ses_verified": self.ses_verified,
        }


@dataclass
class Certificate:
    module: GradedModule
    chain: list
    terminal_pd: int | None
    cx_trail: list
    depth_trail: list
    H: int = DEFAULT_H

    @property
    def length(self) -> int:
        return len(self.chain)

    def modules(self) -> list:
        return [self.module] + [link.K for link in self.chain]

    def to_json(self):
        return {
            "module": self.module.presentation.to_json(),
            "H": self.H,
            "chain": [link.to_json() for link in self.chain],
            "terminal_pd": self.terminal_pd,
            "cx_trail": [c.to_json() for c in self.cx_trail],
            "depth_trail": [_j(d) for d in self.depth_trail],
        }

    @classmethod
    def from_json(cls, ring, data) -> "Certificate":
        M = minimalize(GradedModule(ModuleMap.from_json(ring, data["module"])))
        H = data["H"]
        chain = []
        prev = M
        for ld in data["chain"]:
            n = ld["n"]
            res = resolution(prev, max(n + 1, H + 1))
            f = ModuleMap.from_json(ring, ld["cocycle"])
            eta = ExtClass(prev, prev, n, f, res, False)
            K = GradedModule(ModuleMap.from_json(ring, ld["K"]))
            K.is_minimal = True
            chain.append(Link(eta, K, ld["ses_verified"]))
            prev = K
        cx = [ComplexityEstimate(c["value"], tuple(c["window"]), c["method"], c["confident"])
              for c in data["cx_trail"]]
        dt = [float("inf") if d == "inf" else d for d in data["depth_trail"]]
        return cls(M, chain, data["terminal_pd"], cx, dt, H)


def _j(x):
    return "inf" if x == float("inf") else x


def _cx(X: GradedModule, H: int, cache=None) -> ComplexityEstimate:
    return estimate_complexity(betti_numbers(X, H, cache))


def _cx_value(c: ComplexityEstimate):
    return float("inf") if c.value is None else c.value


@dataclass
class CertVerdict:
    passed: bool
    reason: str
    failed_link: int | None = None
    recurrence: list = field(default_factory=list)  # per link: (ok, window)

    @property
    def recurrence_ok(self) -> bool:
        return all(ok for ok, _ in self.recurrence)

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"passed": self.passed, "reason": self.reason, "failed_link": self.failed_link,
                "recurrence": [[ok, list(w)] for ok, w in self.recurrence]}


def betti_recurrence(M: GradedModule, K: GradedModule, n: int, H: int, cache=None):
    """Check β_{i+1}(K) = β_{i+n}(M) - β_i(M) for i in [H/2, H - n]."""
    bM = betti_numbers(M, H, cache).betti
    bK = betti_numbers(K, H, cache).betti
    lo, hi = H // 2, H - n
    ok = all(bK[i + 1] == bM[i + n] - bM[i] for i in range(lo, hi + 1))
    return ok, (lo, hi)


def check_certificate(M: GradedModule, cert: Certificate, H: int | None = None,
                      cache=None) -> CertVerdict:
    """Re-verify every condition of a certificate from scratch."""
    H = cert.H if H is None else H
    M = minimalize(M)
    dM = depth(M, cache).depth
    if not cert.chain:
        if projective_dimension(M, H, cache) is None:
            return CertVerdict(False, "empty chain but no zero Betti number within H")
        return CertVerdict(True, "finite projective dimension")
    prev = M
    prev_cx = _cx(M, H, cache)
    rec = []
    for i, link in enumerate(cert.chain):
        eta = link.eta
        if eta.n < 1:
            return CertVerdict(False, "class of non-positive degree", i, rec)
        if eta.source.presentation != minimalize(prev).presentation or not eta.is_endo:
            return CertVerdict(False, "class does not live on the previous module", i, rec)
        if not eta.is_cocycle():
            return CertVerdict(False, "not a cocycle", i, rec)
        P = pushout(eta)
        if not P.ses_verified:
            return CertVerdict(False, f"short exact sequence fails: {P.checks}", i, rec)
        if not is_isomorphic(P.K, link.K):
            return CertVerdict(False, "stored K is not isomorphic to the recomputed pushout",
                               i, rec)
        if depth(P.K, cache).depth != dM:
            return CertVerdict(False, "depth condition fails", i, rec)
        cx = _cx(P.K, H, cache)
        if cx.value is None or _cx_value(cx) >= _cx_value(prev_cx):
            return CertVerdict(False, f"complexity does not drop ({prev_cx.value} -> "
                                      f"{cx.value})", i, rec)
        rec.append(betti_recurrence(prev, P.K, eta.n, H, cache))
        prev, prev_cx = P.K, cx
    if projective_dimension(prev, H, cache) is None:
        return CertVerdict(False, "terminal module has no zero Betti number within H",
                           len(cert.chain) - 1, rec)
    return CertVerdict(True, "all conditions verified", None, rec)


def _finish(M, chain, H, cache) -> Certificate:
    mods = [M] + [link.K for link in chain]
    cx = [_cx(X, H, cache) for X in mods]
    dp = [depth(X, cache).depth for X in mods]
    return Certificate(M, chain, projective_dimension(mods[-1], H, cache), cx, dp, H)


@dataclass
class SearchDiagnostics:
    classes_tried: int = 0
    best_cx: int | None = None
    exhausted: bool = False

    def to_json(self):
        return {"classes_tried": self.classes_tried, "best_cx": self.best_cx,
                "exhausted": self.exhausted}


def _candidates(X, n, rng, extra, cache):
    basis = ext_class_basis(X, n, cache=cache)
    out = list(basis)
    by_deg: dict = {}
    for c in basis:
        by_deg.setdefault(c.degree, []).append(c)
    p = X.ring.p
    for e, group in sorted(by_deg.items()):
        if len(group) < 2:
            continue
        for _ in range(extra):
            coeffs = rng.integers(0, p, size=len(group))
            if not coeffs.any():
                continue
            acc = None
            for c, a in zip(group, coeffs.tolist()):
                if a:
                    term = c.scale(a)
                    acc = term if acc is None else acc + term
            out.append(acc)
    return out


def search_certificate(M: GradedModule, max_hdeg: int = 4, H: int = DEFAULT_H,
                       budget: int = 200, seed: int = 0, cache=None,
                       diagnostics: SearchDiagnostics | None = None) -> Certificate | None:
    """Depth-first search for a certificate.

    Candidates are basis classes of Ext^n(X, X) for n = 1..max_hdeg plus a
    few seeded random combinations within each internal degree.  Smaller n is
    tried first, then larger complexity drop, then smaller |internal degree|.
    Returns None when the budget of pushouts is spent.
    """
    diag = diagnostics if diagnostics is not None else SearchDiagnostics()
    M = minimalize(M)
    rng = np.random.default_rng(seed)
    if projective_dimension(M, H, cache) is not None:
        return _finish(M, [], H, cache)
    cx0 = _cx(M, H, cache)
    if cx0.value is None:
        return None
    dM = depth(M, cache).depth

    def dfs(X, cxX):
        if projective_dimension(X, H, cache) is not None:
            return []
        for n in range(1, max_hdeg + 1):
            scored = []
            for idx, eta in enumerate(_candidates(X, n, rng, 4, cache)):
                if diag.classes_tried >= budget:
                    diag.exhausted = True
                    return None
                diag.classes_tried += 1
                if eta.is_zero():
                    continue
                P = pushout(eta)
                if not P.ses_verified:
                    continue
                cxK = _cx(P.K, H, cache)
                if cxK.value is None or cxK.value >= cxX.value:
                    continue
                if depth(P.K, cache).depth != dM:
                    continue
                if diag.best_cx is None or cxK.value < diag.best_cx:
                    diag.best_cx = cxK.value
                scored.append((-(cxX.value - cxK.value), abs(eta.degree), idx, eta, P, cxK))
            scored.sort(key=lambda s: s[:3])
            for _, _, _, eta, P, cxK in scored:
                rest = dfs(P.K, cxK)
                if rest is not None:
                    return [Link(eta, P.K, P.ses_verified)] + rest
                if diag.exhausted:
                    return None
        return None

    chain = dfs(M, cx0)
    if chain is None:
        return None
    return _finish(M, chain, H, cache)


# -- transport across syzygies


def _free_complement(X: GradedModule, Z: GradedModule):
    """Shifts of a free Q with Z ≅ X ⊕ Q as far as Hilbert functions tell, or None."""
    ring = X.ring
    mods = [X, Z]
    lo = min([min(Y.gens) for Y in mods if Y.gens], default=0)
    hi = max([Y.degree_range()[1] for Y in mods if Y.gens], default=lo)
    if not ring.is_artinian:
        hi = min(hi, ring.max_degree)
    diff = {d: Z.dim(d) - X.dim(d) for d in range(lo, hi + 1)}
    ranks = free_decomposition(ring, diff, lo, hi)
    if ranks is None:
        return None
    return [d for d, r in ranks for _ in range(r)]


def _iso_with_free(X: GradedModule, Z: GradedModule, seed: int = 0):
    """(pre: Z -> X, post: X -> Z) from an isomorphism Z ≅ X ⊕ Q, Q free."""
    ring = X.ring
    X, Z = minimalize(X), minimalize(Z)
    qs = _free_complement(X, Z)
    if qs is None:
        raise RuntimeError("modules do not differ by a free summand")
    S = minimalize(direct_sum(X, GradedModule.free(ring, tuple(qs)))) if qs else X
    r = is_isomorphic(S, Z, seed=seed)
    if not r:
        raise RuntimeError(f"no isomorphism to the expected module ({r.reason})")
    phi, psi = r.witness, r.inverse  # S -> Z, Z -> S
    nx = X.num_generators
    one, z = ring.const(1), ring.zero()
    ns = S.num_generators
    iota = ModuleMap(ring, FreeModule(X.gens), FreeModule(S.gens),
                     [[one if i == j else z for j in range(nx)] for i in range(ns)])
    proj = ModuleMap(ring, FreeModule(S.gens), FreeModule(X.gens),
                     [[one if i == j else z for j in range(ns)] for i in range(nx)])
    pre = ModuleHom(Z, X, proj.compose(psi.matrix))
    post = ModuleHom(X, Z, phi.matrix.compose(iota))
    return pre, post


def _transfer(chain: list, X: GradedModule, Z: GradedModule, H, cache, seed=0) -> list:
    """Move a chain certified for X onto Z ≅ X ⊕ (free)."""
    if not chain:
        return []
    pre, post = _iso_with_free(X, Z, seed)
    link = chain[0]
    eta = transport_class(link.eta, pre, post, cache)
    P = pushout(eta)
    rest = _transfer(chain[1:], link.K, P.K, H, cache, seed)
    return [Link(eta, P.K, P.ses_verified)] + rest


def _transport_chain(M: GradedModule, chain: list, H: int, cache) -> tuple:
    """(Ω¹M, chain certified for it) following the horseshoe construction."""
    M = minimalize(M)
    resM = resolution(M, H + 2, cache)
    L = omega(M, 1, resM)
    if not chain:
        return L, []
    link = chain[0]
    eta = link.eta
    n = eta.n
    resM = resolution(M, max(H + 2, n + 3), cache)
    eta = ExtClass(M, M, n, eta.cocycle, resM, eta.normalized)
    g1 = lift_chain_map(eta, 1, cache=cache)[1]  # F_{n+1} -> F_1
    resL = resolution(L, n + 2, cache)
    if resL.free(n).shifts != resM.free(n + 1).shifts:
        raise RuntimeError("syzygy resolution does not match the shifted resolution")
    theta = ExtClass(L, L, n, g1, resL, False)
    P = pushout(theta)
    OmK, sub = _transport_chain(link.K, chain[1:], H, cache)
    rest = _transfer(sub, OmK, P.K, H, cache)
    return L, [Link(theta, P.K, P.ses_verified)] + rest


def syzygy_transport(cert: Certificate, cache=None) -> Certificate:
    """Certificate for Ω¹(M) built from the lifted classes of ``cert``."""
    M = cert.module
    if not is_cohen_macaulay(M.ring):
        raise ValueError("ring is not Cohen-Macaulay")
    L, chain = _transport_chain(M, cert.chain, cert.H, cache)
    out = _finish(minimalize(L), chain, cert.H, cache)
    v = check_certificate(out.module, out, cache=cache)
    if not v.passed:
        raise RuntimeError(f"transported certificate failed re-verification: {v.reason}")
    return out


# -- MCM approximations and hulls


@dataclass
class SESResult:
    """0 -> left -> middle -> right -> 0 with maps given on generators."""

    left: GradedModule
    middle: GradedModule
    right: GradedModule
    inclusion: ModuleHom
    projection: ModuleHom
    checks: dict
    steps: int
    pd_witness: int | None  # pd of the finite-dimension end
    mcm_depth: float  # depth of the MCM end

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {
            "left": self.left.presentation.to_json(), "left_gens": list(self.left.gens),
            "middle": self.middle.presentation.to_json(),
            "right": self.right.presentation.to_json(),
            "checks": self.checks, "steps": self.steps, "pd_witness": self.pd_witness,
            "mcm_depth": _j(self.mcm_depth),
        }


def _require_ci(ring):
    if not ring.is_complete_intersection:
        raise ValueError("ring is not a recognized complete intersection")


def _reducing_power(Y: GradedModule, H: int, cache, seed: int):
    """(η^t, t) with η the first link of a certificate for Y and t minimal such
    that Ω^{t|η|-1}(Y) is MCM."""
    cert = search_certificate(Y, H=H, cache=cache, seed=seed)
    if cert is None or not cert.chain:
        raise RuntimeError("no complexity-reducing class found")
    eta = cert.chain[0].eta
    n = eta.n
    for t in range(1, max(H // n, 1) + 1):
        res = resolution(Y, t * n + 1, cache)
        if is_mcm(omega(Y, t * n - 1, res), cache):
            return power(eta, t, cache), t
    raise RuntimeError("no syzygy within H is maximal Cohen-Macaulay")


def _restrict(h_cols, kept):
    return [h_cols[j] for j in kept]


def _pushout_square(eta: ExtClass, C: GradedModule, y_to_c: list):
    """C' = pushout of C <- Y -> K_η with y_to_c the images of gens(Y) in C.

    Returns (C', Kraw, K->C' columns).  C' is presented on gens(C) ⊕ F_{n-1}(e).
    """
    ring = C.ring
    n, e = eta.n, eta.degree
    res = eta.res
    Fp = res.free(n - 1).shifted(e)
    gens = FreeModule(C.gens) + Fp
    z = ring.zero()
    cols, degs = [], []
    for c, s in zip(C.presentation.columns(), C.rel_shifts):
        cols.append(tuple(c) + (z,) * Fp.rank)
        degs.append(s)
    dn = res.d(n)
    for j, b in enumerate(res.free(n).shifts):
        img = [z] * C.num_generators
        for k, f in enumerate(eta.cocycle.column(j)):
            if f:
                for i, g in enumerate(y_to_c[k]):
                    if g:
                        img[i] = img[i] + f * g
        cols.append(tuple(img) + tuple(-f for f in dn.column(j)))
        degs.append(b + e)
    Cp = GradedModule(ModuleMap.from_columns(ring, FreeModule(degs), gens, cols))
    one = ring.const(1)
    k_to_c = [tuple(y_to_c[k]) + (z,) * Fp.rank for k in range(len(y_to_c))]
    for j in range(Fp.rank):
        k_to_c.append((z,) * C.num_generators + tuple(one if i == j else z
                                                      for i in range(Fp.rank)))
    return Cp, k_to_c


def _hom(ring, S, T, cols):
    return ModuleHom(S, T, ModuleMap.from_columns(ring, FreeModule(S.gens), FreeModule(T.gens),
                                                  cols))


def mcm_approximation(M: GradedModule, H: int = DEFAULT_H, seed: int = 0,
                      cache=None) -> SESResult:
    """0 -> Y -> C -> M -> 0 with C maximal Cohen-Macaulay and pd Y finite."""
    ring = M.ring
    _require_ci(ring)
    M = minimalize(M)
    one, z = ring.const(1), ring.zero()
    if is_mcm(M, cache):
        Y = GradedModule.free(ring, ())
        ident = [tuple(one if i == j else z for i in range(M.num_generators))
                 for j in range(M.num_generators)]
        inc = _hom(ring, Y, M, [])
        prj = _hom(ring, M, M, ident)
        return SESResult(Y, M, M, inc, prj, verify_ses(Y, M, M, inc, prj), 0, -1,
                         depth(M, cache).depth)
    res = resolution(M, 2, cache)
    # start from the free cover: 0 -> Ω¹M -> F_0 -> M -> 0
    C = GradedModule.free(ring, res.free(0).shifts)
    Y = omega(M, 1, res)
    y_to_c = list(res.d(1).columns())
    c_to_m = [tuple(one if i == j else z for i in range(M.num_generators))
              for j in range(M.num_generators)]
    steps = 0
    while projective_dimension(Y, H, cache) is None:
        Ym, kept, _ = minimalize_with_map(Y)
        y_to_c = _restrict(y_to_c, kept)
        eta_t, _ = _reducing_power(Ym, H, cache, seed)
        C, k_to_c = _pushout_square(eta_t, C, y_to_c)
        from .yoneda import pushout_module

        Y = pushout_module(eta_t)
        y_to_c = k_to_c
        c_to_m = c_to_m + [(z,) * M.num_generators] * (C.num_generators - len(c_to_m))
        steps += 1
        if steps > H:
            raise RuntimeError("H exhausted before finite projective dimension was witnessed")
    inc = _hom(ring, Y, C, y_to_c)
    prj = _hom(ring, C, M, c_to_m)
    checks = verify_ses(Y, C, M, inc, prj)
    dC = depth(C, cache)
    checks["middle_mcm"] = dC.is_mcm
    return SESResult(Y, C, M, inc, prj, checks, steps, projective_dimension(Y, H, cache),
                     dC.depth)


def fid_hull(M: GradedModule, H: int = DEFAULT_H, seed: int = 0, cache=None) -> SESResult:
    """0 -> M -> Y -> C -> 0 with C maximal Cohen-Macaulay and pd Y finite."""
    from .yoneda import pushout_module

    ring = M.ring
    _require_ci(ring)
    M = minimalize(M)
    one, z = ring.const(1), ring.zero()
    nM = M.num_generators
    ident = [tuple(one if i == j else z for i in range(nM)) for j in range(nM)]
    if projective_dimension(M, H, cache) is not None:
        Cz = GradedModule.free(ring, ())
        inc = _hom(ring, M, M, ident)
        prj = _hom(ring, M, Cz, [()] * nM)
        return SESResult(M, M, Cz, inc, prj, verify_ses(M, M, Cz, inc, prj), 0,
                         projective_dimension(M, H, cache), float("inf"))
    # first sequence from a power of a reducing class on M
    eta_t, _ = _reducing_power(M, H, cache, seed)
    P = pushout(eta_t)
    Y = P.K_raw
    C = P.cokernel
    m_to_y = [tuple(c) for c in P.inclusion.matrix.columns()]
    y_to_c = [tuple(c) for c in P.projection.matrix.columns()]
    steps = 1
    while projective_dimension(Y, H, cache) is None:
        Ym, kept, express = minimalize_with_map(Y)
        # M -> Y_min through the expression of old generators in kept ones
        m_to_y = [_apply(ring, express, col) for col in m_to_y]
        y_to_c = _restrict(y_to_c, kept)
        eta_t, _ = _reducing_power(Ym, H, cache, seed)
        C, k_to_c = _pushout_square(eta_t, C, y_to_c)
        Y = pushout_module(eta_t)
        nF = Y.num_generators - Ym.num_generators
        m_to_y = [tuple(c) + (z,) * nF for c in m_to_y]
        y_to_c = k_to_c
        steps += 1
        if steps > H:
            raise RuntimeError("H exhausted before finite projective dimension was witnessed")
    inc = _hom(ring, M, Y, m_to_y)
    prj = _hom(ring, Y, C, y_to_c)
    checks = verify_ses(M, Y, C, inc, prj)
    dC = depth(C, cache)
    checks["right_mcm"] = dC.is_mcm
    return SESResult(M, Y, C, inc, prj, checks, steps, projective_dimension(Y, H, cache),
                     dC.depth)


def _apply(ring, express, col):
    """Rewrite a column over old generators as a column over the kept ones."""
    z = ring.zero()
    width = len(express[0]) if express else 0
    out = [z] * width
    for j, f in enumerate(col):
        if f:
            for i, g in enumerate(express[j]):
                if g:
                    out[i] = out[i] + f * g
    return tuple(ring.normal_form(x) for x in out)


# -- Tor transfer


@dataclass
class TorTransferResult:
    X: GradedModule
    Y: GradedModule
    tor_before: tuple
    tor_after: tuple
    depths_before: tuple
    depths_after: tuple
    pd_after: tuple
    steps: int

    @property
    def preserved(self) -> bool:
        w = len(self.tor_before)
        return self.tor_before[1:w] == self.tor_after[1:w]

    def to_json(self):
        return {
            "tor_before": list(self.tor_before), "tor_after": list(self.tor_after),
            "depths_before": [_j(d) for d in self.depths_before],
            "depths_after": [_j(d) for d in self.depths_after],
            "pd_after": list(self.pd_after), "steps": self.steps, "preserved": self.preserved,
        }


def tor_transfer(X: GradedModule, Y: GradedModule, H: int = DEFAULT_H, seed: int = 0,
                 cache=None) -> TorTransferResult:
    """X', Y' of finite projective dimension with the same depths and the same
    Tor_i for 1 <= i <= H/2."""
    ring = X.ring
    _require_ci(ring)
    X, Y = minimalize(X), minimalize(Y)
    T = tor_table(X, Y, H, cache)
    if any(T.total(i) for i in range(H // 2 + 1, H + 1)):
        raise ValueError("precondition: Tor_i(X, Y) does not vanish in the top half of the window")
    q = max([i for i in range(1, H // 2 + 1) if T.total(i)], default=0)
    before = tuple(T.total(i) for i in range(H // 2 + 1))
    dep0 = (depth(X, cache).depth, depth(Y, cache).depth)
    Xc, Yc = X, Y
    steps = 0
    # one side already of finite pd: nothing to replace
    sides = () if any(projective_dimension(Z, H, cache) is not None for Z in (X, Y)) else (0, 1)
    for side in sides:
        while True:
            cur = Xc if side == 0 else Yc
            if projective_dimension(cur, H, cache) is not None:
                break
            cert = search_certificate(cur, H=H, cache=cache, seed=seed)
            if cert is None or not cert.chain:
                raise RuntimeError("no complexity-reducing class found")
            eta = cert.chain[0].eta
            t = 1
            while t * eta.n - 1 < q:
                t += 1
            K = pushout(power(eta, t, cache)).K
            if side == 0:
                Xc = K
            else:
                Yc = K
            steps += 1
            if steps > 4 * H:
                raise RuntimeError("H exhausted before finite projective dimension was witnessed")
    T2 = tor_table(Xc, Yc, H // 2, cache)
    after = tuple(T2.total(i) for i in range(H // 2 + 1))
    return TorTransferResult(
        Xc, Yc, before, after, dep0, (depth(Xc, cache).depth, depth(Yc, cache).depth),
        (projective_dimension(Xc, H, cache), projective_dimension(Yc, H, cache)), steps)
