"""Ext classes as cocycles, chain-map lifts, Yoneda products and pushouts.

A class in Ext^n(M, N) of internal degree e is a homogeneous map
F_n -> gens(N) raising degrees by e, where F_n is the n-th free module of the
minimal resolution of M.  Pushing the resolution out along it gives

    0 -> N -> K -> Ω^{n-1}(M)(e) -> 0

with K presented on gens(N) ⊕ F_{n-1}(e) by the relations of N together with
one column (f(b), -d_n(b)) for each basis element b of F_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gradedmod import (
    FreeModule, GradedModule, ModuleHom, ModuleMap, minimalize, shift,
)
from .resolve import Resolution, omega, resolution


# -- cocycle coordinates


def _hom_dims(F: FreeModule, N: GradedModule, e: int):
    return [N.dim(b + e) for b in F.shifts]


def _coboundary(d: ModuleMap, N: GradedModule, e: int) -> np.ndarray:
    from .homalg import _hom_block

    return _hom_block(d, N, e)


def _cell_ok(res: Resolution, n: int, N: GradedModule, e: int) -> bool:
    """Every graded piece of N touched by the cell (n, e) is computed exactly."""
    ring = N.ring
    if ring.is_artinian:
        return True
    sh = res.free(n).shifts + res.free(n + 1).shifts
    return not sh or max(sh) + e <= ring.max_degree


def _vec_to_map(F: FreeModule, N: GradedModule, v, e: int) -> ModuleMap:
    dims = _hom_dims(F, N, e)
    off = np.cumsum([0] + dims)
    cols = []
    for j, b in enumerate(F.shifts):
        q = np.asarray(v[off[j]:off[j + 1]], dtype=np.int64)
        cols.append(N.vector_to_polys(N.from_quotient(q, b + e), b + e))
    return ModuleMap.from_columns(N.ring, F, FreeModule(N.gens), cols, e)


def _map_to_vec(f: ModuleMap, N: GradedModule) -> np.ndarray:
    e = f.degree
    parts = []
    for j, b in enumerate(f.source.shifts):
        parts.append(N.to_quotient(N.polys_to_vector(f.column(j), b + e), b + e))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


@dataclass
class ExtClass:
    """Homogeneous element of Ext^n(M, N) represented by ``cocycle``: F_n -> gens(N)."""

    source: GradedModule
    target: GradedModule
    n: int
    cocycle: ModuleMap
    res: Resolution = field(repr=False)
    normalized: bool = False

    @property
    def degree(self) -> int:
        return self.cocycle.degree

    @property
    def is_endo(self) -> bool:
        return self.source is self.target or (
            self.source.presentation == self.target.presentation)

    def vector(self) -> np.ndarray:
        return _map_to_vec(self.cocycle, self.target)

    def _boundary_rref(self):
        e = self.degree
        if self.n == 0:
            return None
        B = _coboundary(self.res.d(self.n), self.target, e)
        if not B.size:
            return None
        return linalg.rref(B.T, self.source.ring.p)

    def is_cocycle(self) -> bool:
        N = self.target
        d = self.res.d(self.n + 1) if self.res.free(self.n + 1).rank else None
        if d is None:
            return True
        comp = self.cocycle.compose(d)
        for j, s in enumerate(comp.source.shifts):
            deg = s + comp.degree
            if N.reduce(N.polys_to_vector(comp.column(j), deg), deg).any():
                return False
        return True

    def normalize(self) -> "ExtClass":
        """Canonical representative modulo coboundaries."""
        v = self.vector()
        rr = self._boundary_rref()
        if rr is not None:
            v = linalg.reduce_vector(rr[0], rr[1], v, self.source.ring.p)
        f = _vec_to_map(self.res.free(self.n), self.target, v, self.degree)
        return ExtClass(self.source, self.target, self.n, f, self.res, True)

    def is_zero(self) -> bool:
        return not self.normalize().vector().any()

    def scale(self, c: int) -> "ExtClass":
        ring = self.source.ring
        rows = [[f * (c % ring.p) for f in row] for row in self.cocycle.entries]
        f = ModuleMap(ring, self.cocycle.source, self.cocycle.target, rows, self.degree)
        return ExtClass(self.source, self.target, self.n, f, self.res, False)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        if (self.n, self.degree) != (other.n, other.degree):
            raise ValueError("classes live in different bidegrees")
        ring = self.source.ring
        rows = [[a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.cocycle.entries, other.cocycle.entries)]
        f = ModuleMap(ring, self.cocycle.source, self.cocycle.target, rows, self.degree)
        return ExtClass(self.source, self.target, self.n, f, self.res, False)

    def equals(self, other: "ExtClass") -> bool:
        if (self.n, self.degree) != (other.n, other.degree):
            return False
        return (self + other.scale(-1)).is_zero()

    def to_json(self):
        return {"n": self.n, "degree": self.degree, "cocycle": self.cocycle.to_json()}

    @classmethod
    def from_json(cls, M: GradedModule, N: GradedModule, data, H: int | None = None):
        n = data["n"]
        res = resolution(M, max(n + 1, H or 0))
        f = ModuleMap.from_json(M.ring, data["cocycle"])
        return cls(minimalize(M), minimalize(N), n, f, res, False)


def ext_class_basis(M: GradedModule, n: int, N: GradedModule | None = None,
                    degrees=None, cache=None) -> list:
    """Cocycles representing a k-basis of Ext^n(M, N) (N = M by default).

    Within each internal degree the representatives are the rows of the
    reduced echelon form of the cocycle space modulo coboundaries, so the
    basis is canonical.
    """
    if n < 1:
        raise ValueError("n must be positive")
    M = minimalize(M)
    N = M if N is None else minimalize(N)
    res = resolution(M, n + 1, cache)
    Fn = res.free(n)
    if not Fn.rank or not N.gens:
        return []
    p = M.ring.p
    lo, hi = N.degree_range()
    if degrees is None:
        degrees = range(lo - max(Fn.shifts), hi - min(Fn.shifts) + 1)
    out = []
    for e in degrees:
        if not _cell_ok(res, n, N, e):
            continue
        c = sum(_hom_dims(Fn, N, e))
        if not c:
            continue
        if res.free(n + 1).rank:
            Zc = _coboundary(res.d(n + 1), N, e)
            Z = linalg.nullspace(Zc, p) if Zc.shape[0] else np.eye(c, dtype=np.int64)
        else:
            Z = np.eye(c, dtype=np.int64)
        if not Z.shape[0]:
            continue
        B = _coboundary(res.d(n), N, e)
        if B.size and B.shape[1]:
            RB, pivB = linalg.rref(B.T, p)
            Z = linalg.reduce_rows(RB, pivB, Z, p)
        R, _ = linalg.rref(Z, p)
        for v in R:
            f = _vec_to_map(Fn, N, v, e)
            out.append(ExtClass(M, N, n, f, res, True))
    return out


# -- chain maps and products


def _free_probe(ring, F: FreeModule):
    cache = ring.__dict__.setdefault("_free_probes", {})
    P = cache.get(F.shifts)
    if P is None:
        P = GradedModule.free(ring, F.shifts)
        cache[F.shifts] = P
    return P


def lift_chain_map(eta: ExtClass, steps: int, res_target: Resolution | None = None,
                   cache=None) -> list:
    """Maps g_i: F_{n+i} -> G_i (i = 0..steps) with ∂_i g_i = g_{i-1} d_{n+i}.

    G is the minimal resolution of the target module; g_0 is the cocycle.
    Each g_i is the solution of a degreewise linear system with free
    variables set to zero.
    """
    M, N, n = eta.source, eta.target, eta.n
    ring = M.ring
    p = ring.p
    e = eta.degree
    res = eta.res
    if res.length < n + steps and not res.complete:
        res = resolution(M, n + steps, cache)
    G = res if eta.is_endo and res_target is None else res_target
    if G is None or (G.length < steps and not G.complete):
        G = resolution(N, max(steps, 1), cache)
    if G is res and res.length < max(steps, n + steps):
        G = res = resolution(M, n + steps, cache)
    gs = [eta.cocycle]
    for i in range(1, steps + 1):
        src = res.free(n + i)
        tgt = G.free(i)
        if not src.rank:
            gs.append(ModuleMap.zero(ring, src, tgt, e))
            continue
        rhs_map = gs[-1].compose(res.d(n + i))
        dG = G.d(i)
        probe_prev = _free_probe(ring, G.free(i - 1))
        probe = _free_probe(ring, tgt)
        cols = []
        for j, b in enumerate(src.shifts):
            deg = b + e
            rhs = probe_prev.polys_to_vector(rhs_map.column(j), deg)
            if not tgt.rank:
                if rhs.any():
                    raise RuntimeError("lifting failed: cocycle condition violated")
                cols.append(())
                continue
            A = dG.degree_matrix(deg)
            x = linalg.solve(A, rhs, p) if A.size else (
                np.zeros(len(ring.free_basis(tgt.shifts, deg)[0]), dtype=np.int64)
                if not rhs.any() else None)
            if x is None:
                raise RuntimeError(f"lifting failed at step {i}: cocycle condition violated")
            cols.append(probe.vector_to_polys(x, deg))
        gs.append(ModuleMap.from_columns(ring, src, tgt, cols, e))
    return gs


def yoneda_product(theta2: ExtClass, theta1: ExtClass, cache=None) -> ExtClass:
    """θ2 · θ1 for θ1 in Ext^{n1}(M, M) and θ2 in Ext^{n2}(M, N')."""
    if not theta1.is_endo:
        raise ValueError("θ1 must be an endomorphism class of M")
    if theta2.source.presentation != theta1.source.presentation:
        raise ValueError("classes are not composable")
    n1, n2 = theta1.n, theta2.n
    M = theta1.source
    res = resolution(M, n1 + n2 + 1, cache)
    th1 = ExtClass(M, M, n1, theta1.cocycle, res, theta1.normalized)
    g = lift_chain_map(th1, n2, cache=cache)[n2]
    f = theta2.cocycle.compose(g)
    return ExtClass(M, theta2.target, n1 + n2, f, res, False)


def power(eta: ExtClass, t: int, cache=None) -> ExtClass:
    """η^t = η · η^{t-1}."""
    if t < 1:
        raise ValueError("t must be at least 1")
    out = eta
    for _ in range(t - 1):
        out = yoneda_product(eta, out, cache)
    return out


# -- pushout


@dataclass
class PushoutResult:
    K: GradedModule  # minimalized
    K_raw: GradedModule  # presented on gens(N) ⊕ F_{n-1}(e)
    cokernel: GradedModule  # Ω^{n-1}(M) shifted by e
    inclusion: ModuleHom  # N -> K_raw
    projection: ModuleHom  # K_raw -> cokernel
    ses_verified: bool
    checks: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "K": self.K.presentation.to_json(),
            "K_gens": list(self.K.gens),
            "ses_verified": self.ses_verified,
            "checks": self.checks,
        }


def pushout_module(eta: ExtClass) -> GradedModule:
    """The unminimalized K on gens(N) ⊕ F_{n-1}(e)."""
    M, N, n, e = eta.source, eta.target, eta.n, eta.degree
    ring = M.ring
    res = eta.res
    Fp = res.free(n - 1).shifted(e)
    gens = FreeModule(N.gens) + Fp
    z = ring.zero()
    cols, degs = [], []
    for c, s in zip(N.presentation.columns(), N.rel_shifts):
        cols.append(tuple(c) + (z,) * Fp.rank)
        degs.append(s)
    dn = res.d(n)
    for j, b in enumerate(res.free(n).shifts):
        top = eta.cocycle.column(j)
        bot = tuple(-f for f in dn.column(j))
        cols.append(tuple(top) + bot)
        degs.append(b + e)
    return GradedModule(ModuleMap.from_columns(ring, FreeModule(degs), gens, cols))


def pushout(eta: ExtClass, verify: bool = True) -> PushoutResult:
    """K_η with the short exact sequence 0 -> N -> K_η -> Ω^{n-1}(M)(e) -> 0."""
    if not eta.is_cocycle():
        raise ValueError("not a cocycle")
    M, N, n, e = eta.source, eta.target, eta.n, eta.degree
    ring = M.ring
    res = eta.res
    Kr = pushout_module(eta)
    Om = shift(omega(M, n - 1, res), e)
    rN = N.num_generators
    rF = res.free(n - 1).rank
    one, z = ring.const(1), ring.zero()
    inc_rows = [[one if i == j else z for j in range(rN)] for i in range(rN)]
    inc_rows += [[z] * rN for _ in range(rF)]
    inc = ModuleHom(N, Kr, ModuleMap(ring, FreeModule(N.gens), FreeModule(Kr.gens), inc_rows))
    prj_rows = [[z] * rN + [one if i == j else z for j in range(rF)] for i in range(rF)]
    prj = ModuleHom(Kr, Om, ModuleMap(ring, FreeModule(Kr.gens), FreeModule(Om.gens), prj_rows))
    K = minimalize(Kr)
    checks = {}
    ok = True
    if verify:
        checks = verify_ses(N, Kr, Om, inc, prj)
        ok = all(checks.values())
    return PushoutResult(K, Kr, Om, inc, prj, ok, checks)


def verify_ses(A: GradedModule, B: GradedModule, C: GradedModule, i: ModuleHom,
               q: ModuleHom) -> dict:
    """Degreewise exactness of 0 -> A -> B -> C -> 0 within the computed range."""
    ring = A.ring
    p = ring.p
    out = {"well_defined": i.is_well_defined() and q.is_well_defined()}
    lo = min([min(X.gens) for X in (A, B, C) if X.gens], default=0)
    hi = max([X.degree_range()[1] for X in (A, B, C) if X.gens], default=-1)
    if not ring.is_artinian:
        hi = min(hi, ring.max_degree)
    hs, inj, surj, cx = True, True, True, True
    for d in range(lo, hi + 1):
        a, b, c = A.dim(d), B.dim(d), C.dim(d)
        if a + c != b:
            hs = False
        Ia = i.quotient_matrix(d)
        Qb = q.quotient_matrix(d)
        if a and linalg.rank(Ia, p) != a:
            inj = False
        if c and linalg.rank(Qb, p) != c:
            surj = False
        if a and c and ((Qb @ Ia) % p).any():
            cx = False
    out.update(hilbert_additive=hs, injective=inj, surjective=surj, complex=cx)
    return out


# -- pushouts along products


@dataclass
class ProductPushoutReport:
    consistent: bool
    free_shifts: tuple  # graded ranks of F as (degree, rank) pairs
    omega_shift: int
    detail: str = ""

    def to_json(self):
        return {"consistent": self.consistent, "free_shifts": [list(x) for x in self.free_shifts],
                "omega_shift": self.omega_shift, "detail": self.detail}


def free_decomposition(ring, hs: dict, lo: int, hi: int):
    """Graded ranks r_s with Σ r_s HS(A)(t - s) = hs on [lo, hi], or None if some r_s < 0."""
    top = hi + (ring.top_degree if ring.is_artinian else 0)
    A = ring.hilbert_series(max(top - lo, 0) + 1)
    rem = dict(hs)
    ranks = []
    for d in range(lo, top + 1):
        r = rem.get(d, 0)
        if r < 0 or (r and d > hi):
            return None
        if r:
            ranks.append((d, r))
            for t in range(d, top + 1):
                rem[t] = rem.get(t, 0) - r * A[t - d]
    return tuple(ranks)


def product_pushout_bookkeeping(theta1: ExtClass, theta2: ExtClass, cache=None) -> ProductPushoutReport:
    """Hilbert-series consequence of 0 -> Ω^{|θ2|}(K_θ1) -> K_{θ2θ1} ⊕ F -> K_θ2 -> 0."""
    ring = theta1.source.ring
    K1 = pushout(theta1, verify=False).K
    K2 = pushout(theta2, verify=False).K
    K21 = pushout(yoneda_product(theta2, theta1, cache), verify=False).K
    s = theta2.degree
    n2 = theta2.n
    H = n2 + 1
    Om = shift(omega(K1, n2, resolution(K1, H, cache)), s)
    mods = [Om, K2, K21]
    lo = min([min(X.gens) for X in mods if X.gens], default=0)
    hi = max([X.degree_range()[1] for X in mods if X.gens], default=lo)
    if not ring.is_artinian:
        hi = min(hi, ring.max_degree)
    diff = {d: Om.dim(d) + K2.dim(d) - K21.dim(d) for d in range(lo, hi + 1)}
    ranks = free_decomposition(ring, diff, lo, hi)
    if ranks is None:
        return ProductPushoutReport(False, (), s, "difference is not the Hilbert series of a free module")
    return ProductPushoutReport(True, ranks, s, "")


def lift_module_map(h: ModuleHom, steps: int, cache=None) -> list:
    """Comparison maps c_i: F_i -> G_i (i <= steps) over a degree-0 map h: Y -> X,
    between the minimal resolutions F of Y and G of X."""
    Y, X = minimalize(h.source), minimalize(h.target)
    if h.source.presentation != Y.presentation or h.target.presentation != X.presentation:
        raise ValueError("lift_module_map expects maps between minimal presentations")
    res = resolution(Y, steps + 1, cache)
    resX = resolution(X, steps + 1, cache)
    pseudo = ExtClass(Y, X, 0, h.matrix, res, False)
    return lift_chain_map(pseudo, steps, res_target=resX, cache=cache)


def transport_class(eta: ExtClass, pre: ModuleHom, post: ModuleHom, cache=None) -> ExtClass:
    """The class post ∘ η ∘ pre in Ext^n(Z, W) for pre: Z -> M and post: N -> W.

    The cocycle is post ∘ f_η ∘ c_n where c is the lift of ``pre`` to the
    minimal resolutions.
    """
    n = eta.n
    Z = minimalize(pre.source)
    c = lift_module_map(pre, n, cache)[n]
    f = post.matrix.compose(eta.cocycle.compose(c))
    resZ = resolution(Z, n + 1, cache)
    W = minimalize(post.target)
    return ExtClass(Z, W, n, f, resZ, False)
