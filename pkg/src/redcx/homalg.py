"""Ext and Tor by degreewise linear algebra, depth, and the vanishing verdicts.

Every table records the homological bound H and the truncation degree D.  A
cell (i, e) is only computed when every graded piece it touches lies at or
below D; cells that would need more are skipped and the table is marked
truncated.  Over an Artinian ring nothing is ever skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gradedmod import (
    FreeModule, GradedModule, ModuleMap, minimalize, residue_field, tensor,
)
from .resolve import kernel_generators, projective_dimension, resolution

INF = math.inf


@dataclass
class HomologyTable:
    kind: str  # "ext" | "tor"
    dims: dict  # (i, internal degree) -> dimension, nonzero cells only
    H: int
    D: int
    truncated: bool
    source: GradedModule | None = field(default=None, repr=False, compare=False)
    target: GradedModule | None = field(default=None, repr=False, compare=False)

    def total(self, i: int) -> int:
        return sum(v for (j, _), v in self.dims.items() if j == i)

    def totals(self) -> tuple:
        return tuple(self.total(i) for i in range(self.H + 1))

    def vanishes(self, i: int) -> bool:
        return self.total(i) == 0

    def nonzero_indices(self) -> list:
        return sorted({i for (i, _), v in self.dims.items() if v})

    def to_json(self):
        return {
            "kind": self.kind,
            "H": self.H,
            "D": self.D,
            "truncated": self.truncated,
            "totals": list(self.totals()),
            "cells": [[i, e, v] for (i, e), v in sorted(self.dims.items())],
        }


class ExtTable(HomologyTable):
    pass


class TorTable(HomologyTable):
    pass


def _range_of(N: GradedModule):
    lo, hi = N.degree_range()
    return lo, hi


def _hom_block(d: ModuleMap, N: GradedModule, e: int) -> np.ndarray:
    """Coboundary Hom(F_{i-1}, N)_e -> Hom(F_i, N)_e, φ ↦ φ∘d."""
    a, b = d.target.shifts, d.source.shifts
    rdim = [N.dim(s + e) for s in b]
    cdim = [N.dim(s + e) for s in a]
    out = np.zeros((sum(rdim), sum(cdim)), dtype=np.int64)
    ro = np.cumsum([0] + rdim)
    co = np.cumsum([0] + cdim)
    for j in range(len(b)):
        if not rdim[j]:
            continue
        for k in range(len(a)):
            f = d.entries[k][j]
            if f and cdim[k]:
                out[ro[j]:ro[j + 1], co[k]:co[k + 1]] = N.act_matrix(f, a[k] + e)
    return out


def _tensor_block(d: ModuleMap, N: GradedModule, deg: int) -> np.ndarray:
    """Boundary (F_i ⊗ N)_deg -> (F_{i-1} ⊗ N)_deg."""
    a, b = d.target.shifts, d.source.shifts
    rdim = [N.dim(deg - s) for s in a]
    cdim = [N.dim(deg - s) for s in b]
    out = np.zeros((sum(rdim), sum(cdim)), dtype=np.int64)
    ro = np.cumsum([0] + rdim)
    co = np.cumsum([0] + cdim)
    for j in range(len(b)):
        if not cdim[j]:
            continue
        for k in range(len(a)):
            f = d.entries[k][j]
            if f and rdim[k]:
                out[ro[k]:ro[k + 1], co[j]:co[j + 1]] = N.act_matrix(f, deg - b[j])
    return out


def _rk(A, p):
    return linalg.rank(A, p) if A.size else 0


def ext_table(M: GradedModule, N: GradedModule, H: int, cache=None) -> ExtTable:
    """dim_k Ext^i(M, N)_e for i <= H from the complex Hom(F_•, N)."""
    ring = M.ring
    p = ring.p
    D = ring.max_degree
    N = minimalize(N)
    res = resolution(M, H + 1, cache)
    dims: dict = {}
    truncated = False
    if not N.gens:
        return ExtTable("ext", dims, H, D, False, M, N)
    nlo, nhi = _range_of(N)
    bounded = ring.is_artinian
    for i in range(H + 1):
        Fi = res.free(i)
        if not Fi.rank:
            continue
        Fn = res.free(i + 1)
        for e in range(nlo - max(Fi.shifts), nhi - min(Fi.shifts) + 1):
            if not bounded:
                top = max(Fi.shifts + Fn.shifts) + e
                if top > D:
                    truncated = True
                    continue
            c = sum(N.dim(b + e) for b in Fi.shifts)
            if not c:
                continue
            r_out = _rk(_hom_block(res.d(i + 1), N, e), p) if Fn.rank else 0
            r_in = _rk(_hom_block(res.d(i), N, e), p) if i >= 1 else 0
            v = c - r_out - r_in
            if v:
                dims[(i, e)] = v
    if not bounded:
        truncated = True
    return ExtTable("ext", dims, H, D, truncated, M, N)


def tor_table(M: GradedModule, N: GradedModule, H: int, cache=None) -> TorTable:
    """dim_k Tor_i(M, N)_d for i <= H from the complex F_• ⊗ N."""
    ring = M.ring
    p = ring.p
    D = ring.max_degree
    N = minimalize(N)
    res = resolution(M, H + 1, cache)
    dims: dict = {}
    if not N.gens:
        return TorTable("tor", dims, H, D, False, M, N)
    nlo, nhi = _range_of(N)
    bounded = ring.is_artinian
    for i in range(H + 1):
        Fi = res.free(i)
        if not Fi.rank:
            continue
        Fn = res.free(i + 1)
        hi = max(Fi.shifts) + nhi
        if not bounded:
            hi = min(hi, D)
        for deg in range(min(Fi.shifts) + nlo, hi + 1):
            c = sum(N.dim(deg - b) for b in Fi.shifts)
            if not c:
                continue
            r_in = _rk(_tensor_block(res.d(i + 1), N, deg), p) if Fn.rank else 0
            r_out = _rk(_tensor_block(res.d(i), N, deg), p) if i >= 1 else 0
            v = c - r_out - r_in
            if v:
                dims[(i, deg)] = v
    return TorTable("tor", dims, H, D, not bounded, M, N)


# -- homology as a module


def _hcat(ring, target: FreeModule, maps) -> ModuleMap:
    cols, shifts = [], []
    for m in maps:
        if m is None:
            continue
        cols.extend(m.columns())
        shifts.extend(m.source.shifts)
    return ModuleMap.from_columns(ring, FreeModule(shifts), target, cols)


def homology_module(incoming: ModuleMap, outgoing: ModuleMap,
                    mid_relations: ModuleMap | None = None,
                    out_relations: ModuleMap | None = None) -> GradedModule:
    """ker(outgoing) / im(incoming), minimalized.

    The middle and outgoing terms may be cokernels of free modules, given by
    ``mid_relations`` and ``out_relations``; by default they are free.
    """
    ring = outgoing.ring
    F = outgoing.source
    if incoming.target.shifts != F.shifts:
        raise ValueError("incoming and outgoing maps are not composable")
    comp = outgoing.compose(incoming)
    if out_relations is None:
        if not comp.is_zero():
            raise ValueError("outgoing ∘ incoming is not zero")
    else:
        T = GradedModule(out_relations)
        for j, s in enumerate(comp.source.shifts):
            if T.reduce(T.polys_to_vector(comp.column(j), s), s).any():
                raise ValueError("outgoing ∘ incoming is not zero")
    # cycles: v in F with outgoing(v) in im(out_relations)
    n = F.rank
    if out_relations is not None and out_relations.source.rank:
        big = _hcat(ring, outgoing.target, [outgoing, out_relations])
    else:
        big = outgoing
    degs, cols = kernel_generators(big)
    zdeg, zcols = [], []
    for s, c in zip(degs, cols):
        head = tuple(c[:n])
        if any(head):
            zdeg.append(s)
            zcols.append(head)
    Z = ModuleMap.from_columns(ring, FreeModule(zdeg), F, zcols)
    if not zdeg:
        return GradedModule.free(ring, ())
    # relations among the cycles modulo boundaries and middle relations
    rel_map = _hcat(ring, F, [Z, incoming if incoming.source.rank else None,
                              mid_relations if mid_relations is not None and
                              mid_relations.source.rank else None])
    rdeg, rcols = kernel_generators(rel_map)
    m = len(zdeg)
    keep = [(s, tuple(c[:m])) for s, c in zip(rdeg, rcols) if any(c[:m])]
    P = ModuleMap.from_columns(ring, FreeModule([s for s, _ in keep]), FreeModule(zdeg),
                               [c for _, c in keep])
    return minimalize(GradedModule(P))


def _kron(d: ModuleMap, N: GradedModule) -> ModuleMap:
    """d ⊗ id_{gens N} between the free modules F ⊗ gens(N)."""
    ring = d.ring
    g = N.gens
    src = FreeModule([b + s for b in d.source.shifts for s in g])
    tgt = FreeModule([a + s for a in d.target.shifts for s in g])
    z = ring.zero()
    rows = [[z] * src.rank for _ in range(tgt.rank)]
    for k in range(d.target.rank):
        for j in range(d.source.rank):
            f = d.entries[k][j]
            if f:
                for l in range(len(g)):
                    rows[k * len(g) + l][j * len(g) + l] = f
    return ModuleMap(ring, src, tgt, rows)


def _free_tensor_relations(F: FreeModule, N: GradedModule) -> ModuleMap:
    """Relations of F ⊗ N = ⊕ N(-b)."""
    ring = N.ring
    g = N.gens
    rel = N.presentation
    tgt = FreeModule([b + s for b in F.shifts for s in g])
    cols, shifts = [], []
    z = ring.zero()
    for j, b in enumerate(F.shifts):
        for c, e in zip(rel.columns(), rel.source.shifts):
            col = [z] * tgt.rank
            for l, f in enumerate(c):
                col[j * len(g) + l] = f
            cols.append(col)
            shifts.append(b + e)
    return ModuleMap.from_columns(ring, FreeModule(shifts), tgt, cols)


def tor_module(M: GradedModule, N: GradedModule, i: int, cache=None) -> GradedModule:
    """Tor_i(M, N) as a graded module (homology of F_• ⊗ N at position i)."""
    ring = M.ring
    N = minimalize(N)
    res = resolution(M, i + 1, cache)
    if i == 0:
        return minimalize(tensor(res.module, N))
    Fi = res.free(i)
    if not Fi.rank:
        return GradedModule.free(ring, ())
    inc = _kron(res.d(i + 1), N)
    out = _kron(res.d(i), N)
    return homology_module(inc, out, _free_tensor_relations(Fi, N),
                           _free_tensor_relations(res.free(i - 1), N))


# -- depth


@dataclass(frozen=True)
class DepthReport:
    depth: float  # int, or math.inf for the zero module
    first_nonvanishing: float
    dim: int  # Krull dimension of the ring
    is_mcm: bool

    def to_json(self):
        d = self.depth if self.depth != INF else "inf"
        return {"depth": d, "first_nonvanishing": d, "dim": self.dim, "is_mcm": self.is_mcm}


def depth(M: GradedModule, cache=None) -> DepthReport:
    """depth M = min { i : Ext^i(k, M) != 0 }; +inf for the zero module."""
    ring = M.ring
    dimA = ring.krull_dim
    M = minimalize(M)
    if not M.gens or M.is_zero():
        return DepthReport(INF, INF, dimA, True)
    T = ext_table(residue_field(ring), M, dimA, cache)
    for i in range(dimA + 1):
        if T.total(i):
            return DepthReport(i, i, dimA, i == dimA)
    # only reachable if the nonvanishing lies above the truncation degree
    return DepthReport(dimA, dimA, dimA, True)


def ring_depth(ring, cache=None) -> int:
    return depth(GradedModule.free(ring, (0,)), cache).depth


def is_mcm(M: GradedModule, cache=None) -> bool:
    return depth(M, cache).is_mcm


def is_cohen_macaulay(ring) -> bool:
    return ring_depth(ring) == ring.krull_dim


def is_gorenstein(ring, cache=None) -> bool:
    """Cohen-Macaulay of type one: dim_k Ext^{depth}(k, A) = 1."""
    d = ring_depth(ring, cache)
    if d != ring.krull_dim:
        return False
    T = ext_table(residue_field(ring), GradedModule.free(ring, (0,)), d, cache)
    return T.total(d) == 1


# -- indices


@dataclass(frozen=True)
class IndexBound:
    """sup of nonvanishing positions within 0..H, or the flag "≥ H"."""

    value: int | None
    at_least_H: bool
    H: int

    def __str__(self):
        if self.at_least_H:
            return f">= {self.H}"
        return "-inf" if self.value is None else str(self.value)

    def to_json(self):
        return {"value": self.value, "at_least_H": self.at_least_H, "H": self.H}


def _index_from_table(T: HomologyTable, finite_pd: bool) -> IndexBound:
    nz = T.nonzero_indices()
    top = max(nz) if nz else None
    if finite_pd:
        return IndexBound(top, False, T.H)
    if top is not None and top > T.H // 2:
        return IndexBound(None, True, T.H)
    return IndexBound(top, False, T.H)


def p_index(M, N, H, table: ExtTable | None = None, cache=None) -> IndexBound:
    """p(M, N) = sup { n : Ext^n(M, N) != 0 } as seen within 0..H.

    Exact when pd M is witnessed inside the window.  Otherwise any
    nonvanishing in the upper half of the window is reported as "≥ H".
    """
    T = table or ext_table(M, N, H, cache)
    fin = projective_dimension(M, H + 1, cache) is not None
    return _index_from_table(T, fin)


def q_index(M, N, H, table: TorTable | None = None, cache=None) -> IndexBound:
    """q(M, N) = sup { n : Tor_n(M, N) != 0 } as seen within 0..H."""
    T = table or tor_table(M, N, H, cache)
    fin = (projective_dimension(M, H + 1, cache) is not None
           or projective_dimension(N, H + 1, cache) is not None)
    return _index_from_table(T, fin)


# -- vanishing theorems


@dataclass(frozen=True)
class Verdict:
    finite: bool
    kind: str
    message: str
    t: int | None = None
    window_length: int = 0
    predicted: tuple | None = None  # (lo, hi) range for the index
    consistent: bool = True  # table agrees with the predicted vanishing

    def to_json(self):
        return {
            "finite": self.finite, "kind": self.kind, "message": self.message, "t": self.t,
            "window_length": self.window_length,
            "predicted": list(self.predicted) if self.predicted else None,
            "consistent": self.consistent,
        }


def certified_window_length(cert) -> int:
    """|η_1| + ... + |η_c| - c + 1 for a certificate with c links."""
    return sum(link.eta.n for link in cert.chain) - len(cert.chain) + 1


def vanishing_window_verdict(cert, table: HomologyTable, check: bool = True,
                             cache=None) -> Verdict:
    """Apply the vanishing-window criterion to a computed Ext or Tor table.

    A run of ``certified_window_length(cert)`` zero positions starting at some
    t > depth A - depth M forces the index to be finite: exactly
    depth A - depth M for Ext, within [depth A - depth M - depth N,
    depth A - depth M] for Tor.
    """
    M, N = table.source, table.target
    if check:
        from .reducible import check_certificate

        v = check_certificate(M, cert, cache=cache)
        if not v.passed:
            raise ValueError(f"certificate invalid: {v.reason}")
    ring = M.ring
    dA = ring_depth(ring, cache)
    dM = depth(M, cache).depth
    L = certified_window_length(cert)
    start = max(int(dA - dM) + 1, 1 if table.kind == "tor" else 0)
    for t in range(start, table.H - L + 2):
        if all(table.vanishes(t + i) for i in range(L)):
            bound = int(dA - dM)
            if table.kind == "ext":
                pred = (bound, bound)
                msg = f"finite, predicted value = {bound}"
            else:
                dN = depth(N, cache).depth
                lo = bound - dN if dN != INF else bound
                pred = (int(lo), bound)
                msg = f"finite, within [{int(lo)}, {bound}]"
            beyond = [i for i in table.nonzero_indices() if i > bound]
            return Verdict(True, table.kind, msg, t, L, pred, not beyond)
    return Verdict(False, table.kind, f"no window found <= {table.H}", None, L)


@dataclass(frozen=True)
class DepthFormulaReport:
    preconditions_met: bool
    failed: tuple
    depth_A: float
    depth_M: float
    depth_N: float
    depth_tensor: float | None
    holds: bool | None

    def to_json(self):
        f = lambda x: "inf" if x == INF else x  # noqa: E731
        return {
            "preconditions_met": self.preconditions_met, "failed": list(self.failed),
            "depth_A": f(self.depth_A), "depth_M": f(self.depth_M), "depth_N": f(self.depth_N),
            "depth_tensor": None if self.depth_tensor is None else f(self.depth_tensor),
            "holds": self.holds,
        }


def depth_formula_check(M, N, H: int = 10, cert=None, cache=None) -> DepthFormulaReport:
    """depth M + depth N = depth A + depth(M ⊗ N), when q(M, N) = 0, N is MCM
    and M carries a certificate."""
    ring = M.ring
    dA = ring_depth(ring, cache)
    dM = depth(M, cache).depth
    repN = depth(N, cache)
    failed = []
    q = q_index(M, N, H, cache=cache)
    if q.at_least_H or (q.value or 0) != 0:
        failed.append(f"q(M,N) = {q} is not 0")
    if not repN.is_mcm:
        failed.append("N is not maximal Cohen-Macaulay")
    if cert is None:
        from .reducible import search_certificate

        cert = search_certificate(M, max_hdeg=min(4, H), H=H, cache=cache)
        if cert is None:
            failed.append("no reducible-complexity certificate found for M")
    else:
        from .reducible import check_certificate

        v = check_certificate(M, cert, cache=cache)
        if not v.passed:
            failed.append(f"certificate invalid: {v.reason}")
    if failed:
        return DepthFormulaReport(False, tuple(failed), dA, dM, repN.depth, None, None)
    dT = depth(tensor(M, N), cache).depth
    return DepthFormulaReport(True, (), dA, dM, repN.depth, dT, dM + repN.depth == dA + dT)
