"""Minimal graded free resolutions, Betti numbers, syzygies and complexity."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .gradedmod import (
    FreeModule, GradedModule, ModuleMap, TruncationError, _poly_action, is_isomorphic,
    minimalize,
)


def _mult_by_var(ring, shifts, v, d):
    cache = ring.__dict__.setdefault("_var_action", {})
    key = (shifts, v, d)
    A = cache.get(key)
    if A is None:
        A = _poly_action(ring, shifts, ring.var(v), d)
        cache[key] = A
    return A


def kernel_generators(d: ModuleMap, step: int | None = None):
    """Minimal homogeneous generators of ker(d) as ``(degrees, columns)``.

    Degreewise: in each degree the kernel is computed exactly, the part
    generated by lower-degree kernel elements (variables times the previous
    kernel) is split off, and a complement is chosen from the canonical
    nullspace basis in order.
    """
    ring = d.ring
    p = ring.p
    F = d.source.shifts
    if not F:
        return [], []
    lo = min(F)
    hi = max(F) + ring.top_degree if ring.is_artinian else ring.max_degree
    probe = GradedModule.free(ring, F)
    degs, cols = [], []
    K_prev = None
    for e in range(lo, hi + 1):
        basis, _ = ring.free_basis(F, e)
        n = len(basis)
        if n == 0:
            K_prev = None
            continue
        A = d.degree_matrix(e)
        K = linalg.nullspace(A, p) if A.shape[0] else np.eye(n, dtype=np.int64)
        if K.shape[0] == 0:
            K_prev = K
            continue
        if K_prev is not None and K_prev.shape[0]:
            ims = [(_mult_by_var(ring, F, v, e - 1) @ K_prev.T) % p for v in range(ring.nvars)]
            S = np.hstack(ims).T
            SR, Spiv = linalg.rref(S, p)
        else:
            SR, Spiv = np.zeros((0, n), dtype=np.int64), []
        new, _, _ = linalg.extend_basis(SR, Spiv, K, p)
        if len(new):
            if not ring.is_artinian and e >= hi:
                where = f" at homological step {step}" if step is not None else ""
                raise TruncationError(
                    f"syzygy generator in degree {e} reaches the truncation degree{where}; "
                    f"raise max_degree"
                )
            for v in new:
                degs.append(e)
                cols.append(probe.vector_to_polys(v, e))
        K_prev = K
    return degs, cols


def syzygy_step(d: ModuleMap, step: int | None = None) -> ModuleMap:
    """Map from a free module onto a minimal generating set of ker(d)."""
    degs, cols = kernel_generators(d, step)
    return ModuleMap.from_columns(d.ring, FreeModule(degs), d.source, cols)


@dataclass
class BettiTable:
    betti: tuple
    graded_betti: dict = field(default_factory=dict)

    def __getitem__(self, i):
        return self.betti[i]

    def __len__(self):
        return len(self.betti)

    def to_json(self):
        return {
            "betti": list(self.betti),
            "graded": [[i, d, c] for (i, d), c in sorted(self.graded_betti.items())],
        }


@dataclass
class Resolution:
    module: GradedModule
    diffs: list  # diffs[i-1] is d_i : F_i -> F_{i-1}
    max_hdeg: int
    exactness_checked_to: int

    @property
    def complete(self) -> bool:
        """True when some F_i is zero, so the resolution is finite."""
        return any(d.source.rank == 0 for d in self.diffs) or not self.module.gens

    def free(self, i: int) -> FreeModule:
        if i == 0:
            return FreeModule(self.module.gens)
        if i <= len(self.diffs):
            return self.diffs[i - 1].source
        if self.complete:
            return FreeModule(())
        raise IndexError(f"resolution only computed to homological degree {len(self.diffs)}")

    def d(self, i: int) -> ModuleMap:
        if 1 <= i <= len(self.diffs):
            return self.diffs[i - 1]
        if self.complete and i >= 1:
            return ModuleMap.zero(self.module.ring, self.free(i), self.free(i - 1))
        raise IndexError(f"differential d_{i} not computed")

    @property
    def length(self) -> int:
        return len(self.diffs)

    def betti_table(self, H: int | None = None) -> BettiTable:
        H = self.max_hdeg if H is None else H
        betti, graded = [], {}
        for i in range(H + 1):
            F = self.free(i)
            betti.append(F.rank)
            for s in F.shifts:
                graded[(i, s)] = graded.get((i, s), 0) + 1
        return BettiTable(tuple(betti), graded)

    def truncated(self, H: int) -> "Resolution":
        return Resolution(self.module, self.diffs[:H], H, self.exactness_checked_to)

    def to_json(self):
        return {
            "module": self.module.presentation.to_json(),
            "diffs": [d.to_json() for d in self.diffs],
            "max_hdeg": self.max_hdeg,
            "exactness_checked_to": self.exactness_checked_to,
        }

    @classmethod
    def from_json(cls, ring, data):
        M = GradedModule(ModuleMap.from_json(ring, data["module"]))
        M.is_minimal = True
        diffs = [ModuleMap.from_json(ring, d) for d in data["diffs"]]
        return cls(M, diffs, data["max_hdeg"], data["exactness_checked_to"])


_MEMO: dict = {}


def module_key(M: GradedModule) -> str:
    return json.dumps(M.signature(), sort_keys=True, separators=(",", ":"))


def resolution(M: GradedModule, H: int, cache=None) -> Resolution:
    """Minimal free resolution of M through F_H.

    ``cache`` is any object with ``get(M, H)`` / ``put(M, H, res)``.
    """
    if H < 0:
        raise ValueError("H must be non-negative")
    M = minimalize(M)
    key = module_key(M)
    if cache is not None:
        hit = cache.get(M, H)
        if hit is not None:
            return hit
    known = _MEMO.get(key)
    if known is not None and known.max_hdeg >= H:
        res = known.truncated(H) if known.max_hdeg > H else known
    else:
        diffs = list(known.diffs) if known is not None else []
        if H >= 1 and not diffs:
            diffs.append(M.presentation)
        while len(diffs) < H and diffs[-1].source.rank:
            diffs.append(syzygy_step(diffs[-1], step=len(diffs) + 1))
        res = Resolution(known.module if known else M, diffs, H, M.ring.max_degree)
        _MEMO[key] = res
    if cache is not None:
        cache.put(M, H, res)
    return res


def clear_memo():
    _MEMO.clear()


def betti_numbers(M: GradedModule, H: int, cache=None) -> BettiTable:
    return resolution(M, H, cache).betti_table(H)


def omega(M: GradedModule, n: int, res: Resolution | None = None) -> GradedModule:
    """n-th syzygy module, presented by d_{n+1} on F_n with the resolution's grading."""
    if n == 0:
        return minimalize(M)
    if res is None or res.length < n + 1 and not res.complete:
        res = resolution(M, n + 1)
    F = res.free(n)
    if F.rank == 0:
        Z = GradedModule.free(M.ring, ())
        return Z
    O = GradedModule(res.d(n + 1) if n + 1 <= res.length else
                     ModuleMap.zero(M.ring, FreeModule(()), F))
    O.is_minimal = True
    return O


@dataclass(frozen=True)
class ComplexityEstimate:
    value: int | None  # None: unbounded within window
    window: tuple
    method: str  # eventually-zero | eventually-constant | finite-difference-fit | none
    confident: bool

    def to_json(self):
        return {"value": self.value, "window": list(self.window), "method": self.method,
                "confident": self.confident}


def _diffs(xs, k):
    for _ in range(k):
        xs = [b - a for a, b in zip(xs, xs[1:])]
    return xs


def estimate_complexity(B, window: tuple | None = None) -> ComplexityEstimate:
    """Empirical complexity from Betti numbers over a window ``(n0, n1)``.

    Zero if some Betti number vanishes; otherwise the least t whose (t-1)-th
    finite differences are constant over the window (confident) or over a
    final stretch of at least three values (not confident).
    """
    betti = list(B.betti if isinstance(B, BettiTable) else B)
    H = len(betti) - 1
    if window is None:
        window = (H // 2, H)
    n0, n1 = window
    if n1 > H or n0 < 0:
        raise ValueError(f"window {window} outside computed range 0..{H}")
    if n1 - n0 + 1 < 4:
        raise ValueError(f"window {window} too short: need at least 4 Betti numbers")
    if any(b == 0 for b in betti[: n1 + 1]):
        return ComplexityEstimate(0, (n0, n1), "eventually-zero", True)
    xs = betti[n0: n1 + 1]
    L = len(xs)
    for t in range(1, L - 1):
        ds = _diffs(xs, t - 1)
        if len(set(ds)) == 1 and ds[0] != 0:
            method = "eventually-constant" if t == 1 else "finite-difference-fit"
            return ComplexityEstimate(t, (n0, n1), method, True)
    for t in range(1, L - 1):
        ds = _diffs(xs, t - 1)
        if len(ds) >= 3 and len(set(ds[-3:])) == 1 and ds[-1] != 0:
            method = "eventually-constant" if t == 1 else "finite-difference-fit"
            return ComplexityEstimate(t, (n0, n1), method, False)
    return ComplexityEstimate(None, (n0, n1), "none", False)


def complexity(M: GradedModule, H: int, cache=None) -> ComplexityEstimate:
    return estimate_complexity(betti_numbers(M, H, cache))


def projective_dimension(M: GradedModule, H: int, cache=None):
    """pd M if witnessed by a zero Betti number within H, else None."""
    b = betti_numbers(M, H, cache).betti
    for i, x in enumerate(b):
        if x == 0:
            return i - 1
    return None


def detect_period(M: GradedModule, max_period: int, res: Resolution | None = None,
                  seed: int = 0):
    """Least p >= 1 with Ω^p(M) isomorphic to M up to a degree shift, or None.

    Returns ``(p, shift)`` where ``shift`` is the degree translation, or None.
    """
    M = minimalize(M)
    if not M.gens or M.is_zero():
        return None
    if res is None or res.length < max_period + 1:
        res = resolution(M, max_period + 1)
    for p in range(1, max_period + 1):
        O = omega(M, p, res)
        if not O.gens:
            return None
        r = is_isomorphic(M, O, seed=seed, up_to_shift=True)
        if r:
            return p, r.shift
    return None


# -- structural checks


def verify_resolution(res: Resolution) -> list:
    """Violations of d∘d = 0, minimality and degreewise exactness (empty if sound)."""
    ring = res.module.ring
    p = ring.p
    out = []
    n = res.length
    for i in range(1, n + 1):
        d = res.d(i)
        if d.has_unit_entry():
            out.append(f"d_{i} has a unit entry")
        if i < n:
            if not d.compose(res.d(i + 1)).is_zero():
                out.append(f"d_{i} ∘ d_{i + 1} != 0")
    for i in range(1, n):
        F = res.free(i)
        if not F.rank:
            continue
        lo = min(F.shifts)
        hi = (max(F.shifts) + ring.top_degree) if ring.is_artinian else ring.max_degree
        for e in range(lo, hi + 1):
            A = res.d(i).degree_matrix(e)
            ncols = len(ring.free_basis(F.shifts, e)[0])
            ker = ncols - linalg.rank(A, p)
            im = linalg.rank(res.d(i + 1).degree_matrix(e), p) if res.free(i + 1).rank else 0
            if ker != im:
                out.append(f"not exact at F_{i} in degree {e}: ker {ker} vs im {im}")
    return out


def euler_check(res: Resolution) -> bool:
    """Alternating sum of the free modules' Hilbert functions equals HS(M)
    in every degree where the computed part determines it."""
    M = res.module
    ring = M.ring
    if not M.gens:
        return True
    n = res.length
    if res.complete:
        top = max(max(res.free(i).shifts, default=0) for i in range(n + 1))
        hi = top + (ring.top_degree if ring.is_artinian else 0)
        if not ring.is_artinian:
            hi = ring.max_degree
    else:
        hi = min(res.free(n).shifts) if res.free(n).rank else ring.max_degree
        if not ring.is_artinian:
            hi = min(hi, ring.max_degree)
    lo = min(M.gens)
    for d in range(lo, hi + 1):
        tot = 0
        for i in range(n + 1):
            tot += (-1) ** i * len(ring.free_basis(res.free(i).shifts, d)[0])
        if tot != M.dim(d):
            return False
    return True
