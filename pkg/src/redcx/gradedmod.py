"""Graded free modules, homogeneous matrices and finitely presented modules.

A module is always the cokernel of a presentation ``ModuleMap`` whose target
basis are the generators.  All computations are degreewise linear algebra
over the coefficient field on the standard-monomial bases of the ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .ringkernel import HilbertSeries, Poly, QuotientRing


class TruncationError(RuntimeError):
    """A computation would need graded pieces above the truncation degree."""


@dataclass(frozen=True)
class FreeModule:
    shifts: tuple = ()

    def __post_init__(self):
        sh = self.shifts.shifts if isinstance(self.shifts, FreeModule) else self.shifts
        object.__setattr__(self, "shifts", tuple(int(s) for s in sh))

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def shifted(self, a: int) -> "FreeModule":
        return FreeModule(tuple(s + a for s in self.shifts))

    def __add__(self, other):
        return FreeModule(self.shifts + other.shifts)


def _poly_action(ring: QuotientRing, shifts: tuple, f: Poly, d: int) -> np.ndarray:
    """Matrix of multiplication by f from F_d to F_{d + deg f} (free coordinates)."""
    t = f.degree()
    src, _ = ring.free_basis(shifts, d)
    _, tidx = ring.free_basis(shifts, d + t)
    A = np.zeros((len(tidx), len(src)), dtype=np.int64)
    for col, (j, m) in enumerate(src):
        for e, c in f.terms.items():
            for mm, cc in ring.nf_monomial(tuple(x + y for x, y in zip(m, e))).items():
                A[tidx[(j, mm)], col] += c * cc
    return A % ring.p


class ModuleMap:
    """Homogeneous matrix between graded free modules.

    ``entries[i][j]`` is the coefficient of target basis vector ``i`` in the
    image of source basis vector ``j``; it is zero or homogeneous of degree
    ``source.shifts[j] + degree - target.shifts[i]``.
    """

    def __init__(self, ring: QuotientRing, source: FreeModule, target: FreeModule,
                 entries, degree: int = 0, check: bool = True):
        self.ring = ring
        self.source = source if isinstance(source, FreeModule) else FreeModule(source)
        self.target = target if isinstance(target, FreeModule) else FreeModule(target)
        self.degree = degree
        self.entries = tuple(
            tuple(ring.normal_form(e) for e in row) for row in entries
        ) if self.target.rank else ()
        self._dm: dict = {}
        if check:
            self._check()

    def _check(self):
        if len(self.entries) != self.target.rank or any(
            len(r) != self.source.rank for r in self.entries
        ):
            raise ValueError("entry matrix does not match module ranks")
        for i, row in enumerate(self.entries):
            for j, f in enumerate(row):
                if not f:
                    continue
                want = self.source.shifts[j] + self.degree - self.target.shifts[i]
                if f.homogeneous_degree != want:
                    raise ValueError(
                        f"entry ({i},{j}) = {f.to_str(self.ring.varnames)} should have degree {want}"
                    )

    @classmethod
    def zero(cls, ring, source, target, degree=0):
        z = ring.zero()
        return cls(ring, source, target,
                   [[z] * FreeModule(source).rank for _ in FreeModule(target).shifts], degree,
                   check=False)

    @classmethod
    def identity(cls, ring, F: FreeModule):
        one, z = ring.const(1), ring.zero()
        return cls(ring, F, F, [[one if i == j else z for j in range(F.rank)]
                                for i in range(F.rank)])

    @classmethod
    def from_columns(cls, ring, source, target, columns, degree=0):
        target = FreeModule(target) if not isinstance(target, FreeModule) else target
        source = FreeModule(source) if not isinstance(source, FreeModule) else source
        rows = [[columns[j][i] for j in range(source.rank)] for i in range(target.rank)]
        return cls(ring, source, target, rows, degree)

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.target.rank))

    def columns(self):
        return [self.column(j) for j in range(self.source.rank)]

    def is_zero(self) -> bool:
        return not any(f for row in self.entries for f in row)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        if other.target.shifts != self.source.shifts:
            raise ValueError("maps are not composable")
        R = self.ring
        rows = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = R.zero()
                for k in range(self.source.rank):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return ModuleMap(R, other.source, self.target, rows, self.degree + other.degree)

    __matmul__ = compose

    def degree_matrix(self, d: int) -> np.ndarray:
        """Matrix of the map from the degree-d piece of the source to the target."""
        A = self._dm.get(d)
        if A is not None:
            return A
        ring = self.ring
        src, _ = ring.free_basis(self.source.shifts, d)
        _, tidx = ring.free_basis(self.target.shifts, d + self.degree)
        A = np.zeros((len(tidx), len(src)), dtype=np.int64)
        for col, (j, m) in enumerate(src):
            for i in range(self.target.rank):
                f = self.entries[i][j]
                if not f:
                    continue
                for e, c in f.terms.items():
                    for mm, cc in ring.nf_monomial(tuple(x + y for x, y in zip(m, e))).items():
                        A[tidx[(i, mm)], col] += c * cc
        A %= ring.p
        self._dm[d] = A
        return A

    def has_unit_entry(self) -> bool:
        return any(f and f.constant_term() for row in self.entries for f in row)

    def block(self, other: "ModuleMap") -> "ModuleMap":
        """Block-diagonal sum."""
        z = self.ring.zero()
        rows = [list(r) + [z] * other.source.rank for r in self.entries]
        rows += [[z] * self.source.rank + list(r) for r in other.entries]
        return ModuleMap(self.ring, self.source + other.source, self.target + other.target,
                         rows, self.degree)

    def to_json(self):
        return {
            "source": list(self.source.shifts),
            "target": list(self.target.shifts),
            "degree": self.degree,
            "entries": [[f.to_json() for f in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, ring, data):
        rows = [[Poly.from_json(f, ring.p, ring.nvars) for f in row] for row in data["entries"]]
        return cls(ring, FreeModule(data["source"]), FreeModule(data["target"]), rows,
                   data.get("degree", 0))

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.source == other.source
                and self.target == other.target and self.degree == other.degree
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.source, self.target, self.degree, self.entries))

    def pretty(self) -> str:
        names = self.ring.varnames
        return "[" + ", ".join(
            "[" + ", ".join(f.to_str(names) for f in row) + "]" for row in self.entries
        ) + "]"

    def __repr__(self):
        return f"ModuleMap({self.source.shifts}->{self.target.shifts}, {self.pretty()})"


@dataclass
class Piece:
    """Degree-d piece of a presented module: the quotient of F_d by the image."""

    degree: int
    basis: list
    index: dict
    R: np.ndarray
    pivots: list
    nonpivots: list

    @property
    def dim(self) -> int:
        return len(self.nonpivots)


class GradedModule:
    """Cokernel of a presentation ``F_1 -> F_0``; generators are F_0's basis."""

    def __init__(self, presentation: ModuleMap):
        if presentation.degree != 0:
            raise ValueError("presentation must be a degree-0 map")
        self.presentation = presentation
        self.ring = presentation.ring
        self._pieces: dict = {}
        self._act: dict = {}
        self.is_minimal = False

    @classmethod
    def free(cls, ring, shifts=(0,)):
        F = FreeModule(shifts)
        M = cls(ModuleMap.zero(ring, FreeModule(()), F))
        M.is_minimal = True
        return M

    @classmethod
    def from_matrix(cls, ring, rows, gens=None):
        """Module from a relation matrix (rows = generators); degrees inferred."""
        from .cli.parser import matrix_degrees

        entries = [[ring.parse(e) if isinstance(e, str) else e for e in r] for r in rows]
        entries = [[ring.normal_form(e) for e in r] for r in entries]
        rdeg, cdeg = matrix_degrees(entries)
        if gens is not None:
            rdeg = list(gens)
            cdeg = [None] * len(cdeg)
            for j in range(len(cdeg)):
                for i in range(len(entries)):
                    if entries[i][j]:
                        cdeg[j] = rdeg[i] + entries[i][j].degree()
                        break
        keep = [j for j, c in enumerate(cdeg) if c is not None]
        rows2 = [[r[j] for j in keep] for r in entries]
        return cls(ModuleMap(ring, FreeModule([cdeg[j] for j in keep]), FreeModule(rdeg), rows2))

    @property
    def gens(self) -> tuple:
        return self.presentation.target.shifts

    @property
    def rel_shifts(self) -> tuple:
        return self.presentation.source.shifts

    @property
    def num_generators(self) -> int:
        return len(self.gens)

    # -- degree range
    def degree_range(self) -> tuple:
        """(lo, hi) bounding the nonzero degrees; hi is the truncation degree
        when the ring is not Artinian."""
        if not self.gens:
            return (0, -1)
        lo = min(self.gens)
        if self.ring.is_artinian:
            return lo, max(self.gens) + self.ring.top_degree
        return lo, self.ring.max_degree

    @property
    def truncated(self) -> bool:
        return not self.ring.is_artinian and bool(self.gens)

    # -- graded pieces
    def piece(self, d: int) -> Piece:
        pc = self._pieces.get(d)
        if pc is None:
            ring = self.ring
            basis, index = ring.free_basis(self.gens, d)
            A = self.presentation.degree_matrix(d)
            if A.size and len(basis):
                R, piv = linalg.rref(A.T, ring.p)
            else:
                R, piv = np.zeros((0, len(basis)), dtype=np.int64), []
            ps = set(piv)
            pc = Piece(d, basis, index, R, piv, [c for c in range(len(basis)) if c not in ps])
            self._pieces[d] = pc
        return pc

    def dim(self, d: int) -> int:
        return self.piece(d).dim

    def reduce(self, vec, d: int) -> np.ndarray:
        pc = self.piece(d)
        return linalg.reduce_vector(pc.R, pc.pivots, vec, self.ring.p)

    def to_quotient(self, vec, d: int) -> np.ndarray:
        return self.reduce(vec, d)[self.piece(d).nonpivots]

    def to_quotient_rows(self, V, d: int) -> np.ndarray:
        pc = self.piece(d)
        V = np.asarray(V, dtype=np.int64).reshape(-1, len(pc.basis))
        return linalg.reduce_rows(pc.R, pc.pivots, V, self.ring.p)[:, pc.nonpivots]

    def from_quotient(self, q, d: int) -> np.ndarray:
        pc = self.piece(d)
        v = np.zeros(len(pc.basis), dtype=np.int64)
        v[pc.nonpivots] = q
        return v

    def vector_to_polys(self, vec, d: int) -> tuple:
        """Free-coordinate vector of degree d to a column of polynomials."""
        ring = self.ring
        pc = self.piece(d)
        out = [dict() for _ in self.gens]
        for c, (j, m) in zip(np.asarray(vec).tolist(), pc.basis):
            if c % ring.p:
                out[j][m] = c
        return tuple(Poly(t, ring.p, ring.nvars) for t in out)

    def polys_to_vector(self, col, d: int) -> np.ndarray:
        """Column of homogeneous polynomials (total degree d) to free coordinates."""
        ring = self.ring
        pc = self.piece(d)
        v = np.zeros(len(pc.basis), dtype=np.int64)
        for j, f in enumerate(col):
            f = ring.normal_form(f)
            for e, c in f.terms.items():
                v[pc.index[(j, e)]] += c
        return v % ring.p

    def act_matrix(self, f: Poly, d: int) -> np.ndarray:
        """Multiplication by f as a map M_d -> M_{d+deg f} in quotient coordinates."""
        key = (f, d)
        A = self._act.get(key)
        if A is None:
            t = f.degree()
            src, tgt = self.piece(d), self.piece(d + t)
            if not src.dim or not tgt.dim:
                A = np.zeros((tgt.dim, src.dim), dtype=np.int64)
            else:
                full = _poly_action(self.ring, self.gens, f, d)[:, src.nonpivots]
                A = self.to_quotient_rows(full.T, d + t).T
            self._act[key] = A
        return A

    # -- invariants
    def hilbert_function(self, D: int | None = None) -> HilbertSeries:
        if not self.gens:
            return HilbertSeries((0,) * (D + 1) if D is not None and D >= 0 else ())
        lo, hi = self.degree_range()
        lo = min(lo, 0)
        top = hi if D is None else D
        if not self.ring.is_artinian:
            top = min(top, hi)  # nothing is known past the truncation degree
        # an Artinian module vanishes above its degree range, so pad instead of computing
        return HilbertSeries(tuple(self.dim(d) if d <= hi else 0
                                   for d in range(lo, top + 1)), lo)

    def is_zero(self) -> bool:
        return all(self.dim(g) == 0 for g in set(self.gens))

    def signature(self) -> dict:
        return {"ring": self.ring.signature(), "presentation": self.presentation.to_json()}

    def __repr__(self):
        return f"GradedModule(gens={self.gens}, rels={self.presentation.pretty()})"


# -- constructions


def minimalize_with_map(M: GradedModule):
    """Nakayama reduction.

    Returns ``(Mmin, kept, express)``: the surviving generators are the
    original generators ``kept``; ``express[j]`` writes original generator
    ``j`` as a column of polynomials over the kept generators.
    """
    ring = M.ring
    p = ring.p
    gens = list(M.gens)
    cols = [list(c) for c in M.presentation.columns()]
    col_deg = list(M.rel_shifts)
    alive = list(range(len(gens)))  # current generator -> original index
    # express[orig] as dict current-position -> poly; start with identity
    express = [{i: ring.const(1)} for i in range(len(gens))]
    while True:
        hit = None
        for k, c in enumerate(cols):
            for i, f in enumerate(c):
                if f and f.constant_term():
                    hit = (k, i)
                    break
            if hit:
                break
        if hit is None:
            break
        k, i = hit
        c = cols.pop(k)
        col_deg.pop(k)
        u_inv = pow(c[i].constant_term(), -1, p)
        # g_i = -u^{-1} * sum_{j != i} c[j] g_j
        sub = {j: -(c[j] * u_inv) for j in range(len(c)) if j != i and c[j]}
        for col in cols:
            a = col[i]
            if a:
                for j, f in sub.items():
                    col[j] = ring.normal_form(col[j] + a * f)
            col.pop(i)
        for ex in express:
            a = ex.pop(i, None)
            if a is not None:
                for j, f in sub.items():
                    ex[j] = ring.normal_form(ex.get(j, ring.zero()) + a * f)
            for key in sorted(k2 for k2 in ex if k2 > i):
                ex[key - 1] = ex.pop(key)
        gens.pop(i)
        alive.pop(i)
    nz = [k for k, c in enumerate(cols) if any(c)]
    cols = [cols[k] for k in nz]
    col_deg = [col_deg[k] for k in nz]
    cols, col_deg = _prune_columns(ring, tuple(gens), cols, col_deg)
    Mmin = GradedModule(ModuleMap.from_columns(ring, FreeModule(col_deg), FreeModule(gens), cols))
    Mmin.is_minimal = True
    z = ring.zero()
    express_cols = [tuple(ex.get(j, z) for j in range(len(gens))) for ex in express]
    return Mmin, tuple(alive), express_cols


def _prune_columns(ring, gens, cols, col_deg):
    """Drop relations lying in the submodule generated by the others (degreewise)."""
    if not cols:
        return cols, col_deg
    order = sorted(range(len(cols)), key=lambda k: (col_deg[k], k))
    p = ring.p
    probe = GradedModule.free(ring, gens)
    keep: list = []
    cur_deg, span_R, span_piv = None, None, []
    for k in order:
        d = col_deg[k]
        if d != cur_deg:
            span_R, span_piv = _generated_span(ring, gens, [cols[j] for j in keep],
                                               [col_deg[j] for j in keep], d, probe)
            cur_deg = d
        v = probe.polys_to_vector(cols[k], d)
        w = linalg.reduce_vector(span_R, span_piv, v, p)
        if w.any():
            keep.append(k)
            span_R, span_piv = linalg.rref(np.vstack([span_R.reshape(-1, len(v)), w]), p)
    keep.sort()
    return [cols[k] for k in keep], [col_deg[k] for k in keep]


def _generated_span(ring, gens, cols, degs, d, probe):
    """rref basis of the degree-d part of the submodule generated by ``cols``."""
    n = len(ring.free_basis(gens, d)[0])
    vecs = []
    for c, e in zip(cols, degs):
        if e > d:
            continue
        for m in ring.std_monomials(d - e):
            mono = Poly({m: 1}, ring.p, ring.nvars)
            vecs.append(probe.polys_to_vector([mono * f for f in c], d))
    if not vecs:
        return np.zeros((0, n), dtype=np.int64), []
    return linalg.rref(np.array(vecs), ring.p)


def minimalize(M: GradedModule) -> GradedModule:
    if M.is_minimal:
        return M
    return minimalize_with_map(M)[0]


def hilbert_function(M: GradedModule, D: int) -> HilbertSeries:
    if D < 0:
        raise ValueError("D must be non-negative")
    return M.hilbert_function(D)


def direct_sum(M: GradedModule, N: GradedModule) -> GradedModule:
    S = GradedModule(M.presentation.block(N.presentation))
    S.is_minimal = M.is_minimal and N.is_minimal
    return S


def shift(M: GradedModule, a: int) -> GradedModule:
    """Degree shift translating the Hilbert function by ``a``."""
    P = M.presentation
    S = GradedModule(ModuleMap(M.ring, P.source.shifted(a), P.target.shifted(a), P.entries))
    S.is_minimal = M.is_minimal
    return S


def tensor(M: GradedModule, N: GradedModule) -> GradedModule:
    """M ⊗ N presented on the products of generators."""
    ring = M.ring
    z = ring.zero()
    gm, gn = M.gens, N.gens
    gens = [a + b for a in gm for b in gn]
    cols, degs = [], []
    for col, e in zip(M.presentation.columns(), M.rel_shifts):
        for jn, b in enumerate(gn):
            c = [z] * len(gens)
            for jm, f in enumerate(col):
                c[jm * len(gn) + jn] = f
            cols.append(c)
            degs.append(e + b)
    for col, e in zip(N.presentation.columns(), N.rel_shifts):
        for jm, a in enumerate(gm):
            c = [z] * len(gens)
            for jn, f in enumerate(col):
                c[jm * len(gn) + jn] = f
            cols.append(c)
            degs.append(e + a)
    return GradedModule(ModuleMap.from_columns(ring, FreeModule(degs), FreeModule(gens), cols))


def cyclic(ring: QuotientRing, elements) -> GradedModule:
    """A / (elements) as a module."""
    elements = [ring.parse(e) if isinstance(e, str) else e for e in elements]
    return GradedModule.from_matrix(ring, [elements], gens=[0])


def residue_field(ring: QuotientRing) -> GradedModule:
    return cyclic(ring, ring.gens())


# -- homomorphisms between presented modules


@dataclass
class ModuleHom:
    """Homomorphism given on generators: column j is the image of generator j."""

    source: GradedModule
    target: GradedModule
    matrix: ModuleMap

    @property
    def degree(self) -> int:
        return self.matrix.degree

    def _check_rel(self, col, d) -> bool:
        v = self.target.polys_to_vector(col, d)
        return not self.target.reduce(v, d).any()

    def is_well_defined(self) -> bool:
        rels = self.source.presentation
        if not rels.source.rank:
            return True
        img = self.matrix.compose(rels)
        lo, hi = self.target.degree_range()
        for j, e in enumerate(rels.source.shifts):
            d = e + self.degree
            if d > hi:
                continue
            if not self._check_rel(img.column(j), d):
                return False
        return True

    def quotient_matrix(self, d: int) -> np.ndarray:
        """Induced map source_d -> target_{d+deg} in quotient coordinates."""
        src, tgt = self.source.piece(d), self.target.piece(d + self.degree)
        if not src.dim or not tgt.dim:
            return np.zeros((tgt.dim, src.dim), dtype=np.int64)
        full = self.matrix.degree_matrix(d)[:, src.nonpivots]
        return self.target.to_quotient_rows(full.T, d + self.degree).T

    def rank(self, d: int) -> int:
        return linalg.rank(self.quotient_matrix(d), self.source.ring.p)

    def compose(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(other.source, self.target, self.matrix.compose(other.matrix))

    def is_identity(self) -> bool:
        """Identity on generators modulo the target's relations (same module)."""
        M = self.target
        for j, g in enumerate(M.gens):
            col = list(self.matrix.column(j))
            col[j] = col[j] - M.ring.const(1)
            if not self._check_rel(col, g):
                return False
        return True


def hom_zero_basis(M: GradedModule, N: GradedModule, degree: int = 0) -> list:
    """Basis of Hom(M, N) in the given degree, each as a ModuleMap on generators."""
    ring = M.ring
    p = ring.p
    blocks = [N.piece(a + degree) for a in M.gens]
    offs = np.cumsum([0] + [b.dim for b in blocks])
    nvar = int(offs[-1])
    if nvar == 0:
        return []
    rows = []
    for k, b in enumerate(M.rel_shifts):
        tgt = N.piece(b + degree)
        if not tgt.dim:
            continue
        blk = np.zeros((tgt.dim, nvar), dtype=np.int64)
        for j, a in enumerate(M.gens):
            f = M.presentation.entries[j][k]
            if f and blocks[j].dim:
                blk[:, offs[j]:offs[j + 1]] = N.act_matrix(f, a + degree)
        rows.append(blk)
    C = np.vstack(rows) % p if rows else np.zeros((0, nvar), dtype=np.int64)
    K = linalg.nullspace(C, p) if C.shape[0] else np.eye(nvar, dtype=np.int64)
    out = []
    for v in K:
        out.append(_hom_from_coords(M, N, v, offs, degree))
    return out


def _hom_from_coords(M, N, v, offs, degree):
    ring = M.ring
    cols = []
    for j, a in enumerate(M.gens):
        q = v[offs[j]:offs[j + 1]]
        cols.append(N.vector_to_polys(N.from_quotient(q, a + degree), a + degree))
    return ModuleMap.from_columns(ring, FreeModule(M.gens), FreeModule(N.gens), cols, degree)


@dataclass
class IsoResult:
    isomorphic: bool
    reason: str  # "identical", "witness", "hilbert", "generator-degrees", "search-failed"
    witness: ModuleHom | None = None
    inverse: ModuleHom | None = None
    shift: int = 0

    def __bool__(self):
        return self.isomorphic


def _try_inverse(M, N, phi: ModuleMap):
    """Inverse of phi if phi is an isomorphism, verified both ways, else None."""
    ring = M.ring
    p = ring.p
    # surjectivity on minimal generators
    C = np.zeros((len(N.gens), len(M.gens)), dtype=np.int64)
    for i in range(len(N.gens)):
        for j in range(len(M.gens)):
            C[i, j] = phi.entries[i][j].constant_term() if phi.entries[i][j] else 0
    if linalg.rank(C, p) < len(N.gens):
        return None
    h = ModuleHom(M, N, phi)
    cols = []
    for i, g in enumerate(N.gens):
        A = h.quotient_matrix(g)
        e = np.zeros(len(N.piece(g).basis), dtype=np.int64)
        e[N.piece(g).index[(i, (0,) * ring.nvars)]] = 1
        x = linalg.solve(A, N.to_quotient(e, g), p)
        if x is None:
            return None
        cols.append(M.vector_to_polys(M.from_quotient(x, g), g))
    psi = ModuleMap.from_columns(ring, FreeModule(N.gens), FreeModule(M.gens), cols)
    inv = ModuleHom(N, M, psi)
    if not (h.is_well_defined() and inv.is_well_defined()):
        return None
    if not (inv.compose(h).is_identity() and h.compose(inv).is_identity()):
        return None
    return inv


def is_isomorphic(M: GradedModule, N: GradedModule, seed: int = 0, trials: int = 64,
                  up_to_shift: bool = False) -> IsoResult:
    """Graded isomorphism test with an explicit, verified witness.

    A False result with reason ``"search-failed"`` means the randomized search
    found no invertible map, not that none exists.
    """
    M, N = minimalize(M), minimalize(N)
    s = 0
    if up_to_shift and M.gens and N.gens:
        s = min(N.gens) - min(M.gens)
        M = shift(M, s)
    if sorted(M.gens) != sorted(N.gens):
        return IsoResult(False, "generator-degrees", shift=s)
    if M.hilbert_function() != N.hilbert_function():
        return IsoResult(False, "hilbert", shift=s)
    if M.presentation == N.presentation:
        ident = ModuleMap.identity(M.ring, FreeModule(M.gens))
        return IsoResult(True, "identical", ModuleHom(M, N, ident), ModuleHom(N, M, ident), s)
    if not M.gens:
        z = ModuleMap.zero(M.ring, FreeModule(()), FreeModule(()))
        return IsoResult(True, "identical", ModuleHom(M, N, z), ModuleHom(N, M, z), s)
    basis = hom_zero_basis(M, N)
    if not basis:
        return IsoResult(False, "search-failed", shift=s)
    rng = np.random.default_rng(seed)
    p = M.ring.p
    candidates = list(basis)
    for _ in range(trials):
        coeffs = rng.integers(0, p, size=len(basis))
        rows = []
        for i in range(len(N.gens)):
            row = []
            for j in range(len(M.gens)):
                acc = M.ring.zero()
                for c, b in zip(coeffs.tolist(), basis):
                    if c and b.entries[i][j]:
                        acc = acc + b.entries[i][j] * c
                row.append(acc)
            rows.append(row)
        candidates.append(ModuleMap(M.ring, FreeModule(M.gens), FreeModule(N.gens), rows))
    for phi in candidates[:trials + len(basis)]:
        inv = _try_inverse(M, N, phi)
        if inv is not None:
            return IsoResult(True, "witness", ModuleHom(M, N, phi), inv, s)
    return IsoResult(False, "search-failed", shift=s)
