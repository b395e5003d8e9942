"""Prime fields, polynomials under degrevlex, Groebner bases and quotient rings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

DEFAULT_MAX_DEGREE = 16

Exp = tuple  # exponent vector


class NonHomogeneousError(ValueError):
    def __init__(self, index: int, poly: "Poly"):
        super().__init__(f"generator {index} is not homogeneous: {poly}")
        self.index = index
        self.poly = poly


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


def grevlex_key(e: Exp):
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(e), tuple(-x for x in reversed(e)))


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(n: int, d: int):
    """All exponent vectors of length n summing to d."""
    if n == 0:
        if d == 0:
            yield ()
        return
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


class Poly:
    """Polynomial over GF(p): a map from exponent tuples to nonzero residues.

    Treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("terms", "p", "nvars")

    def __init__(self, terms: dict, p: int, nvars: int):
        self.terms = {e: c % p for e, c in terms.items() if c % p}
        self.p = p
        self.nvars = nvars

    @classmethod
    def zero(cls, p, nvars):
        return cls({}, p, nvars)

    @classmethod
    def const(cls, c, p, nvars):
        return cls({(0,) * nvars: c}, p, nvars)

    @classmethod
    def monomial(cls, e, c, p):
        return cls({tuple(e): c}, p, len(e))

    def _like(self, terms):
        return Poly(terms, self.p, self.nvars)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.p, self.nvars)
        return isinstance(other, Poly) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.p, self.nvars)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = (t.get(e, 0) + c) % self.p
        return self._like(t)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.p, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like({e: c * other for e, c in self.terms.items()})
        t: dict = {}
        p = self.p
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = exp_add(e1, e2)
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return self._like(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1, self.p, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def mul_term(self, e: Exp, c: int):
        return self._like({exp_add(e, f): c * d for f, d in self.terms.items()})

    def lm(self) -> Exp:
        return max(self.terms, key=grevlex_key)

    def lc(self) -> int:
        return self.terms[self.lm()]

    def monic(self):
        inv = pow(self.lc(), -1, self.p)
        return self * inv

    def degree(self) -> int:
        return max(sum(e) for e in self.terms) if self.terms else -1

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    @property
    def homogeneous_degree(self):
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def to_str(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            else:
                parts.append(f"{c}*{mon}")
        return "+".join(parts)

    def __repr__(self):
        return f"Poly({self.to_str()})"

    def to_json(self):
        return [[list(e), c] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, p, nvars):
        return cls({tuple(e): c for e, c in data}, p, nvars)


def reduce_full(f: Poly, G: list[Poly]) -> Poly:
    """Complete reduction of f by a list of monic polynomials."""
    rem: dict = {}
    work = dict(f.terms)
    p = f.p
    lms = [g.lm() for g in G]
    while work:
        m = max(work, key=grevlex_key)
        c = work.pop(m)
        for g, lm in zip(G, lms):
            if divides(lm, m):
                q = exp_sub(m, lm)
                for e, d in g.terms.items():
                    if e == lm:
                        continue
                    e2 = exp_add(e, q)
                    v = (work.get(e2, 0) - c * d) % p
                    if v:
                        work[e2] = v
                    else:
                        work.pop(e2, None)
                break
        else:
            rem[m] = c
    return Poly(rem, p, f.nvars)


def _spoly(f: Poly, g: Poly) -> Poly:
    L = exp_lcm(f.lm(), g.lm())
    return f.mul_term(exp_sub(L, f.lm()), 1) - g.mul_term(exp_sub(L, g.lm()), 1)


def groebner(gens: list[Poly]) -> list[Poly]:
    """Reduced Groebner basis (degrevlex) of a homogeneous ideal.

    Buchberger with the normal selection strategy, the coprime-lead-term
    criterion and Buchberger's chain criterion.  Output is sorted by lead
    monomial, ascending, and every element is monic.
    """
    for i, g in enumerate(gens):
        if not g.is_homogeneous():
            raise NonHomogeneousError(i, g)
    G: list[Poly] = []
    for g in gens:
        if g:
            r = reduce_full(g, G) if G else g
            if r:
                G.append(r.monic())
    pairs = {(i, j) for j in range(len(G)) for i in range(j)}
    done: set = set()

    def pair_key(ij):
        i, j = ij
        L = exp_lcm(G[i].lm(), G[j].lm())
        return (sum(L), grevlex_key(L), i, j)

    while pairs:
        ij = min(pairs, key=pair_key)
        pairs.discard(ij)
        done.add(ij)
        i, j = ij
        a, b = G[i].lm(), G[j].lm()
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        L = exp_lcm(a, b)
        chain = False
        for k in range(len(G)):
            if k in (i, j) or not divides(G[k].lm(), L):
                continue
            if tuple(sorted((i, k))) in done and tuple(sorted((j, k))) in done:
                chain = True
                break
        if chain:
            continue
        r = reduce_full(_spoly(G[i], G[j]), G)
        if r:
            G.append(r.monic())
            n = len(G) - 1
            pairs |= {(k, n) for k in range(n)}
    # minimalize then interreduce
    G.sort(key=lambda g: grevlex_key(g.lm()))
    minimal = []
    for g in G:
        if not any(divides(h.lm(), g.lm()) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        lead = Poly({g.lm(): 1}, g.p, g.nvars)
        tail = reduce_full(g - lead, others)
        reduced.append(lead + tail)
    return reduced


def is_reduced_groebner(G: list[Poly]) -> bool:
    for idx, g in enumerate(G):
        if g.lc() != 1:
            return False
        others = [h.lm() for k, h in enumerate(G) if k != idx]
        if any(divides(l, e) for e in g.terms for l in others):
            return False
    return True


@dataclass(frozen=True)
class HilbertSeries:
    """Truncated Hilbert function: ``coeffs[i]`` is the value in degree ``start + i``."""

    coeffs: tuple
    start: int = 0

    def __getitem__(self, d: int) -> int:
        i = d - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def stop(self) -> int:
        return self.start + len(self.coeffs)

    def _span(self, other):
        lo = min(self.start, other.start)
        hi = max(self.stop, other.stop)
        return lo, hi

    def __add__(self, other):
        lo, hi = self._span(other)
        return HilbertSeries(tuple(self[d] + other[d] for d in range(lo, hi)), lo)

    def __sub__(self, other):
        lo, hi = self._span(other)
        return HilbertSeries(tuple(self[d] - other[d] for d in range(lo, hi)), lo)

    def shift(self, a: int):
        return HilbertSeries(self.coeffs, self.start + a)

    def window(self, lo: int, hi: int) -> tuple:
        return tuple(self[d] for d in range(lo, hi + 1))

    def truncate(self, D: int):
        return HilbertSeries(self.window(self.start, D), self.start)

    def normalized(self):
        c = list(self.coeffs)
        s = self.start
        while c and c[0] == 0:
            c.pop(0)
            s += 1
        while c and c[-1] == 0:
            c.pop()
        return HilbertSeries(tuple(c), s if c else 0)

    def __eq__(self, other):
        if isinstance(other, (tuple, list)):
            other = HilbertSeries(tuple(other))
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.coeffs == b.coeffs and a.start == b.start

    def __hash__(self):
        n = self.normalized()
        return hash((n.coeffs, n.start))

    def total(self) -> int:
        return sum(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


class QuotientRing:
    """Standard-graded algebra GF(p)[x_1..x_n]/I with I homogeneous.

    ``max_degree`` is the truncation degree used for every degreewise
    computation over a ring that is not Artinian.
    """

    def __init__(self, p: int, variables, ideal_gens=(), max_degree: int = DEFAULT_MAX_DEGREE):
        if not (is_prime(p) and p < 2**31):
            raise ValueError(f"characteristic must be a prime below 2^31, got {p}")
        if isinstance(variables, int):
            variables = [f"x{i + 1}" for i in range(variables)]
        self.p = p
        self.varnames = tuple(variables)
        self.nvars = len(self.varnames)
        self.max_degree = max_degree
        gens = [g if isinstance(g, Poly) else self.parse(g) for g in ideal_gens]
        self.ideal_gens = tuple(gens)
        self.groebner_basis = tuple(groebner(list(gens)))
        self._lead = [g.lm() for g in self.groebner_basis]
        self._std: dict = {}
        self._std_index: dict = {}
        self._nf_mon: dict = {}
        self._free: dict = {}

    # -- construction helpers
    def parse(self, text: str) -> Poly:
        from .cli.parser import parse_polynomial

        return parse_polynomial(text, self.varnames, self.p)

    def var(self, i: int) -> Poly:
        e = [0] * self.nvars
        e[i] = 1
        return Poly({tuple(e): 1}, self.p, self.nvars)

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def const(self, c: int) -> Poly:
        return Poly.const(c, self.p, self.nvars)

    def zero(self) -> Poly:
        return Poly.zero(self.p, self.nvars)

    # -- normal forms
    def nf_monomial(self, e: Exp) -> dict:
        r = self._nf_mon.get(e)
        if r is None:
            r = reduce_full(Poly({e: 1}, self.p, self.nvars), list(self.groebner_basis)).terms
            self._nf_mon[e] = r
        return r

    def normal_form(self, f: Poly) -> Poly:
        t: dict = {}
        p = self.p
        for e, c in f.terms.items():
            for e2, c2 in self.nf_monomial(e).items():
                t[e2] = (t.get(e2, 0) + c * c2) % p
        return Poly(t, p, self.nvars)

    nf = normal_form

    def mul(self, f: Poly, g: Poly) -> Poly:
        return self.normal_form(f * g)

    def contains(self, f: Poly) -> bool:
        return not self.normal_form(f)

    # -- graded structure
    def std_monomials(self, d: int) -> tuple:
        """Standard monomials of degree d, largest first in degrevlex."""
        r = self._std.get(d)
        if r is None:
            if d < 0:
                r = ()
            else:
                mons = [
                    e for e in monomials_of_degree(self.nvars, d)
                    if not any(divides(l, e) for l in self._lead)
                ]
                r = tuple(sorted(mons, key=grevlex_key, reverse=True))
            self._std[d] = r
            self._std_index[d] = {e: i for i, e in enumerate(r)}
        return r

    def std_index(self, d: int) -> dict:
        self.std_monomials(d)
        return self._std_index[d]

    def free_basis(self, shifts: tuple, d: int):
        """Basis of the degree-d piece of the free module with the given shifts.

        Returns ``(basis, index)`` with basis entries ``(generator, monomial)``.
        """
        key = (shifts, d)
        r = self._free.get(key)
        if r is None:
            basis = [(j, m) for j, s in enumerate(shifts) for m in self.std_monomials(d - s)]
            r = (basis, {b: i for i, b in enumerate(basis)})
            self._free[key] = r
        return r

    @cached_property
    def krull_dim(self) -> int:
        """Largest set of variables whose monomials avoid every lead monomial."""
        best = 0
        n = self.nvars
        for k in range(n, -1, -1):
            for S in itertools.combinations(range(n), k):
                Sset = set(S)
                if not any(all(i in Sset for i, x in enumerate(l) if x) for l in self._lead):
                    return k
        return best

    @property
    def is_artinian(self) -> bool:
        return self.krull_dim == 0

    @cached_property
    def top_degree(self):
        """Largest degree with a nonzero graded piece, or None if infinite."""
        if not self.is_artinian:
            return None
        d = 0
        while self.std_monomials(d + 1):
            d += 1
        return d

    def hilbert_series(self, max_degree: int | None = None) -> HilbertSeries:
        D = self.max_degree if max_degree is None else max_degree
        if D < 0:
            raise ValueError("max_degree must be non-negative")
        return HilbertSeries(tuple(len(self.std_monomials(d)) for d in range(D + 1)))

    @cached_property
    def minimal_ideal_generators(self) -> tuple:
        kept: list[Poly] = []
        for g in sorted((g for g in self.ideal_gens if g), key=lambda g: g.degree()):
            if kept and not reduce_full(g, groebner(kept)):
                continue
            kept.append(g)
        return tuple(kept)

    @property
    def codim(self) -> int:
        return self.nvars - self.krull_dim

    @property
    def is_complete_intersection(self) -> bool:
        """Generators form a regular sequence: codim equals minimal generator count."""
        return self.codim == len(self.minimal_ideal_generators)

    def signature(self) -> dict:
        return {
            "p": self.p,
            "vars": list(self.varnames),
            "groebner": [g.to_json() for g in self.groebner_basis],
            "max_degree": self.max_degree,
        }

    def describe(self) -> str:
        ideal = ",".join(g.to_str(self.varnames) for g in self.ideal_gens)
        return f"GF({self.p})[{','.join(self.varnames)}]/<{ideal}>"

    def __repr__(self):
        return f"QuotientRing({self.describe()})"


def normal_form(f: Poly, R: QuotientRing) -> Poly:
    return R.normal_form(f)


def hilbert_series(R: QuotientRing, max_degree: int) -> HilbertSeries:
    return R.hilbert_series(max_degree)
