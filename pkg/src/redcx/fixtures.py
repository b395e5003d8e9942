"""Small rings and modules used throughout the tests and the CLI examples."""

from __future__ import annotations

from .gradedmod import GradedModule, cyclic, residue_field
from .ringkernel import QuotientRing


def gasharov_ring(p: int = 7, alpha: int = 2, max_degree: int = 16) -> QuotientRing:
    """The Artinian ring k[x1..x4]/(seven quadrics) with parameter alpha."""
    a = alpha % p
    gens = [
        "x1^2", "x2^2", "x3^2", "x4^2", "x3*x4",
        "x1*x4+x2*x4", f"{a}*x1*x3+x2*x3",
    ]
    return QuotientRing(p, ["x1", "x2", "x3", "x4"], gens, max_degree=max_degree)


def gasharov_module(A: QuotientRing, alpha: int = 2, n: int = 1) -> GradedModule:
    """coker of d_n = [[x1, alpha^n x3 + x4], [0, x2]]."""
    c = pow(alpha, n, A.p)
    return GradedModule.from_matrix(A, [["x1", f"{c}*x3+x4"], ["0", "x2"]])


def ci_ring(p: int = 5, max_degree: int = 16) -> QuotientRing:
    """k[x,y]/(x^2, y^2)."""
    return QuotientRing(p, ["x", "y"], ["x^2", "y^2"], max_degree=max_degree)


def hypersurface_xy(p: int = 5, max_degree: int = 16) -> QuotientRing:
    """k[x,y]/(xy), one-dimensional."""
    return QuotientRing(p, ["x", "y"], ["x*y"], max_degree=max_degree)


def dual_numbers(p: int = 5, max_degree: int = 16) -> QuotientRing:
    """k[x]/(x^2)."""
    return QuotientRing(p, ["x"], ["x^2"], max_degree=max_degree)


def truncated_cubic(p: int = 5, max_degree: int = 16) -> QuotientRing:
    """k[x]/(x^3)."""
    return QuotientRing(p, ["x"], ["x^3"], max_degree=max_degree)


def quotient_by(A: QuotientRing, *elements: str) -> GradedModule:
    return cyclic(A, [A.parse(e) for e in elements])


__all__ = [
    "gasharov_ring", "gasharov_module", "ci_ring", "hypersurface_xy", "dual_numbers",
    "truncated_cubic", "quotient_by", "residue_field",
]
