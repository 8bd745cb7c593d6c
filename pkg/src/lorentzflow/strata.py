"""Discrete support checks: the exchange property for exponent sets on the
discrete simplex, the basis-exchange property for set families, and
classification of a polynomial's support into one of these strata.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import HomPoly, MultiAffinePoly


@dataclass(frozen=True)
class ExchangeResult:
    """Outcome of an exchange-axiom check; carries a witness on failure."""

    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


class MConvexCandidate:
    """A set of exponent vectors on the discrete simplex (entries
    nonnegative integers, each summing to d)."""

    __slots__ = ("n", "d", "points")

    def __init__(self, n: int, d: int, points):
        pts = set()
        for alpha in points:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ValueError(f"bad exponent vector {alpha}")
            if sum(alpha) != d:
                raise ValueError(f"exponent {alpha} does not sum to {d}")
            pts.add(alpha)
        self.n = n
        self.d = d
        self.points = frozenset(pts)

    def __repr__(self):
        return f"MConvexCandidate(n={self.n}, d={self.d}, size={len(self.points)})"


class BasisFamily:
    """A family of d-element subsets of {0, ..., n-1}."""

    __slots__ = ("n", "d", "bases")

    def __init__(self, n: int, d: int, bases):
        fam = set()
        for b in bases:
            b = tuple(sorted(set(b)))
            if len(b) != d or any(i < 0 or i >= n for i in b):
                raise ValueError(f"{b} is not a {d}-subset of 0..{n - 1}")
            fam.add(b)
        self.n = n
        self.d = d
        self.bases = frozenset(fam)

    def __repr__(self):
        return f"BasisFamily(n={self.n}, d={self.d}, size={len(self.bases)})"


def is_m_convex(candidate: MConvexCandidate) -> ExchangeResult:
    """Exchange check on exponent vectors: for alpha, beta in the set and
    every i with alpha_i > beta_i there must be j with alpha_j < beta_j
    such that alpha - e_i + e_j stays in the set. The witness on failure
    is the violating (alpha, beta, i)."""
    pts = candidate.points
    if not pts:
        raise ValueError("empty point set")
    for alpha in pts:
        for beta in pts:
            for i in range(candidate.n):
                if alpha[i] <= beta[i]:
                    continue
                found = False
                for j in range(candidate.n):
                    if alpha[j] < beta[j]:
                        moved = list(alpha)
                        moved[i] -= 1
                        moved[j] += 1
                        if tuple(moved) in pts:
                            found = True
                            break
                if not found:
                    return ExchangeResult(False, (alpha, beta, i))
    return ExchangeResult(True)


def is_matroid_bases(family: BasisFamily) -> ExchangeResult:
    """Basis exchange: for B1, B2 in the family and every x in B1 - B2
    there must be y in B2 - B1 with (B1 - {x}) + {y} in the family.
    The witness on failure is the violating (B1, B2, x)."""
    bases = family.bases
    if not bases:
        raise ValueError("empty basis family")
    for b1 in bases:
        s1 = set(b1)
        for b2 in bases:
            s2 = set(b2)
            for x in s1 - s2:
                rest = s1 - {x}
                if not any(tuple(sorted(rest | {y})) in bases for y in s2 - s1):
                    return ExchangeResult(False, (b1, b2, x))
    return ExchangeResult(True)


@dataclass(frozen=True)
class StratumReport:
    """Support of a polynomial together with its exchange-check verdict."""

    kind: str  # "matroid_bases" or "m_convex"
    support: object
    check: ExchangeResult
    tol: float


def support_stratum(f, tol: float = 1e-12) -> StratumReport:
    """Extract the support of ``f`` at relative tolerance ``tol`` and tag it
    with the matching exchange verdict. Coefficients more negative than the
    tolerance are a domain error (these strata only cover the nonnegative
    cone)."""
    if isinstance(f, MultiAffinePoly):
        scale = max(abs(float(c)) for c in f.coeffs) if f.coeffs.size else 0.0
        cut = tol * scale
        for s, c in zip(f.basis.subsets, f.coeffs):
            if c < -cut:
                raise ValueError(f"negative coefficient {c} at subset {s}")
        fam = BasisFamily(f.n, f.d, f.support(tol))
        return StratumReport("matroid_bases", fam, is_matroid_bases(fam), tol)
    if isinstance(f, HomPoly):
        scale = max((abs(c) for c in f.terms.values()), default=0.0)
        cut = tol * scale
        for alpha, c in f.terms.items():
            if c < -cut:
                raise ValueError(f"negative coefficient {c} at exponent {alpha}")
        cand = MConvexCandidate(f.n, f.d, f.support(tol))
        return StratumReport("m_convex", cand, is_m_convex(cand), tol)
    raise TypeError(f"unsupported polynomial type {type(f)!r}")
