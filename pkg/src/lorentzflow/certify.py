"""Membership and interiority certificates for Lorentzian and real stable
polynomials, plus the shared numerical kernels: symmetric
eigendecomposition, real-rootedness via the Hankel matrix of root power
sums, and discriminants.

Verdicts are three-valued. StrictInterior means every sub-check passed
with margin above the tolerance; BoundaryWithinTol means the polynomial
sits within tolerance of the membership conditions; Rejected is
conclusive and always carries a witness. The stability certificate
samples directions, so there only Rejected is conclusive and the other
two verdicts are evidence at the sampled resolution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .poly import HomPoly, MultiAffinePoly, hessian_quadratic
from .strata import BasisFamily, is_matroid_bases
from .polarization import polarize_up

import itertools

DEFAULT_TOL = 1e-9
DEFAULT_DIRECTIONS = 256
DEFAULT_SEED = 1729

# leading coefficients below this fraction of the largest one are treated
# as degree drops, not as genuine leading terms
_DEGENERATE_LEAD = 1e-14


class SignatureClass(enum.Enum):
    STRICT = "strict"
    AT_MOST_ONE_POSITIVE = "at_most_one_positive"
    FAIL = "fail"


class RootClass(enum.Enum):
    ALL_REAL_DISTINCT = "all_real_distinct"
    ALL_REAL_WITH_TIES = "all_real_with_ties"
    NOT_ALL_REAL = "not_all_real"


class VerdictStatus(enum.Enum):
    STRICT_INTERIOR = "strict_interior"
    BOUNDARY_WITHIN_TOL = "boundary_within_tol"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Verdict:
    """Certification outcome. ``witness`` is a JSON-ready dict present
    exactly when the verdict is Rejected."""

    status: VerdictStatus
    witness: dict | None
    tol: float

    @property
    def is_member(self) -> bool:
        return self.status is not VerdictStatus.REJECTED

    @property
    def is_strict(self) -> bool:
        return self.status is VerdictStatus.STRICT_INTERIOR


@dataclass(frozen=True)
class SymmetricSpectrum:
    """Descending eigenvalues and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class RootResult:
    kind: RootClass
    degree_dropped: bool = False


def symmetric_eigen(H) -> SymmetricSpectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Backed by LAPACK's symmetric solver; the reconstruction and
    orthonormality invariants are verified before returning.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"need a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H))) if H.size else 0.0)
    if np.max(np.abs(H - H.T)) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    w, V = np.linalg.eigh(H)
    w = w[::-1].copy()
    V = V[:, ::-1].copy()
    hnorm = max(1.0, float(np.linalg.norm(H)))
    if np.linalg.norm((V * w) @ V.T - H) > 1e-9 * hnorm:
        raise RuntimeError("eigendecomposition reconstruction error too large")
    if np.linalg.norm(V.T @ V - np.eye(H.shape[0])) > 1e-10 * max(1.0, H.shape[0]):
        raise RuntimeError("eigenvectors failed orthonormality")
    w.flags.writeable = False
    V.flags.writeable = False
    return SymmetricSpectrum(w, V)


def lorentzian_signature(H, tol: float = DEFAULT_TOL):
    """Classify the eigenvalue signature of a symmetric matrix.

    Returns (SignatureClass, eigenvalues). STRICT means exactly one
    eigenvalue above the tolerance and all others below its negative;
    AT_MOST_ONE_POSITIVE allows eigenvalues inside the tolerance band;
    FAIL means two or more clearly positive eigenvalues. The tolerance is
    scaled by the trace norm so it tracks the matrix's magnitude.
    """
    spectrum = symmetric_eigen(H)
    w = spectrum.eigenvalues
    eff = tol * max(1.0, float(np.sum(np.abs(w))))
    n_pos = int(np.count_nonzero(w > eff))
    if n_pos >= 2:
        return SignatureClass.FAIL, w
    n_neg = int(np.count_nonzero(w < -eff))
    if n_pos == 1 and n_neg == w.size - 1:
        return SignatureClass.STRICT, w
    return SignatureClass.AT_MOST_ONE_POSITIVE, w


def _check_normalized(f) -> None:
    if abs(f.value_at_ones() - 1.0) > 1e-9:
        raise ValueError(
            f"polynomial is not normalized: value at the all-ones point is {f.value_at_ones()}"
        )


def certify_multiaffine(f: MultiAffinePoly, tol: float = DEFAULT_TOL) -> Verdict:
    """Lorentzian certificate for a normalized multiaffine polynomial.

    Strict interior requires every coefficient above tol and, for every
    variable subset of size d-2, a strictly Lorentzian signature of the
    quadratic obtained by differentiating those variables away. The
    boundary verdict relaxes both to within-tolerance and additionally
    requires the support to satisfy basis exchange, since the eigenvalue
    conditions alone admit false positives at zero coefficients.
    """
    _check_normalized(f)
    n, d = f.n, f.d
    coeffs = f.coeffs
    worst_idx = int(np.argmin(coeffs))
    if coeffs[worst_idx] < -tol:
        return Verdict(
            VerdictStatus.REJECTED,
            {
                "kind": "negative_coefficient",
                "subset": list(f.basis.unrank(worst_idx)),
                "value": float(coeffs[worst_idx]),
            },
            tol,
        )
    strict_coeffs = bool(np.all(coeffs > tol))
    all_strict_signature = True
    if d >= 2:
        for s in itertools.combinations(range(n), d - 2):
            rest = [i for i in range(n) if i not in s]
            H = hessian_quadratic(f.derivative(s), rest)
            label, eigs = lorentzian_signature(H, tol)
            if label is SignatureClass.FAIL:
                return Verdict(
                    VerdictStatus.REJECTED,
                    {
                        "kind": "hessian_signature",
                        "subset": list(s),
                        "eigenvalues": [float(x) for x in eigs],
                    },
                    tol,
                )
            if label is not SignatureClass.STRICT:
                all_strict_signature = False
    if strict_coeffs and all_strict_signature:
        return Verdict(VerdictStatus.STRICT_INTERIOR, None, tol)
    support = tuple(
        s for s, c in zip(f.basis.subsets, coeffs) if c > tol
    )
    if not support:
        return Verdict(
            VerdictStatus.REJECTED,
            {"kind": "empty_support"},
            tol,
        )
    check = is_matroid_bases(BasisFamily(n, d, support))
    if not check:
        b1, b2, x = check.witness
        return Verdict(
            VerdictStatus.REJECTED,
            {
                "kind": "support_exchange",
                "basis_one": list(b1),
                "basis_two": list(b2),
                "element": int(x),
            },
            tol,
        )
    return Verdict(VerdictStatus.BOUNDARY_WITHIN_TOL, None, tol)


def certify_hom(f: HomPoly, tol: float = DEFAULT_TOL) -> Verdict:
    """Lorentzian certificate for a capped polynomial, decided through the
    lift: lifting is a linear isomorphism onto block-symmetric multiaffine
    polynomials and preserves membership and interiority both ways."""
    _check_normalized(f)
    inner = certify_multiaffine(polarize_up(f), tol)
    if inner.witness is None:
        return inner
    witness = dict(inner.witness)
    witness["lifted"] = True
    return Verdict(inner.status, witness, tol)


def _trim_trailing(coeffs: np.ndarray):
    """Drop degenerate leading coefficients; returns (trimmed, dropped)."""
    c = np.asarray(coeffs, dtype=float)
    if c.size == 0 or not np.any(c != 0.0):
        raise ValueError("zero polynomial")
    scale = float(np.max(np.abs(c)))
    dropped = False
    while c.size > 1 and abs(c[-1]) < _DEGENERATE_LEAD * scale:
        if c[-1] != 0.0:
            dropped = True
        c = c[:-1]
    return c, dropped


def _power_sums(coeffs: np.ndarray, count: int) -> np.ndarray:
    """Power sums of the roots from the coefficients, by the Newton
    recurrences (monic normalization happens here)."""
    c = np.asarray(coeffs, dtype=float)
    m = c.size - 1
    monic = c / c[-1]
    s = np.empty(count)
    s[0] = float(m)
    for k in range(1, count):
        acc = 0.0
        for i in range(1, min(k - 1, m) + 1):
            acc += monic[m - i] * s[k - i]
        if k <= m:
            acc += k * monic[m - k]
        s[k] = -acc
    return s


def hermite_matrix(coeffs) -> np.ndarray:
    """Hankel matrix of root power sums. Positive definite iff all roots
    are real and distinct; positive semidefinite iff all roots are real."""
    c, _ = _trim_trailing(coeffs)
    m = c.size - 1
    if m < 1:
        raise ValueError("need degree at least 1")
    s = _power_sums(c, 2 * m - 1)
    H = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            H[i, j] = s[i + j]
    return H


def real_rooted(coeffs, tol: float = DEFAULT_TOL) -> RootResult:
    """Classify a univariate polynomial's roots through the power-sum
    Hankel matrix, with the tolerance scaled by its trace."""
    c, dropped = _trim_trailing(coeffs)
    if c.size - 1 < 1:
        raise ValueError("need degree at least 1")
    H = hermite_matrix(c)
    w = np.linalg.eigvalsh(H)
    eff = tol * max(1.0, float(np.trace(H)))
    if w[0] > eff:
        return RootResult(RootClass.ALL_REAL_DISTINCT, dropped)
    if w[0] < -eff:
        return RootResult(RootClass.NOT_ALL_REAL, dropped)
    return RootResult(RootClass.ALL_REAL_WITH_TIES, dropped)


def discriminant(coeffs) -> float:
    """Discriminant via the Sylvester resultant of the polynomial and its
    derivative, with the sign convention that a quadratic a t^2 + b t + c
    gets b^2 - 4 a c."""
    c, _ = _trim_trailing(coeffs)
    m = c.size - 1
    if m < 1:
        raise ValueError("need degree at least 1")
    if m == 1:
        return 1.0
    dc = np.array([i * c[i] for i in range(1, m + 1)])
    size = 2 * m - 1
    S = np.zeros((size, size))
    desc = c[::-1]
    ddesc = dc[::-1]
    for row in range(m - 1):
        S[row, row : row + m + 1] = desc
    for row in range(m):
        S[m - 1 + row, row : row + m] = ddesc
    res = float(np.linalg.det(S))
    sign = -1.0 if (m * (m - 1) // 2) % 2 else 1.0
    return sign * res / float(c[-1])


def sample_sphere_sumzero(n: int, count: int, seed: int) -> np.ndarray:
    """Deterministic unit vectors with coordinate sum zero, by projecting
    standard Gaussian draws onto the sum-zero hyperplane and normalizing.
    Returns an array of shape (count, n)."""
    if n < 2:
        raise ValueError(f"need at least two coordinates, got n={n}")
    if count < 1:
        raise ValueError(f"need at least one sample, got {count}")
    rng = np.random.default_rng(seed)
    out = np.empty((count, n))
    k = 0
    while k < count:
        g = rng.standard_normal(n)
        g -= g.mean()
        nrm = float(np.linalg.norm(g))
        if nrm < 1e-8:
            continue
        out[k] = g / nrm
        k += 1
    return out


def _coefficient_items(f):
    if isinstance(f, MultiAffinePoly):
        return [(list(s), float(c)) for s, c in zip(f.basis.subsets, f.coeffs)]
    if isinstance(f, HomPoly):
        return [(list(a), c) for a, c in sorted(f.terms.items())]
    raise TypeError(f"unsupported polynomial type {type(f)!r}")


def certify_stable(
    f,
    directions: int = DEFAULT_DIRECTIONS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Sampled real-stability certificate for a normalized homogeneous
    polynomial with nonnegative coefficients.

    Restricts f along t*ones - y for seeded directions y on the sum-zero
    unit sphere and classifies each restriction's roots. A restriction
    with genuinely complex roots is a conclusive rejection; otherwise the
    verdict is strict when every sampled restriction has distinct real
    roots and every coefficient clears the tolerance.
    """
    _check_normalized(f)
    items = _coefficient_items(f)
    for label, c in items:
        if c < -tol:
            return Verdict(
                VerdictStatus.REJECTED,
                {"kind": "negative_coefficient", "exponent": label, "value": c},
                tol,
            )
    strict_coeffs = all(c > tol for _, c in items)
    if f.n < 2 or f.d < 2:
        # univariate homogeneous (a single monomial) and linear cases are
        # stable outright; only the coefficient margin distinguishes
        # strict from boundary
        status = VerdictStatus.STRICT_INTERIOR if strict_coeffs else VerdictStatus.BOUNDARY_WITHIN_TOL
        return Verdict(status, None, tol)
    ties_seen = False
    for y in sample_sphere_sumzero(f.n, directions, seed):
        line = f.restrict_line(y)
        result = real_rooted(line, tol)
        if result.kind is RootClass.NOT_ALL_REAL:
            return Verdict(
                VerdictStatus.REJECTED,
                {
                    "kind": "direction",
                    "direction": [float(v) for v in y],
                    "line_coefficients": [float(v) for v in line],
                },
                tol,
            )
        if result.kind is RootClass.ALL_REAL_WITH_TIES:
            ties_seen = True
    if strict_coeffs and not ties_seen:
        return Verdict(VerdictStatus.STRICT_INTERIOR, None, tol)
    return Verdict(VerdictStatus.BOUNDARY_WITHIN_TOL, None, tol)
