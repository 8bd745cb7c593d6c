"""Contractive-flow verification and escape-time ball coordinates.

The backward flow leaves any of the certified spaces in finite time
(unless started at the flow's fixed point), because the forward flow maps
the whole space strictly into its interior. Bracketing and bisecting that
exit against a membership oracle gives an escape time; the boundary
anchor's direction in centered eigen-coordinates, scaled by exp(-exit
time), is a candidate ball coordinate for the space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .certify import (
    DEFAULT_DIRECTIONS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    Verdict,
    certify_hom,
    certify_multiaffine,
    certify_stable,
)
from .poly import HomPoly, MultiAffinePoly
from .polarization import (
    PolarizationPlan,
    lifted_decomposition,
    make_plan,
    polarize_up,
    project_down,
)
from .sep import SpectralDecomposition, centered_norm, eigen_coords, flow

# centered norms below this are treated as the flow's fixed point
CENTER_EPS = 1e-10


class InfiniteEscape(Exception):
    """The input is the flow's fixed point; the backward flow never exits."""


class EscapeNotBracketed(Exception):
    """No exit found within the allowed backward time."""


@dataclass(frozen=True)
class MembershipOracle:
    """A certified space: a tag, a function from polynomial to Verdict,
    and the tolerance the certificates run at. Membership means any
    verdict other than Rejected."""

    space: str
    certify: Callable[[object], Verdict]
    tol: float

    def is_member(self, f) -> bool:
        return self.certify(f).is_member


def multiaffine_lorentzian_oracle(tol: float = DEFAULT_TOL) -> MembershipOracle:
    return MembershipOracle(
        "multiaffine-lorentzian", lambda f: certify_multiaffine(f, tol), tol
    )


def capped_lorentzian_oracle(tol: float = DEFAULT_TOL) -> MembershipOracle:
    return MembershipOracle("capped-lorentzian", lambda f: certify_hom(f, tol), tol)


def stable_oracle(
    directions: int = DEFAULT_DIRECTIONS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
) -> MembershipOracle:
    return MembershipOracle(
        "stable", lambda f: certify_stable(f, directions, seed, tol), tol
    )


@dataclass(frozen=True)
class EscapeTimeResult:
    """Backward exit time, the polynomial at the crossing, and the derived
    ball coordinate (norm exp(-sigma), direction from the anchor's
    centered eigen-coordinates)."""

    sigma: float
    anchor: object
    ball_point: np.ndarray
    converged: bool
    bracket_width: float


def _make_stepper(f, dec: SpectralDecomposition, plan: PolarizationPlan | None):
    """Return (flow_by, centered, dec) adapted to the polynomial type:
    capped polynomials move through the lift, multiaffine ones directly."""
    if isinstance(f, HomPoly):
        if plan is None:
            plan = make_plan(f.n, f.d, f.kappa)
        if dec is None:
            dec = lifted_decomposition(plan.lifted_n, plan.d)

        def flow_by(g, s):
            return project_down(flow(polarize_up(g, plan), s, dec), plan)

        def centered(g):
            return polarize_up(g, plan)

        return flow_by, centered, dec
    if isinstance(f, MultiAffinePoly):
        if dec is None:
            raise ValueError("a spectral decomposition is required for multiaffine flows")

        def flow_by(g, s):
            return flow(g, s, dec)

        def centered(g):
            return g

        return flow_by, centered, dec
    raise TypeError(f"unsupported polynomial type {type(f)!r}")


def escape_time(
    f,
    oracle: MembershipOracle,
    dec: SpectralDecomposition | None = None,
    s_max: float = 50.0,
    tol: float = 1e-8,
    plan: PolarizationPlan | None = None,
) -> EscapeTimeResult:
    """Locate the backward-flow exit from the oracle's space.

    Doubles a backward-time bracket until membership fails, then bisects
    to width ``tol``. The reported time inherits the oracle's tolerance on
    top of the bracket width. Raises InfiniteEscape at the fixed point and
    EscapeNotBracketed when no exit occurs before ``s_max``.
    """
    flow_by, centered, dec = _make_stepper(f, dec, plan)
    if centered_norm(centered(f), dec) < CENTER_EPS:
        raise InfiniteEscape("input is the flow's fixed point")
    if not oracle.is_member(f):
        raise ValueError("input is not a member of the oracle's space")
    # keep the overflow guard of the backward flow out of reach
    gap_max = 1.0 - float(dec.eigenvalues[-1])
    s_cap = min(s_max, 690.0 / gap_max)
    lo = 0.0
    hi = max(tol, 1e-3)
    while oracle.is_member(flow_by(f, -hi)):
        lo = hi
        hi *= 2.0
        if hi > s_cap:
            raise EscapeNotBracketed(f"still a member after backward time {lo}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if oracle.is_member(flow_by(f, -mid)):
            lo = mid
        else:
            hi = mid
    sigma = 0.5 * (lo + hi)
    anchor = flow_by(f, -sigma)
    _, x = eigen_coords(centered(anchor), dec)
    nrm = float(np.linalg.norm(x))
    direction = x / nrm
    ball_point = math.exp(-sigma) * direction
    ball_point.flags.writeable = False
    return EscapeTimeResult(sigma, anchor, ball_point, True, hi - lo)


def ball_coordinates(
    f,
    oracle: MembershipOracle,
    dec: SpectralDecomposition | None = None,
    s_max: float = 50.0,
    tol: float = 1e-8,
    plan: PolarizationPlan | None = None,
) -> np.ndarray:
    """Candidate ball coordinate of a member: zero at the fixed point,
    exp(-sigma) times the anchor direction elsewhere; unit norm exactly on
    the boundary."""
    _, centered, dec_resolved = _make_stepper(f, dec, plan)
    if centered_norm(centered(f), dec_resolved) < CENTER_EPS:
        return np.zeros(dec_resolved.size - 1)
    result = escape_time(f, oracle, dec_resolved, s_max=s_max, tol=tol, plan=plan)
    return result.ball_point


@dataclass(frozen=True)
class TrajectorySample:
    time: float
    poly: object
    centered_norm: float
    verdict: Verdict | None


def trajectory(f, dec, times, oracle: MembershipOracle | None = None, plan=None):
    """Flow snapshots at the given times: polynomial, centered norm, and
    (when an oracle is supplied) the certification verdict."""
    flow_by, centered, dec = _make_stepper(f, dec, plan)
    rows = []
    for t in times:
        g = flow_by(f, float(t))
        rows.append(
            TrajectorySample(
                float(t),
                g,
                centered_norm(centered(g), dec),
                oracle.certify(g) if oracle is not None else None,
            )
        )
    return rows


@dataclass(frozen=True)
class FlowCheckReport:
    n_samples: int
    identity_max: float
    semigroup_max: float
    mass_max: float
    contraction_violations: tuple
    lipschitz_max_ratio: float

    @property
    def ok(self) -> bool:
        return (
            self.identity_max <= 1e-10
            and self.semigroup_max <= 1e-10
            and self.mass_max <= 1e-10
            and not self.contraction_violations
        )


def contractive_flow_check(
    dec: SpectralDecomposition,
    oracle: MembershipOracle,
    samples,
    times=(0.01, 0.1, 1.0),
    pair_times=((0.3, 0.7), (1.5, -0.5), (-0.2, 0.9)),
) -> FlowCheckReport:
    """Numerically verify the contractive-flow properties on the given
    member polynomials: time-zero identity, the two-sided semigroup law,
    mass preservation, strict decrease of the centered norm for positive
    times (skipping the fixed point), and a spectral Lipschitz bound as a
    continuity probe."""
    identity_max = 0.0
    semigroup_max = 0.0
    mass_max = 0.0
    violations = []
    lipschitz_max = 0.0
    members = [g for g in samples if oracle.is_member(g)]
    for f in members:
        identity_max = max(
            identity_max, float(np.max(np.abs(flow(f, 0.0, dec).coeffs - f.coeffs)))
        )
        for s1, s2 in pair_times:
            left = flow(f, s1, dec)
            left = flow(left, s2, dec)
            right = flow(f, s1 + s2, dec)
            semigroup_max = max(
                semigroup_max, float(np.linalg.norm(left.coeffs - right.coeffs))
            )
        base = centered_norm(f, dec)
        for s in times:
            g = flow(f, float(s), dec)
            mass_max = max(mass_max, abs(g.value_at_ones() - f.value_at_ones()))
            if base > 1e-12 and not centered_norm(g, dec) < base:
                violations.append((f, float(s)))
    for a, b in zip(members, members[1:]):
        diff = float(np.linalg.norm(a.coeffs - b.coeffs))
        if diff < 1e-12:
            continue
        for s in times:
            moved = float(
                np.linalg.norm(flow(a, float(s), dec).coeffs - flow(b, float(s), dec).coeffs)
            )
            lipschitz_max = max(lipschitz_max, moved / diff)
    return FlowCheckReport(
        len(members),
        identity_max,
        semigroup_max,
        mass_max,
        tuple(violations),
        lipschitz_max,
    )
