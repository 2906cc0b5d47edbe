"""Recursive map-sequence builders and direct metric comparisons.

`build_nonconstant_system` produces, on a domain with unbounded inradius,
a sequence whose composites pin two probe orbits a fixed distance apart
forever (a certified non-constant tail).  `build_alternating_system`
produces, on a non-relatively-compact domain, composites whose orbit of a
base point alternates between two values (two accumulation limits).  The
report functions check the two comparison estimates the builders rely on:
subdisk metric domination with ratio -> 1, and the convergence of the
small Blaschke preimage to its target as the zero approaches the circle.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

import numpy as np

from .domains import DomainModel, covering_with_basepoint
from .errors import BoundaryError, NumericError, PreconditionError
from .hyperbolic import Blaschke2, DiskPoint, MobiusAut, rho
from .ifs import MapDescriptor, RiemannTo

_CHECK_TOL = 1e-9


def _next_depth(depth: float) -> float:
    # Geometric while cheap, unit steps past 8: the band where the step
    # inequalities hold but boundary rounding noise does not yet drown them
    # is about one unit wide, and doubling would jump straight over it.
    return 2.0 * depth if 2.0 * depth <= 8.0 else depth + 1.0


def slack_sequence(n: int) -> float:
    """The n-th multiplicative slack, 2^(2^-(n+1)) - 1.

    Chosen so the infinite product of (1+slack)^2 telescopes to exactly 2.
    """
    if n < 1:
        raise PreconditionError(f"slack index must be >= 1, got {n!r}")
    return math.expm1(math.log(2.0) * 2.0 ** -(n + 1))


def slack_product(n: int) -> float:
    """Partial product of (1 + slack_i) for i = 1..n: 2^((1 - 2^-n)/2)."""
    if n < 0:
        raise PreconditionError(f"product length must be >= 0, got {n!r}")
    return 2.0 ** (0.5 * (1.0 - 2.0 ** -n))


def slack_product_squared(n: int) -> float:
    """Partial product of (1 + slack_i)^2 for i = 1..n: 2^(1 - 2^-n)."""
    if n < 0:
        raise PreconditionError(f"product length must be >= 0, got {n!r}")
    return 2.0 ** (1.0 - 2.0 ** -n)


def point_at_intrinsic_distance(X: DomainModel, base, distance: float, angle: float = 0.0):
    """The point of X at the given intrinsic distance from base, along the
    intrinsic geodesic leaving base in the given direction."""
    if not X.contains(base):
        raise PreconditionError(f"base point {complex(base)!r} not in {X.describe()}")
    if distance < 0:
        raise PreconditionError(f"distance must be >= 0, got {distance!r}")
    u0 = complex(X.riemann_from(base))
    step = math.tanh(distance) * cmath.exp(1j * angle)
    return complex(X.riemann_to((step + u0) / (1.0 + u0.conjugate() * step)))


@dataclass(frozen=True)
class NonconstantStep:
    """One accepted step of the non-constant builder.

    checks holds the five per-step inequality verdicts:
      pins        f_n(0) = f_n(a_n) = previous anchor and
                  f_n(w_n) = f_n(w_tilde) = previous marked point;
      pair        rho(a_n, w_n) = rho(0, w_tilde) < (1+slack_n) * previous
                  intrinsic distance;
      intrinsic   rho_X(a_n, w_n) < (1+slack_n) * rho(a_n, w_n)
                  < (1+slack_n)^2 * previous intrinsic distance;
      tilde_cap   rho(0, w_tilde) < slack_product(n) * initial lift < 1;
      product_cap rho_X(a_n, w_n) < slack_product_squared(n) * initial
                  lift < 1.
    """

    n: int
    anchor: complex
    marked: complex
    marked_tilde: DiskPoint
    lift: float
    descriptor: MapDescriptor
    depth_used: float
    dist_pair: float
    dist_intrinsic: float
    dist_tilde: float
    inradius: float
    checks: dict


def _nonconstant_checks(
    n, f, a_prev, w_prev, a_n, w_n, w_tilde, d_prev, d0, X
) -> tuple[dict, float, float, float]:
    eps = slack_sequence(n)
    dist_pair = rho(a_n, w_n)
    dist_tilde = rho(0.0, w_tilde)
    in_domain = X.contains(w_n)
    dist_intr = rho(X.riemann_from(a_n), X.riemann_from(w_n)) if in_domain else math.inf
    pins = (
        abs(f(0j) - a_prev) < _CHECK_TOL
        and abs(f(a_n) - a_prev) < _CHECK_TOL
        and abs(f(w_n) - w_prev) < _CHECK_TOL
        and abs(f(w_tilde) - w_prev) < _CHECK_TOL
    )
    checks = {
        "pins": pins,
        "pair": abs(dist_pair - dist_tilde) < _CHECK_TOL
        and dist_tilde < (1.0 + eps) * d_prev,
        "intrinsic": in_domain
        and dist_intr < (1.0 + eps) * dist_pair
        and dist_intr < (1.0 + eps) ** 2 * d_prev,
        "tilde_cap": dist_tilde < slack_product(n) * d0 < 1.0,
        "product_cap": dist_intr < slack_product_squared(n) * d0 < 1.0,
    }
    return checks, dist_pair, dist_intr, dist_tilde


def build_nonconstant_system(
    X: DomainModel, a0, w0, n_steps: int, escalation_cap: float = 60.0
):
    """Build maps f_1..f_N into X with F_n(0) = a0 and F_n(w_tilde_n) = w0.

    Requires 0 < rho_X(a0, w0) < 1/2 and a domain with a deep-point path
    and a conformal parameterization.  Each step lifts the current marked
    pair through a covering pinned at the current anchor (rotated so the
    lift is a positive real), splits the lift through a degree-two
    Blaschke map centered at a deep point, and escalates the deep-point
    depth until all five step inequalities hold.  Returns (descriptors,
    steps).

    Double precision supports roughly twenty steps: past that the step
    slacks fall below the evaluation noise of near-boundary points and
    no depth can satisfy the checks, so the builder raises NumericError.
    """
    if X.expected_bloch:
        raise PreconditionError(
            f"{X.describe()} has bounded inradius; the construction needs a "
            "deep-point path"
        )
    for name, p in (("a0", a0), ("w0", w0)):
        if not X.contains(p):
            raise PreconditionError(f"{name} = {complex(p)!r} is not in {X.describe()}")
    d0 = X.rho_X(a0, w0)
    if not 0.0 < d0 < 0.5:
        raise PreconditionError(
            f"need 0 < rho_X(a0, w0) < 1/2, got {d0!r}; move the points "
            "closer (point_at_intrinsic_distance helps)"
        )

    descriptors: list[MapDescriptor] = []
    steps: list[NonconstantStep] = []
    a_prev, w_prev = complex(a0), complex(w0)
    depth = 2.0
    for n in range(1, n_steps + 1):
        q = complex(X.riemann_from(a_prev))
        lift_raw = MobiusAut(q)(complex(X.riemann_from(w_prev)))
        theta = cmath.phase(lift_raw)
        lift = abs(lift_raw)
        d_prev = rho(0.0, lift)
        aligner = MobiusAut.two_point(0j, q, theta)

        while True:
            try:
                a_n = complex(X.deep_point(depth))
            except (BoundaryError, NumericError) as exc:
                raise NumericError(
                    f"step {n}: deep point at depth {depth!r} hit the "
                    "boundary guard before the step inequalities held"
                ) from exc
            splitter = Blaschke2(a_n)
            w_tilde, w_n = splitter.preimages(lift)
            f = MapDescriptor((splitter, aligner, RiemannTo(X)), target=X)
            checks, dist_pair, dist_intr, dist_tilde = _nonconstant_checks(
                n, f, a_prev, w_prev, a_n, complex(w_n), w_tilde, d_prev, d0, X
            )
            inradius = X.inradius_at(a_n)
            if all(checks.values()) and inradius > 1.0:
                break
            if depth >= escalation_cap:
                failed = [k for k, ok in checks.items() if not ok]
                if inradius <= 1.0:
                    failed.append("inradius")
                raise NumericError(
                    f"step {n}: escalation cap {escalation_cap!r} reached with "
                    f"unsatisfied bounds {failed}"
                )
            depth = min(_next_depth(depth), escalation_cap)

        descriptors.append(f)
        steps.append(
            NonconstantStep(
                n=n,
                anchor=a_n,
                marked=complex(w_n),
                marked_tilde=w_tilde,
                lift=lift,
                descriptor=f,
                depth_used=depth,
                dist_pair=dist_pair,
                dist_intrinsic=dist_intr,
                dist_tilde=dist_tilde,
                inradius=inradius,
                checks=checks,
            )
        )
        a_prev, w_prev = a_n, complex(w_n)
    return descriptors, steps


@dataclass(frozen=True)
class AlternatingStep:
    """One step of the alternating builder.

    checks holds: pins (f_n maps base -> previous value and the new point
    -> base), member (the new point lies in X), and circle (the distance
    from the new point to base equals the intrinsic distance from base to
    the previous value)."""

    n: int
    base: complex
    value: complex
    theta: float
    descriptor: MapDescriptor
    circle_radius: float
    checks: dict


def _arc_runs(member: np.ndarray) -> list[tuple[int, int]]:
    """Maximal circular runs of True as (start, length), deterministic order."""
    m = member.size
    runs = []
    idx = 0
    while idx < m:
        if not member[idx]:
            idx += 1
            continue
        start = idx
        while idx < m and member[idx]:
            idx += 1
        runs.append((start, idx - start))
    # Merge a wrap-around run.
    if len(runs) >= 2 and runs[0][0] == 0 and sum(runs[-1]) == m:
        first = runs.pop(0)
        last = runs.pop()
        runs.append((last[0], last[1] + first[1]))
    return runs


def build_alternating_system(X: DomainModel, base, value1, n_steps: int):
    """Build maps into X whose composites alternate the orbit of `base`.

    Each f_n is a covering pinned so f_n(base) equals the previous target
    (initially value1) with rotation chosen so the unique preimage of
    base under f_n lies in X: candidates sweep a hyperbolic circle about
    base, which must meet X.  Even composites return base to itself, odd
    ones to value1.  Returns (descriptors, steps).
    """
    if not X.simply_connected:
        raise PreconditionError(f"{X.describe()} has no single-valued parameterization")
    if X.relatively_compact:
        raise PreconditionError(
            f"{X.describe()} is relatively compact; the sweep circles must "
            "be able to leave and re-enter the domain arbitrarily far out"
        )
    for name, p in (("base", base), ("value1", value1)):
        if not X.contains(p):
            raise PreconditionError(f"{name} = {complex(p)!r} is not in {X.describe()}")
    base = complex(base)
    if base == complex(value1):
        raise PreconditionError("base and value1 must be distinct")

    to_base = MobiusAut(base)
    from_base = to_base.inverse()
    scan = 4096

    descriptors: list[MapDescriptor] = []
    steps: list[AlternatingStep] = []
    prev = complex(value1)
    for n in range(1, n_steps + 1):
        q = complex(X.riemann_from(prev))
        g = MobiusAut(q)(complex(X.riemann_from(base)))
        radius = rho(0.0, g)

        def candidate(theta):
            return from_base(cmath.exp(-1j * theta) * g)

        thetas = 2.0 * math.pi * np.arange(scan) / scan
        member = np.array([X.contains(candidate(t)) for t in thetas], dtype=bool)
        if member.all():
            theta_n = 0.0
        else:
            runs = _arc_runs(member)
            if not runs:
                raise NumericError(
                    f"step {n}: the circle of radius {radius!r} about the "
                    f"base point does not meet {X.describe()} at scan "
                    f"resolution {scan}"
                )
            start, length = max(runs, key=lambda r: (r[1], -r[0]))
            step = 2.0 * math.pi / scan
            lo = _refine_edge(candidate, X, thetas[start] - step, thetas[start])
            hi_idx = (start + length - 1) % scan
            hi = _refine_edge(candidate, X, thetas[hi_idx] + step, thetas[hi_idx])
            if hi < lo:
                hi += 2.0 * math.pi
            theta_n = float(0.5 * (lo + hi)) % (2.0 * math.pi)

        a_n = candidate(theta_n)
        f = covering_with_basepoint(X, base, prev, theta_n)
        checks = {
            "pins": abs(f(base) - prev) < _CHECK_TOL and abs(f(a_n) - base) < _CHECK_TOL,
            "member": X.contains(a_n),
            "circle": abs(rho(a_n, base) - radius) < _CHECK_TOL,
        }
        if not all(checks.values()):
            failed = [k for k, ok in checks.items() if not ok]
            raise NumericError(f"step {n}: alternating invariants failed: {failed}")
        descriptors.append(f)
        steps.append(
            AlternatingStep(
                n=n,
                base=base,
                value=complex(a_n),
                theta=theta_n,
                descriptor=f,
                circle_radius=radius,
                checks=checks,
            )
        )
        prev = complex(a_n)
    return descriptors, steps


def _refine_edge(candidate, X, t_out: float, t_in: float) -> float:
    """Bisect a membership edge between an outside and an inside angle."""
    for _ in range(48):
        mid = 0.5 * (t_out + t_in)
        if X.contains(candidate(mid)):
            t_in = mid
        else:
            t_out = mid
    return t_in


@dataclass(frozen=True)
class MetricComparisonReport:
    """Worst intrinsic-over-ambient distance ratios for centered subdisks.

    For the subdisk of metric radius `bound` about 0, ratio_excess is
    max over rho(0,z) < 1 of (intrinsic distance / ambient distance) - 1;
    it decreases to 0 as the bound grows.  density_ratio is the ratio of
    metric densities at the origin, 1/tanh(bound).
    """

    bounds: tuple
    ratio_excess: tuple
    density_ratio: tuple
    domination_ok: bool
    sample_count: int


def metric_comparison_report(bounds=(2.0, 4.0, 8.0), sample_count: int = 512):
    """Compare the intrinsic metric of centered subdisks with the ambient
    metric on samples with ambient distance below 1."""
    if any(not b > 1.0 for b in bounds):
        raise PreconditionError(f"bounds must exceed 1, got {bounds!r}")
    if sample_count < 2:
        raise PreconditionError("need at least two samples")
    r_max = math.tanh(1.0) * (1.0 - 1e-12)
    radii = r_max * np.arange(1, sample_count + 1) / sample_count
    ambient = np.arctanh(radii)
    excesses = []
    densities = []
    domination = True
    for bound in bounds:
        c = math.tanh(bound)
        intrinsic = np.arctanh(radii / c)
        domination &= bool(np.all(intrinsic >= ambient))
        excesses.append(float(np.max(intrinsic / ambient)) - 1.0)
        densities.append(1.0 / c)
    if not domination:
        raise NumericError("intrinsic metric fell below the ambient metric")
    return MetricComparisonReport(
        bounds=tuple(float(b) for b in bounds),
        ratio_excess=tuple(excesses),
        density_ratio=tuple(densities),
        domination_ok=domination,
        sample_count=int(sample_count),
    )


@dataclass(frozen=True)
class PreimageConvergenceReport:
    """Gap between rho(0, small preimage) and its limit rho(0, target) as
    the Blaschke zero's modulus approaches 1.

    real_axis_gaps uses zeros on the positive real axis (the anchored
    oracle values); sampled_gaps takes the worst gap over seeded random
    zero arguments at the same moduli.  identity_error is the largest
    observed violation of rho(0, z_small) = rho(zero, z_big)."""

    target: complex
    limit: float
    moduli: tuple
    real_axis_gaps: tuple
    sampled_gaps: tuple
    identity_error: float


def preimage_convergence_report(
    target=0.3, moduli=(0.9, 0.99, 0.999), seed: int = 0, args_per_modulus: int = 8
):
    """Measure preimage convergence at the given zero moduli.

    Raises when the real-axis gap sequence fails to decrease, or when the
    final gaps are not below 0.01 for moduli reaching 0.999.
    """
    target = complex(DiskPoint(target))
    if target == 0:
        raise PreconditionError("target must be nonzero")
    limit = rho(0.0, target)
    rng = random.Random(seed)
    real_gaps = []
    sampled_gaps = []
    identity_err = 0.0
    for mod in moduli:
        z1, z2 = Blaschke2(mod).preimages(target)
        real_gaps.append(abs(rho(0.0, z1) - limit))
        identity_err = max(identity_err, abs(rho(0.0, z1) - rho(mod, z2)))
        worst = 0.0
        for _ in range(args_per_modulus):
            zero = mod * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
            z1, z2 = Blaschke2(zero).preimages(target)
            worst = max(worst, abs(rho(0.0, z1) - limit))
            identity_err = max(identity_err, abs(rho(0.0, z1) - rho(zero, z2)))
        sampled_gaps.append(worst)
    if any(b >= a for a, b in zip(real_gaps, real_gaps[1:], strict=False)):
        raise NumericError(f"real-axis gaps not decreasing: {real_gaps!r}")
    if moduli and moduli[-1] >= 0.999 and not (
        real_gaps[-1] < 0.01 and sampled_gaps[-1] < 0.01
    ):
        raise NumericError(
            f"gaps at modulus {moduli[-1]!r} not below 0.01: "
            f"real {real_gaps[-1]!r}, sampled {sampled_gaps[-1]!r}"
        )
    return PreimageConvergenceReport(
        target=target,
        limit=limit,
        moduli=tuple(float(m) for m in moduli),
        real_axis_gaps=tuple(real_gaps),
        sampled_gaps=tuple(sampled_gaps),
        identity_error=identity_err,
    )
