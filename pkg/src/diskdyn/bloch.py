"""Bloch-radius search and radial-stretch experiments.

The Bloch radius of a subdomain X of the disk is the supremum of rho-radii
of hyperbolic disks contained in X.  The search here reports certified
lower bounds only: a "non_bloch_witness" verdict ships an explicitly
sample-verified witness disk, while "bloch_up_to" records the largest
inradius seen within the budget without claiming the supremum is finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import DomainModel
from .errors import NumericError, PreconditionError
from .hyperbolic import (
    BOUNDARY_GUARD,
    DiskPoint,
    HyperbolicDisk,
    rho,
    rho_grid,
)
from .sampling import hyperbolic_lattice, witness_samples

# Certification shrink schedule: metric slack grows until strict Euclidean
# membership of every witness sample is decidable in double precision.
_CERTIFY_DELTAS = (0.0, 1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 5e-2)


@dataclass(frozen=True)
class SearchBudget:
    """Knobs of the two-phase inradius search.

    depth caps rho(0, center) for candidate centers; ring_step and
    angular_cap shape the coarse lattice; refine_iters bounds the local
    pattern search; witness_threshold is the inradius at which a witness
    verdict is attempted, certified on witness_samples points.
    """

    depth: float = 3.0
    ring_step: float = 0.25
    angular_cap: int = 64
    refine_iters: int = 120
    witness_threshold: float = 1.0
    witness_samples: int = 10000

    def __post_init__(self):
        if self.depth <= 0 or self.ring_step <= 0:
            raise PreconditionError("search budget needs positive depth and ring_step")
        if self.refine_iters < 0 or self.angular_cap < 1:
            raise PreconditionError("search budget counts must be positive")
        if self.witness_samples < 10_000:
            # witness verdicts are lower bounds; certification is only
            # meaningful with a dense membership sample
            raise PreconditionError("witness certification needs >= 10000 samples")


@dataclass(frozen=True)
class Verdict:
    """Either ("non_bloch_witness", certified radius) or
    ("bloch_up_to", largest inradius seen)."""

    kind: str
    value: float


@dataclass(frozen=True)
class BlochReport:
    best_center: DiskPoint
    best_inradius: float
    budget: SearchBudget
    verdict: Verdict
    witness: HyperbolicDisk | None = None


@dataclass(frozen=True)
class RadialStretch:
    """The quasiconformal self-homeomorphism z -> z |z|^(exponent - 1).

    Fixes 0, preserves every angle, is the identity at exponent 1, and in
    radial hyperbolic coordinates contracts distances from the origin to
    radial_distance(r) = artanh(tanh(r)^exponent).
    """

    exponent: float

    # Not a holomorphic map for exponent > 1; composition engines must not
    # apply Schwarz-Pick reasoning to it.
    holomorphic = False

    def __post_init__(self):
        if not float(self.exponent) >= 1.0:
            raise PreconditionError(
                f"stretch exponent must be >= 1, got {self.exponent!r}"
            )
        object.__setattr__(self, "exponent", float(self.exponent))

    def apply(self, z):
        return z * np.abs(z) ** (self.exponent - 1.0) if np.ndim(z) else self._scalar(z)

    def _scalar(self, z):
        z = complex(z)
        return z * abs(z) ** (self.exponent - 1.0)

    def __call__(self, z):
        return self.apply(z)

    def inverse_apply(self, z):
        inv = 1.0 / self.exponent - 1.0
        if np.ndim(z):
            z = np.asarray(z, dtype=complex)
            mag = np.abs(z)
            scale = np.power(mag, inv, out=np.zeros_like(mag), where=mag > 0)
            return z * scale
        z = complex(z)
        return z * abs(z) ** inv if z != 0 else 0j

    def radial_distance(self, r: float) -> float:
        """Image of the sphere rho(0, .) = r: its new radius about 0."""
        return math.atanh(math.tanh(float(r)) ** self.exponent)

    def inverse_radial(self, r: float) -> float:
        return math.atanh(math.tanh(float(r)) ** (1.0 / self.exponent))


class StretchedDomain(DomainModel):
    """Image of a catalog entry under a radial stretch.

    Membership is exact via the inverse stretch; the inradius field uses
    the stretched complement directly (mapped punctures when the base
    complement is a point set, the mapped boundary curve otherwise).
    """

    def __init__(self, base: DomainModel, stretch: RadialStretch):
        self.base = base
        self.stretch = stretch
        self.relatively_compact = base.relatively_compact
        self.expected_bloch = base.expected_bloch
        self.simply_connected = base.simply_connected
        punctures = getattr(base, "punctures", None)
        self._punctures = None if punctures is None else stretch.apply(punctures)

    def describe(self) -> str:
        return f"stretch({self.base.describe()},{self.stretch.exponent:g})"

    @property
    def anchor(self) -> DiskPoint:
        return DiskPoint(self.stretch.apply(complex(self.base.anchor)))

    def contains(self, z) -> bool:
        z = complex(z)
        if not 1.0 - abs(z) >= BOUNDARY_GUARD:
            return False
        return self.base.contains(self.stretch.inverse_apply(z))

    def boundary_point(self, t):
        return self.stretch.apply(np.asarray(self.base.boundary_point(t)))

    def inradius_at(self, a) -> float:
        if self._punctures is None:
            return super().inradius_at(a)
        self._require_member(a)
        return float(np.min(rho_grid(complex(a), self._punctures)))

    def probe_points(self, depth: float) -> list[complex]:
        base_depth = self.stretch.inverse_radial(depth)
        return [self.stretch.apply(p) for p in self.base.probe_points(base_depth)]

    def search_depth_cap(self) -> float | None:
        cap = self.base.search_depth_cap()
        return None if cap is None else self.stretch.radial_distance(cap)


def witness_disk_verify(X: DomainModel, disk: HyperbolicDisk, samples: int = 10000) -> bool:
    """True iff every point of a deterministic sample of the closed disk
    (interior rings, center, and the boundary circle) lies in X."""
    pts = witness_samples(disk.center, disk.radius, samples)
    return all(X.contains(p) for p in pts)


def _admissible(X: DomainModel, p: complex, depth: float) -> bool:
    if not 1.0 - abs(p) >= BOUNDARY_GUARD:
        return False
    if rho(0.0, p) > depth + 1e-9:
        return False
    return X.contains(p)


def _candidate_centers(X: DomainModel, budget: SearchBudget, depth: float) -> list[complex]:
    pts: list[complex] = [0j, complex(X.anchor)]
    pts.extend(hyperbolic_lattice(depth, budget.ring_step, budget.angular_cap).tolist())
    pts.extend(complex(p) for p in X.probe_points(depth))
    return [p for p in pts if _admissible(X, p, depth)]


def _prefer(value: float, center: complex, best_value: float, best_center: complex) -> bool:
    # Deterministic max-reduction; exact ties break on lexicographic coordinates.
    if value != best_value:
        return value > best_value
    return (center.real, center.imag) < (best_center.real, best_center.imag)


def _pattern_refine(
    X: DomainModel, center: complex, value: float, depth: float, budget: SearchBudget
) -> tuple[complex, float]:
    """Greedy four-direction pattern search with shrinking rho-steps.

    Each trial point sits at exactly `step` metric distance from the
    current center; rejected moves (outside X or past the depth cap) do
    not consume the improvement, only a full miss shrinks the step.
    """
    step = budget.ring_step
    directions = (1.0 + 0j, -1.0 + 0j, 1j, -1j)
    for _ in range(budget.refine_iters):
        if step < 1e-12:
            break
        e = math.tanh(step)
        moved = False
        for d in directions:
            u = e * d
            cand = (u + center) / (1.0 + center.conjugate() * u)
            if not _admissible(X, cand, depth):
                continue
            v = X.inradius_at(cand)
            if v > value:
                center, value = cand, v
                moved = True
                break
        if not moved:
            step *= 0.5
    return center, value


def _certify_witness(
    X: DomainModel, center: complex, value: float, budget: SearchBudget
) -> HyperbolicDisk:
    for delta in _CERTIFY_DELTAS:
        radius = value - delta
        if radius <= 0:
            break
        disk = HyperbolicDisk(center, radius)
        if witness_disk_verify(X, disk, budget.witness_samples):
            return disk
    raise NumericError(
        f"witness disk at {center!r} with radius near {value!r} failed "
        f"sample certification in {X.describe()}"
    )


def bloch_radius_search(X: DomainModel, budget: SearchBudget | None = None) -> BlochReport:
    """Two-phase certified-lower-bound search for the Bloch radius of X.

    Coarse phase scores every admissible lattice center, the domain
    anchor, the origin, and the domain's deep-point probes; the best
    candidate is then refined by a local pattern search.  The verdict is a
    witness only when the witness disk itself passes sample verification.
    """
    budget = budget or SearchBudget()
    cap = X.search_depth_cap()
    depth = budget.depth if cap is None else min(budget.depth, cap)
    if depth <= 0:
        raise PreconditionError(
            f"search depth {budget.depth!r} is exhausted by the depth cap "
            f"{cap!r} of {X.describe()}"
        )
    candidates = _candidate_centers(X, budget, depth)
    if not candidates:
        raise PreconditionError(
            f"no admissible search centers in {X.describe()} within depth {depth!r}"
        )
    best_center, best_value = candidates[0], X.inradius_at(candidates[0])
    for p in candidates[1:]:
        v = X.inradius_at(p)
        if _prefer(v, p, best_value, best_center):
            best_center, best_value = p, v
    best_center, best_value = _pattern_refine(X, best_center, best_value, depth, budget)
    if best_value >= budget.witness_threshold:
        witness = _certify_witness(X, best_center, best_value, budget)
        verdict = Verdict("non_bloch_witness", witness.radius)
        return BlochReport(DiskPoint(best_center), best_value, budget, verdict, witness)
    return BlochReport(
        DiskPoint(best_center), best_value, budget, Verdict("bloch_up_to", best_value)
    )


def qc_image_experiment(
    X: DomainModel, stretch: RadialStretch, budget: SearchBudget | None = None
) -> BlochReport:
    """Bloch search on the radial-stretch image of X.

    Exponent 1 is the identity map, so the report is exactly the report
    for X itself (same code path, not a stretched wrapper).
    """
    if stretch.exponent == 1.0:
        return bloch_radius_search(X, budget)
    return bloch_radius_search(StretchedDomain(X, stretch), budget)
