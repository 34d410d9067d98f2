"""Atomic measures, Haar normalizations, and the quotient Fourier cotransform.

Measures are nonnegative weight functions on finite point sets. The one
normalization with content: the annihilator carries weight 1/|G/H| per
point, the unique choice making the cotransform

    (F omega)(y) = sum over cosets of <y, coset> * omega(coset)

unitary from functions on G/H (counting measure) onto functions on the
annihilator. Everything downstream inherits that convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from .groups import (
    FiniteAbelianGroup,
    GroupElement,
    QuotientGroup,
    Subgroup,
    annihilator,
    pairing,
    quotient,
)

DOMAIN_GROUP = "group"
DOMAIN_SUBGROUP = "subgroup"
DOMAIN_QUOTIENT = "quotient"
DOMAIN_DUAL = "dual"
DOMAIN_DUAL_SUBGROUP = "dual_subgroup"
DOMAIN_DUAL_QUOTIENT = "dual_quotient"


@dataclass(frozen=True)
class WeightedMeasure:
    """Nonnegative weights on a finite point set; zero weights are dropped.

    Points are group elements, characters, or coset indices depending on
    the domain tag. The support is exactly the stored key set.
    """

    domain: str
    weights: Mapping

    def __post_init__(self):
        cleaned = {}
        for point, w in self.weights.items():
            w = float(w)
            if w < 0.0:
                raise ValueError(f"negative weight {w} at {point}")
            if w > 0.0:
                cleaned[point] = w
        object.__setattr__(self, "weights", cleaned)

    @cached_property
    def support(self) -> frozenset:
        return frozenset(self.weights)

    def __call__(self, point) -> float:
        return self.weights.get(point, 0.0)

    @property
    def mass(self) -> float:
        return sum(self.weights.values())

    @property
    def is_zero(self) -> bool:
        return not self.weights

    def items(self):
        """Deterministic (point, weight) pairs, sorted by point."""
        return sorted(self.weights.items())

    def restricted(self, points) -> "WeightedMeasure":
        keep = set(points)
        return WeightedMeasure(
            self.domain, {p: w for p, w in self.weights.items() if p in keep}
        )

    def __add__(self, other: "WeightedMeasure") -> "WeightedMeasure":
        if self.domain != other.domain:
            raise ValueError(f"domain mismatch: {self.domain} vs {other.domain}")
        merged = dict(self.weights)
        for p, w in other.weights.items():
            merged[p] = merged.get(p, 0.0) + w
        return WeightedMeasure(self.domain, merged)


def counting_measure(domain: str, points) -> WeightedMeasure:
    return WeightedMeasure(domain, {p: 1.0 for p in points})


def is_absolutely_continuous(num: WeightedMeasure, den: WeightedMeasure) -> bool:
    """Exact support-inclusion test, the atomic form of having a density."""
    return num.support <= den.support


@dataclass(frozen=True, eq=False)
class QuotientContext:
    """Bundled data for one subgroup choice: G, H, G/H, the annihilator,
    and the quotient of the dual by the annihilator."""

    group: FiniteAbelianGroup
    subgroup: Subgroup
    quotient: QuotientGroup
    annihilator: Subgroup
    dual_quotient: QuotientGroup

    @classmethod
    def build(cls, group: FiniteAbelianGroup, subgroup: Subgroup) -> "QuotientContext":
        if subgroup.parent != group:
            raise ValueError("subgroup does not belong to the given group")
        if subgroup.is_dual_side:
            raise ValueError("expected a subgroup on the element side")
        ann = annihilator(group, subgroup)
        return cls(group, subgroup, quotient(group, subgroup), ann, quotient(group, ann))

    @property
    def n_cosets(self) -> int:
        return len(self.quotient)

    @property
    def hperp_points(self) -> tuple:
        return self.annihilator.elements

    @property
    def hperp_weight(self) -> float:
        """Haar weight per annihilator point, 1/|G/H|."""
        return 1.0 / self.n_cosets

    @cached_property
    def _fourier_matrix(self) -> np.ndarray:
        """F[a, i] = <y_a, rep_i> over annihilator points and coset reps."""
        return np.array(
            [
                [pairing(y, rep) for rep in self.quotient.representatives]
                for y in self.hperp_points
            ],
            dtype=complex,
        )

    def cotransform(self, omega) -> np.ndarray:
        """Values of the Fourier cotransform of a quotient function, indexed
        like ``hperp_points``."""
        omega = np.asarray(omega, dtype=complex)
        if omega.shape != (self.n_cosets,):
            raise ValueError(f"expected {self.n_cosets} coset values, got {omega.shape}")
        return self._fourier_matrix @ omega

    def cotransform_adjoint(self, phi) -> np.ndarray:
        """Adjoint of :meth:`cotransform`; inverse of it, by unitarity."""
        phi = np.asarray(phi, dtype=complex)
        if phi.shape != (len(self.hperp_points),):
            raise ValueError(
                f"expected {len(self.hperp_points)} annihilator values, got {phi.shape}"
            )
        return self.hperp_weight * (self._fourier_matrix.conj().T @ phi)

    def translated(self, a: GroupElement, omega) -> np.ndarray:
        """The shifted quotient function (a . omega)(coset) = omega(a^-1[coset])."""
        omega = np.asarray(omega, dtype=complex)
        return np.array(
            [omega[self.quotient.act(-a, i)] for i in range(self.n_cosets)],
            dtype=complex,
        )

    def indicator(self, cosets) -> np.ndarray:
        values = np.zeros(self.n_cosets, dtype=complex)
        for i in cosets:
            if not 0 <= i < self.n_cosets:
                raise ValueError(f"coset index {i} out of range")
            values[i] = 1.0
        return values


@dataclass(frozen=True)
class HaarConventions:
    """The four fixed Haar measures for one (G, H) choice."""

    on_group: WeightedMeasure
    on_subgroup: WeightedMeasure
    on_quotient: WeightedMeasure
    on_annihilator: WeightedMeasure


def haar_conventions(ctx: QuotientContext) -> HaarConventions:
    """Counting measure on G, H, G/H; weight 1/|G/H| per annihilator point."""
    return HaarConventions(
        on_group=counting_measure(DOMAIN_GROUP, ctx.group.elements()),
        on_subgroup=counting_measure(DOMAIN_SUBGROUP, ctx.subgroup.elements),
        on_quotient=counting_measure(DOMAIN_QUOTIENT, range(ctx.n_cosets)),
        on_annihilator=WeightedMeasure(
            DOMAIN_DUAL_SUBGROUP,
            {y: ctx.hperp_weight for y in ctx.hperp_points},
        ),
    )


def lift_measure(ctx: QuotientContext, nu: WeightedMeasure) -> WeightedMeasure:
    """Lift a measure on the dual quotient to the dual group.

    The lifted weight at a character x is nu(coset of x) times the Haar
    weight of the annihilator, so integrating any function against the
    lift equals integrating its fiber averages against nu.
    """
    if nu.domain != DOMAIN_DUAL_QUOTIENT:
        raise ValueError(f"expected a measure on the dual quotient, got {nu.domain!r}")
    weights = {}
    for x in ctx.group.characters():
        w = nu(ctx.dual_quotient.index_of(x)) * ctx.hperp_weight
        if w > 0.0:
            weights[x] = w
    return WeightedMeasure(DOMAIN_DUAL, weights)


def image_measure(ctx: QuotientContext, rho: WeightedMeasure) -> WeightedMeasure:
    """Push a measure on the dual group down to the dual quotient (fiber sums)."""
    if rho.domain != DOMAIN_DUAL:
        raise ValueError(f"expected a measure on the dual group, got {rho.domain!r}")
    weights: dict = {}
    for x, w in rho.weights.items():
        i = ctx.dual_quotient.index_of(x)
        weights[i] = weights.get(i, 0.0) + w
    return WeightedMeasure(DOMAIN_DUAL_QUOTIENT, weights)


def decompose_measure(
    nu: WeightedMeasure, reference: WeightedMeasure
) -> tuple[WeightedMeasure, WeightedMeasure]:
    """Split nu into the part carried by the reference support and the part
    disjoint from it; the two parts sum back to nu exactly."""
    if nu.domain != reference.domain:
        raise ValueError(f"domain mismatch: {nu.domain} vs {reference.domain}")
    inside = {p: w for p, w in nu.weights.items() if p in reference.support}
    outside = {p: w for p, w in nu.weights.items() if p not in reference.support}
    return (
        WeightedMeasure(nu.domain, inside),
        WeightedMeasure(nu.domain, outside),
    )
