"""Finite Abelian groups presented as products of cyclic factors.

A group is Z_{n_1} x ... x Z_{n_r} with componentwise addition mod n_j.
Its dual is presented on the same coordinate tuples through the
root-of-unity pairing, so characters and elements share one arithmetic.
Subgroups are explicit element sets closed under the group law, quotients
are indexed coset tables with lexicographically smallest representatives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product


def _reduced(coords: tuple[int, ...], factors: tuple[int, ...]) -> tuple[int, ...]:
    if len(coords) != len(factors):
        raise ValueError(
            f"coordinate tuple {coords} does not match factors {factors}"
        )
    return tuple(int(c) % int(n) for c, n in zip(coords, factors))


@dataclass(frozen=True, order=True)
class GroupElement:
    """Element of a product of cyclic groups; coordinates reduced mod factors."""

    coords: tuple[int, ...]
    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "coords", _reduced(tuple(self.coords), factors))

    def _compatible(self, other):
        if type(other) is not type(self):
            raise TypeError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if self.factors != other.factors:
            raise ValueError(
                f"operands live in different groups: {self.factors} vs {other.factors}"
            )

    def __add__(self, other):
        self._compatible(other)
        return type(self)(
            tuple(a + b for a, b in zip(self.coords, other.coords)), self.factors
        )

    def __neg__(self):
        return type(self)(tuple(-a for a in self.coords), self.factors)

    def __sub__(self, other):
        self._compatible(other)
        return type(self)(
            tuple(a - b for a, b in zip(self.coords, other.coords)), self.factors
        )

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        return f"{type(self).__name__}{self.coords}"


class DualCharacter(GroupElement):
    """Character of a product of cyclic groups, in the self-dual presentation.

    The tuple (x_1, ..., x_r) stands for the character
    g -> exp(2 pi i sum_j x_j g_j / n_j).
    """


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """The group Z_{n_1} x ... x Z_{n_r}."""

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        if not factors or any(n < 1 for n in factors):
            raise ValueError(f"factors must be integers >= 1, got {self.factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.factors)

    def element(self, coords) -> GroupElement:
        return GroupElement(tuple(coords), self.factors)

    def character(self, coords) -> DualCharacter:
        return DualCharacter(tuple(coords), self.factors)

    @property
    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.rank, self.factors)

    @property
    def trivial_character(self) -> DualCharacter:
        return DualCharacter((0,) * self.rank, self.factors)

    def elements(self) -> list[GroupElement]:
        """All group elements in lexicographic order."""
        return [
            GroupElement(c, self.factors)
            for c in product(*(range(n) for n in self.factors))
        ]

    def characters(self) -> list[DualCharacter]:
        """All characters in lexicographic order."""
        return [
            DualCharacter(c, self.factors)
            for c in product(*(range(n) for n in self.factors))
        ]

    def contains(self, point: GroupElement) -> bool:
        return point.factors == self.factors

    def __repr__(self):
        return f"FiniteAbelianGroup{self.factors}"


def pairing_exponent(x: GroupElement, g: GroupElement) -> tuple[int, int]:
    """Exact pairing data (t, L) with <x, g> = exp(2 pi i t / L), 0 <= t < L."""
    if x.factors != g.factors:
        raise ValueError(
            f"pairing arguments live in different groups: {x.factors} vs {g.factors}"
        )
    lcm = math.lcm(*x.factors)
    t = sum(a * b * (lcm // n) for a, b, n in zip(x.coords, g.coords, x.factors))
    return t % lcm, lcm


def pairing(x: DualCharacter, g: GroupElement) -> complex:
    """Canonical pairing exp(2 pi i sum_j x_j g_j / n_j); unit modulus."""
    t, lcm = pairing_exponent(x, g)
    return cmath.exp(2j * cmath.pi * t / lcm)


def pairing_is_one(x: GroupElement, g: GroupElement) -> bool:
    """Exact integer test for <x, g> = 1."""
    t, _ = pairing_exponent(x, g)
    return t == 0


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by generators together with its full element set.

    Lives either in a group (elements are GroupElement) or in its dual
    (elements are DualCharacter); both sides use the same machinery.
    """

    parent: FiniteAbelianGroup
    generators: tuple[GroupElement, ...]
    elements: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))
        elems = set(self.elements)
        if not elems:
            raise ValueError("a subgroup carries at least the identity")
        point_type = type(self.elements[0])
        zero = point_type((0,) * self.parent.rank, self.parent.factors)
        if zero not in elems:
            raise ValueError("subgroup does not contain the identity")
        for a in self.elements:
            for b in self.elements:
                if a - b not in elems:
                    raise ValueError(
                        f"element set is not closed under the group law at {a} - {b}"
                    )
        generated = {zero}
        frontier = [zero]
        while frontier:
            current = frontier.pop()
            for g in self.generators:
                nxt = current + g
                if nxt not in generated:
                    generated.add(nxt)
                    frontier.append(nxt)
        if generated != elems:
            raise ValueError("generators do not generate the stored element set")

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def point_type(self) -> type:
        return type(self.elements[0])

    @property
    def is_dual_side(self) -> bool:
        return self.point_type is DualCharacter

    def __contains__(self, point) -> bool:
        return point in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def subgroup_from_generators(group: FiniteAbelianGroup, generators) -> Subgroup:
    """Closure of the generating set under the group law.

    Accepts GroupElement or DualCharacter generators (all of one kind);
    an empty set yields the trivial subgroup on the element side.
    """
    gens = tuple(generators)
    point_type = type(gens[0]) if gens else GroupElement
    for g in gens:
        if type(g) is not point_type:
            raise ValueError("generators must all be of the same kind")
        if not group.contains(g):
            raise ValueError(f"generator {g} does not lie in {group}")
    zero = point_type((0,) * group.rank, group.factors)
    seen = {zero}
    frontier = [zero]
    while frontier:
        current = frontier.pop()
        for g in gens:
            nxt = current + g
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return Subgroup(group, gens, tuple(sorted(seen)))


def trivial_subgroup(group: FiniteAbelianGroup) -> Subgroup:
    return subgroup_from_generators(group, ())


def full_subgroup(group: FiniteAbelianGroup) -> Subgroup:
    elems = tuple(group.elements())
    return Subgroup(group, elems, elems)


def annihilator(group: FiniteAbelianGroup, subgroup: Subgroup) -> Subgroup:
    """Points of the opposite side pairing trivially with the whole subgroup.

    For a subgroup H of G this is the character set
    {y : <y, h> = 1 for all h in H}; applied to a dual-side subgroup it
    returns the element-side annihilator, so double application recovers
    the original subgroup under the self-duality identification.
    """
    if subgroup.parent != group:
        raise ValueError("subgroup does not belong to the given group")
    ambient = group.elements() if subgroup.is_dual_side else group.characters()
    kept = tuple(
        p for p in ambient if all(pairing_is_one(p, h) for h in subgroup.generators)
    )
    return Subgroup(group, kept, kept)


@dataclass(frozen=True, eq=False)
class QuotientGroup:
    """Cosets of a subgroup, indexed by lexicographically smallest representative.

    Index 0 is always the coset of the identity. The projection table is
    total on the ambient point set of the subgroup's side.
    """

    parent: FiniteAbelianGroup
    subgroup: Subgroup
    representatives: tuple[GroupElement, ...]
    projection: dict

    def __len__(self) -> int:
        return len(self.representatives)

    def index_of(self, point) -> int:
        try:
            return self.projection[point]
        except KeyError:
            raise ValueError(f"{point} is not a point of the quotiented group") from None

    def coset_members(self, index: int) -> tuple:
        rep = self.representatives[index]
        return tuple(sorted(rep + h for h in self.subgroup.elements))

    def add(self, i: int, j: int) -> int:
        """Induced coset group law."""
        return self.index_of(self.representatives[i] + self.representatives[j])

    def negate(self, i: int) -> int:
        return self.index_of(-self.representatives[i])

    def act(self, a, index: int) -> int:
        """Natural action a[coset] = coset of a + representative."""
        return self.index_of(a + self.representatives[index])


def quotient(group: FiniteAbelianGroup, subgroup: Subgroup) -> QuotientGroup:
    """Enumerate the cosets of a subgroup, on either side of the duality."""
    if subgroup.parent != group:
        raise ValueError("subgroup does not belong to the given group")
    ambient = group.characters() if subgroup.is_dual_side else group.elements()
    projection: dict = {}
    representatives = []
    for p in ambient:  # lexicographic, so each first-seen point is its coset's minimum
        if p in projection:
            continue
        index = len(representatives)
        representatives.append(p)
        for h in subgroup.elements:
            projection[p + h] = index
    return QuotientGroup(group, subgroup, tuple(representatives), projection)


def quotient_pairing(quot: QuotientGroup, character, coset_index: int) -> complex:
    """Pairing of a character with a coset, via any representative.

    Only defined when the character pairs trivially with the quotiented
    subgroup; then the value does not depend on the representative. For a
    quotient of the dual group the roles are mirrored and ``character`` is
    a plain group element.
    """
    for h in quot.subgroup.generators:
        if not pairing_is_one(character, h):
            raise ValueError(
                f"{character} is not trivial on the subgroup; "
                "the pairing is not constant on cosets"
            )
    if not 0 <= coset_index < len(quot.representatives):
        raise ValueError(f"coset index {coset_index} out of range")
    return pairing(character, quot.representatives[coset_index])
