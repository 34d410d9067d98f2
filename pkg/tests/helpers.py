"""Shared test utilities: brute-force oracles and instance builders."""

import numpy as np

from covpovm import (
    DOMAIN_DUAL,
    DiagonalRep,
    FiniteAbelianGroup,
    IsometryField,
    SectorSpec,
    WeightedMeasure,
    build_covariant_povm,
    subgroup_from_generators,
)


def random_isometry(rng, rows, cols):
    m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, _ = np.linalg.qr(m)
    return q[:, :cols]


def brute_closure(group, generators):
    """Fixpoint closure under pairwise sums, independent of the BFS route."""
    elems = {group.zero} | set(generators)
    while True:
        new = {a + b for a in elems for b in elems} | {-a for a in elems}
        if new <= elems:
            return elems
        elems |= new


def brute_cosets(group, subgroup_elements):
    """Partition the group into cosets by exhaustive difference testing."""
    cosets = []
    for g in group.elements():
        for coset in cosets:
            if (g - coset[0]) in set(subgroup_elements):
                coset.append(g)
                break
        else:
            cosets.append([g])
    return cosets


def build_rep(group, sector_data, rng, e_dim):
    """Assemble a rep plus random isometry fields from
    [(support weight dict, f_dim), ...] with characters given as coord tuples."""
    sectors = []
    fields = []
    for k, (weights, f_dim) in enumerate(sector_data):
        rho = WeightedMeasure(
            DOMAIN_DUAL, {group.character(c): w for c, w in weights.items()}
        )
        sectors.append(SectorSpec(rho, f_dim))
        fields.append(
            IsometryField(
                k,
                {x: random_isometry(rng, e_dim, f_dim) for x in rho.support},
            )
        )
    return DiagonalRep(group, tuple(sectors)), tuple(fields)


def standard_instances(seed=11):
    """Five distinct build instances spanning groups, subgroups, and
    multiplicities; returns a list of (name, CovariantPOVM)."""
    rng = np.random.default_rng(seed)
    out = []

    g4 = FiniteAbelianGroup((4,))
    rep, fields = build_rep(
        g4, [({(0,): 1.0, (1,): 2.0}, 1), ({(2,): 0.5}, 2)], rng, e_dim=3
    )
    h = subgroup_from_generators(g4, [g4.element([2])])
    out.append(("Z4_mod2", build_covariant_povm(rep, h, fields, e_dim=3)))

    g8 = FiniteAbelianGroup((8,))
    rep, fields = build_rep(
        g8, [({(0,): 1.0}, 1), ({(1,): 1.0, (2,): 3.0}, 2)], rng, e_dim=3
    )
    h = subgroup_from_generators(g8, [])
    out.append(("Z8_trivial", build_covariant_povm(rep, h, fields, e_dim=3)))

    g12 = FiniteAbelianGroup((12,))
    rep, fields = build_rep(
        g12, [({(0,): 1.0, (5,): 2.0}, 1), ({(3,): 1.0, (7,): 0.25}, 2)], rng, e_dim=2
    )
    h = subgroup_from_generators(g12, [g12.element([4])])
    out.append(("Z12_mod4", build_covariant_povm(rep, h, fields, e_dim=2)))

    rep, fields = build_rep(
        g12, [({(0,): 1.0, (2,): 1.0, (4,): 1.0}, 2)], rng, e_dim=2
    )
    h = subgroup_from_generators(g12, [g12.element([6])])
    out.append(("Z12_mod6", build_covariant_povm(rep, h, fields, e_dim=2)))

    g22 = FiniteAbelianGroup((2, 2))
    rep, fields = build_rep(
        g22, [({(0, 0): 1.0, (1, 0): 1.0}, 1), ({(0, 1): 2.0}, 2)], rng, e_dim=2
    )
    h = subgroup_from_generators(g22, [g22.element([1, 1])])
    out.append(("Z2xZ2", build_covariant_povm(rep, h, fields, e_dim=2)))

    return out


def scalar_z12_povm():
    """One-dimensional instance whose effects are |X| / 4."""
    g = FiniteAbelianGroup((12,))
    h = subgroup_from_generators(g, [g.element([4])])
    x0 = g.character([0])
    rep = DiagonalRep(g, (SectorSpec(WeightedMeasure(DOMAIN_DUAL, {x0: 1.0}), 1),))
    fields = (IsometryField(0, {x0: np.array([[1.0]], dtype=complex)}),)
    return build_covariant_povm(rep, h, fields, e_dim=1)
