"""Ready-made covariant observables and Born-rule evaluation.

Three constructions: the cyclic surrogate of the covariant position
observable, the phase observable of a torus representation with arbitrary
multiplicities, and the two-mode phase difference observable. The torus
enters in band-limited form, so every Fourier coefficient is read off a
trigonometric polynomial exactly; the cyclic case delegates to the
generic POVM builder.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .groups import FiniteAbelianGroup, subgroup_from_generators
from .harmonic import DOMAIN_DUAL, WeightedMeasure
from .povm import CovariantPOVM, DiagonalRep, IsometryField, SectorSpec, build_covariant_povm

DEFAULT_ATOL = 1e-9


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite Fourier sum w(e^{i theta}) = sum_n c_n e^{i n theta}.

    Exact zero coefficients are dropped. The cotransform convention is
    (1/2pi) integral of w(e^{i theta}) e^{i n theta}, which picks out the
    coefficient at -n.
    """

    coeffs: Mapping[int, complex]

    def __post_init__(self):
        cleaned = {int(n): complex(c) for n, c in self.coeffs.items() if complex(c) != 0}
        object.__setattr__(self, "coeffs", cleaned)

    @property
    def degree(self) -> int:
        return max((abs(n) for n in self.coeffs), default=0)

    def fourier_coefficient(self, n: int) -> complex:
        """Cotransform value at frequency n, i.e. the coefficient at -n."""
        return self.coeffs.get(-int(n), 0.0 + 0.0j)

    def eval_angle(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta, dtype=complex)
        for n, c in self.coeffs.items():
            out = out + c * np.exp(1j * n * theta)
        return out

    def rotated(self, z: complex) -> "TrigPolynomial":
        """Precomposition with rotation by z: w_z(w) = w(z^{-1} w)."""
        return TrigPolynomial({n: c * z ** (-n) for n, c in self.coeffs.items()})

    def is_real_valued(self, atol: float = 1e-12) -> bool:
        return all(
            abs(c - self.coeffs.get(-n, 0.0 + 0.0j).conjugate()) <= atol
            for n, c in self.coeffs.items()
        )

    @staticmethod
    def one() -> "TrigPolynomial":
        return TrigPolynomial({0: 1.0})

    @staticmethod
    def cosine() -> "TrigPolynomial":
        return TrigPolynomial({1: 0.5, -1: 0.5})


@dataclass(frozen=True, eq=False)
class PhaseObservable:
    """Covariant observable of a torus representation with finite spectrum.

    One isometry of shape (e_dim, multiplicity) per occupied frequency;
    an optional degree window caps the band limit of admissible outcome
    functions.
    """

    isometries: Mapping[int, np.ndarray]
    degree_window: int | None = None

    def __post_init__(self):
        if not self.isometries:
            raise ValueError("at least one frequency is required")
        mats = {int(k): np.asarray(w, dtype=complex) for k, w in self.isometries.items()}
        e_dims = {w.shape[0] for w in mats.values()}
        if len(e_dims) != 1:
            raise ValueError("all isometries must share the embedding dimension")
        for k, w in mats.items():
            dev = np.abs(w.conj().T @ w - np.eye(w.shape[1])).max()
            if dev > DEFAULT_ATOL:
                raise ValueError(f"matrix at frequency {k} is not isometric ({dev:.2e})")
        object.__setattr__(self, "isometries", mats)

    @cached_property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.isometries))

    @property
    def e_dim(self) -> int:
        return next(iter(self.isometries.values())).shape[0]

    def f_dim(self, k: int) -> int:
        return self.isometries[k].shape[1]

    @property
    def total_dim(self) -> int:
        return sum(self.f_dim(k) for k in self.indices)


def phase_matrix_element(
    obs: PhaseObservable, omega: TrigPolynomial, j: int, k: int
) -> np.ndarray:
    """Block of the phase observable between two frequencies: the outcome
    function's cotransform at j - k times the isometry overlap."""
    if j not in obs.isometries or k not in obs.isometries:
        raise ValueError(f"frequencies ({j}, {k}) outside the index set")
    if obs.degree_window is not None and omega.degree > obs.degree_window:
        raise ValueError(
            f"outcome function degree {omega.degree} exceeds the window "
            f"{obs.degree_window}"
        )
    w_j = obs.isometries[j]
    w_k = obs.isometries[k]
    return omega.fourier_coefficient(j - k) * (w_j.conj().T @ w_k)


def assemble_phase_operator(obs: PhaseObservable, omega: TrigPolynomial) -> np.ndarray:
    """Dense matrix over the multiplicity sum, frequencies in sorted order."""
    dims = [obs.f_dim(k) for k in obs.indices]
    offsets = np.concatenate([[0], np.cumsum(dims)])
    out = np.zeros((offsets[-1], offsets[-1]), dtype=complex)
    for a, j in enumerate(obs.indices):
        for b, k in enumerate(obs.indices):
            out[offsets[a] : offsets[a + 1], offsets[b] : offsets[b + 1]] = (
                phase_matrix_element(obs, omega, j, k)
            )
    return out


@dataclass(frozen=True, eq=False)
class PhaseDifferenceObservable:
    """Two-mode phase difference observable over a finite frequency window,
    specified by one unit vector per occupied frequency pair."""

    vectors: Mapping[tuple[int, int], np.ndarray]

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("at least one frequency pair is required")
        vecs = {}
        for key, v in self.vectors.items():
            v = np.asarray(v, dtype=complex).reshape(-1)
            if abs(np.linalg.norm(v) - 1.0) > DEFAULT_ATOL:
                raise ValueError(f"vector at {key} is not normalized")
            vecs[(int(key[0]), int(key[1]))] = v
        object.__setattr__(self, "vectors", vecs)

    @cached_property
    def window(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.vectors))


def phase_difference_matrix_element(
    obs: PhaseDifferenceObservable,
    omega: TrigPolynomial,
    source: tuple[int, int],
    target: tuple[int, int],
) -> complex:
    """Matrix element between two frequency pairs.

    Structurally zero unless the pairs have equal index sum; on the
    surviving diagonal it is the cotransform at the frequency mismatch
    times the overlap of the defining unit vectors.
    """
    i, j = int(source[0]), int(source[1])
    l, m = int(target[0]), int(target[1])
    if (i, j) not in obs.vectors or (l, m) not in obs.vectors:
        raise ValueError(f"frequency pairs {source}, {target} outside the window")
    if i + j != l + m:
        return 0.0 + 0.0j
    h_src = obs.vectors[(i, j)]
    h_tgt = obs.vectors[(l, m)]
    overlap = complex(np.vdot(h_tgt, h_src))  # linear in the source vector
    return omega.fourier_coefficient(j - m) * overlap


def assemble_phase_difference_operator(
    obs: PhaseDifferenceObservable, omega: TrigPolynomial
) -> np.ndarray:
    """Dense matrix over the window, pairs in sorted order."""
    window = obs.window
    out = np.zeros((len(window), len(window)), dtype=complex)
    for b, src in enumerate(window):
        for a, tgt in enumerate(window):
            out[a, b] = phase_difference_matrix_element(obs, omega, src, tgt)
    return out


def window_truncates_selection_rule(obs: PhaseDifferenceObservable) -> bool:
    """Whether the window cuts an index-sum class inside its own bounding box.

    A full rectangle never truncates; the assembled matrix is then the
    whole principal block of each surviving class. A ragged window that
    omits a lattice point of an occupied anti-diagonal inside the box is
    flagged; its assembled effects are still principal submatrices, but
    class blocks are incomplete.
    """
    window = set(obs.window)
    i_vals = [i for i, _ in window]
    j_vals = [j for _, j in window]
    sums = {i + j for i, j in window}
    for i in range(min(i_vals), max(i_vals) + 1):
        for j in range(min(j_vals), max(j_vals) + 1):
            if i + j in sums and (i, j) not in window:
                return True
    return False


def position_povm_zn(n: int, unit_vectors: Sequence[np.ndarray]) -> CovariantPOVM:
    """Cyclic surrogate of the covariant position observable.

    The regular-type representation of Z_n carries every character once;
    a choice of one unit vector per character determines the observable.
    Grid spacing on the line corresponds to 2 pi / n here, and the matrix
    elements carry the same overlap kernel as the continuous construction.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if len(unit_vectors) != n:
        raise ValueError(f"expected {n} unit vectors, got {len(unit_vectors)}")
    vectors = [np.asarray(v, dtype=complex).reshape(-1) for v in unit_vectors]
    e_dim = vectors[0].shape[0]
    for x, v in enumerate(vectors):
        if v.shape[0] != e_dim:
            raise ValueError("all vectors must share the embedding dimension")
        if abs(np.linalg.norm(v) - 1.0) > DEFAULT_ATOL:
            raise ValueError(f"vector at {x} is not normalized")
    group = FiniteAbelianGroup((n,))
    trivial = subgroup_from_generators(group, ())
    sectors = []
    fields = []
    for x in range(n):
        char = group.character([x])
        sectors.append(SectorSpec(WeightedMeasure(DOMAIN_DUAL, {char: 1.0}), 1))
        fields.append(IsometryField(x, {char: vectors[x][:, None]}))
    rep = DiagonalRep(group, tuple(sectors))
    return build_covariant_povm(rep, trivial, tuple(fields), e_dim=e_dim)


def born_distribution(state: np.ndarray, povm: CovariantPOVM, partition) -> np.ndarray:
    """Outcome probabilities of a unit state over a partition of the cosets."""
    state = np.asarray(state, dtype=complex).reshape(-1)
    if state.shape[0] != povm.dimension:
        raise ValueError(
            f"state has dimension {state.shape[0]}, POVM acts on {povm.dimension}"
        )
    if abs(np.linalg.norm(state) - 1.0) > DEFAULT_ATOL:
        raise ValueError("state is not normalized")
    cells = [tuple(cell) for cell in partition]
    seen: set[int] = set()
    for cell in cells:
        if seen & set(cell):
            raise ValueError("partition cells overlap")
        seen |= set(cell)
    if seen != set(range(povm.ctx.n_cosets)):
        raise ValueError("partition does not cover the quotient")
    probs = [
        float(np.real(np.vdot(state, povm.assembled_effect(cell) @ state)))
        for cell in cells
    ]
    return np.array(probs)


def sample_outcomes(
    state: np.ndarray,
    povm: CovariantPOVM,
    partition,
    n: int,
    seed: int,
) -> np.ndarray:
    """Draw measurement outcomes by inverse transform over the Born weights.

    Uses the counter-based Philox generator keyed by the seed, so draw i is
    a fixed function of (seed, i) on every platform and batches can be
    generated independently and merged.
    """
    if n < 0:
        raise ValueError(f"sample count must be >= 0, got {n}")
    probs = born_distribution(state, povm, partition)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    uniforms = rng.random(n)
    edges = np.cumsum(probs)
    draws = np.minimum(
        np.searchsorted(edges, uniforms, side="right"), len(probs) - 1
    )
    return np.bincount(draws, minlength=len(probs))
