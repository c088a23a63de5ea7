"""Simplex-embedding linear program: assembly, robustness, model extraction.

The decision variables are the noise weight ``r`` and a nonnegative
certificate matrix ``sigma``; the equality constraints require

    r * IE.T @ D @ IO + (1 - r) * IE.T @ IO  =  HE.T @ sigma @ HO

where ``IE``/``IO`` are the inclusion maps of the fragment, ``HE``/``HO`` the
facet matrices of the effect and state cones, and ``D`` the noise matrix.
The optimum of ``min r`` is the robustness of the contextuality proof; an
optimal ``sigma`` unpacks into a noncontextual model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cones import ConeFacets, enumerate_facets
from .errors import (
    AssemblyError,
    CertificateCorruptionError,
    InternalConsistencyError,
    InvalidNoiseError,
)
from .fragment import (
    GptFragment,
    InclusionMaps,
    compute_inclusion_maps,
    dedupe_vectors,
)
from .lp import LinearProgram, LpStatus, solve
from .tolerance import resolve_tol


class NoiseKind(Enum):
    DEPOLARIZING = "depolarizing"
    DEPHASING = "dephasing"
    CUSTOM = "custom"


@dataclass(frozen=True)
class NoiseMap:
    """Linear noise map on the common space, as an explicit matrix.

    Built-ins: depolarizing (rank-one ``maxmix @ unit.T``, sending every
    normalized state to the maximally mixed state) and dephasing along an
    axis at angle ``eta`` in the ZX plane (three-dimensional representation
    only).  Both are idempotent and fix the unit effect.
    """

    kind: NoiseKind
    matrix: np.ndarray
    eta: float | None = None

    @classmethod
    def depolarizing(cls, fragment: GptFragment, tol: float | None = None) -> "NoiseMap":
        tol = resolve_tol(tol)
        unit = fragment.unit
        maxmix = fragment.maxmix
        pairing = float(unit @ maxmix)
        if abs(pairing - 1.0) > tol:
            raise InvalidNoiseError(
                f"maximally mixed state pairs to {pairing:.6g} with the unit, expected 1"
            )
        return cls(kind=NoiseKind.DEPOLARIZING, matrix=np.outer(maxmix, unit))

    @classmethod
    def dephasing(cls, eta: float) -> "NoiseMap":
        eta = float(eta)
        c, s = math.cos(eta), math.sin(eta)
        matrix = np.array(
            [
                [1.0, 0.0, 0.0],
                [0.0, c * c, c * s],
                [0.0, c * s, s * s],
            ]
        )
        return cls(kind=NoiseKind.DEPHASING, matrix=matrix, eta=eta)

    @classmethod
    def custom(cls, matrix) -> "NoiseMap":
        return cls(kind=NoiseKind.CUSTOM, matrix=np.asarray(matrix, dtype=float))


class EmbeddingStatus(Enum):
    ALREADY_EMBEDDABLE = "AlreadyEmbeddable"
    ROBUST_UP_TO = "RobustUpTo"
    NO_EMBEDDING_EVEN_AT_FULL_NOISE = "NoEmbeddingEvenAtFullNoise"


@dataclass(frozen=True)
class NoncontextualModel:
    """Ontic-state model: epistemic distributions and response functions.

    ``epistemic_states[label]`` is a probability vector of length
    ``ontic_dim`` for each state; ``response_functions[label]`` a [0, 1]
    vector for each effect; their dot products reproduce the (noisy)
    fragment statistics.
    """

    ontic_dim: int
    epistemic_states: dict[str, np.ndarray]
    response_functions: dict[str, np.ndarray]


@dataclass(frozen=True)
class EmbeddingSolution:
    """Robustness result: minimal noise weight, certificate and model.

    ``r_min`` is NaN when the status is NoEmbeddingEvenAtFullNoise (possible
    only for custom noise); ``sigma`` and ``model`` are then None.
    """

    r_min: float
    sigma: np.ndarray | None
    status: EmbeddingStatus
    model: NoncontextualModel | None


def fragment_facets(
    fragment: GptFragment,
    maps: InclusionMaps,
    tol: float | None = None,
) -> tuple[ConeFacets, ConeFacets]:
    """Facets of the state and effect cones, in inclusion-map coordinates.

    Duplicate generators are dropped (with a warning) and the zero effect is
    excluded before enumeration; because the deduplicated generators still
    span the full coordinate space of their side, the returned facet rows are
    expressed directly in ``state_coords``/``effect_coords`` coordinates.
    """
    tol = resolve_tol(tol)
    state_gens = dedupe_vectors(fragment.states, tol)
    h_states = enumerate_facets(
        [maps.state_coords[label] for label in state_gens], tol
    )
    nonzero = {
        label: vec
        for label, vec in fragment.effects.items()
        if float(np.linalg.norm(vec)) > tol
    }
    effect_gens = dedupe_vectors(nonzero, tol)
    h_effects = enumerate_facets(
        [maps.effect_coords[label] for label in effect_gens], tol
    )
    return h_states, h_effects


def assemble_embedding_lp(
    fragment: GptFragment,
    maps: InclusionMaps,
    h_states: ConeFacets,
    h_effects: ConeFacets,
    noise: NoiseMap,
    tol: float | None = None,
) -> LinearProgram:
    """Embedding LP with variables ``(r, vec(sigma))`` and objective ``min r``.

    One equality row per effect-span x state-span basis pair; ``sigma`` is
    flattened row-major with shape (effect facets, state facets); bounds are
    ``0 <= r <= 1`` and ``sigma >= 0`` entrywise.
    """
    tol = resolve_tol(tol)
    d = fragment.ambient_dim
    matrix = np.asarray(noise.matrix, dtype=float)
    if matrix.shape != (d, d):
        raise AssemblyError(
            f"noise matrix has shape {matrix.shape}, expected ({d}, {d})"
        )
    k_states = maps.state_basis.shape[1]
    k_effects = maps.effect_basis.shape[1]
    if h_states.generator_span_dim != k_states:
        raise AssemblyError(
            f"state facets live in dimension {h_states.generator_span_dim}, "
            f"inclusion maps in {k_states}"
        )
    if h_effects.generator_span_dim != k_effects:
        raise AssemblyError(
            f"effect facets live in dimension {h_effects.generator_span_dim}, "
            f"inclusion maps in {k_effects}"
        )
    unit = fragment.unit
    drift = float(np.max(np.abs(matrix @ unit - unit)))
    if drift > tol:
        raise InvalidNoiseError(f"noise map moves the unit effect by {drift:.3g}")

    pairing = maps.effect_basis.T @ maps.state_basis
    noisy_pairing = maps.effect_basis.T @ matrix @ maps.state_basis
    n_eff = h_effects.normals.shape[0]
    n_sta = h_states.normals.shape[0]

    n_rows = k_effects * k_states
    n_vars = 1 + n_eff * n_sta
    A = np.zeros((n_rows, n_vars))
    A[:, 0] = -(noisy_pairing - pairing).reshape(-1)
    A[:, 1:] = np.kron(h_effects.normals.T, h_states.normals.T).reshape(n_rows, -1)
    b = pairing.reshape(-1)
    c = np.zeros(n_vars)
    c[0] = 1.0
    upper = np.full(n_vars, np.inf)
    upper[0] = 1.0
    return LinearProgram(objective=c, constraint_matrix=A, rhs=b, upper_bounds=upper)


def extract_model(
    fragment: GptFragment,
    maps: InclusionMaps,
    h_states: ConeFacets,
    h_effects: ConeFacets,
    sigma: np.ndarray,
    r: float,
    noise: NoiseMap,
    tol: float | None = None,
) -> NoncontextualModel:
    """Unpack an optimal certificate ``sigma`` into a noncontextual model.

    States embed as ``HO @ state_coords``, effects as ``sigma.T @ HE @
    effect_coords``; the unit effect's embedding supplies the ontic weights.
    Ontic states with weight below ``tol`` are dropped (their response values
    would be 0/0).
    """
    tol = resolve_tol(tol)
    iota = {
        label: h_states.normals @ coords for label, coords in maps.state_coords.items()
    }
    kappa = {
        label: sigma.T @ (h_effects.normals @ coords)
        for label, coords in maps.effect_coords.items()
    }
    weights = kappa[fragment.unit_label]
    for label, vec in iota.items():
        worst = float(np.min(weights * vec)) if vec.size else 0.0
        if worst < -tol:
            raise CertificateCorruptionError(
                f"negative epistemic weight {worst:.3g} for state {label!r}"
            )
    support = weights > tol
    ontic_dim = int(support.sum())
    epistemic = {
        label: weights[support] * vec[support] for label, vec in iota.items()
    }
    responses = {
        label: vec[support] / weights[support] for label, vec in kappa.items()
    }
    return NoncontextualModel(
        ontic_dim=ontic_dim,
        epistemic_states=epistemic,
        response_functions=responses,
    )


def min_noise_for_embedding(
    fragment: GptFragment,
    noise: NoiseMap,
    tol: float | None = None,
) -> EmbeddingSolution:
    """Least noise weight at which the fragment becomes simplex-embeddable.

    Infeasibility of the LP means no ``r`` in [0, 1] works; with a built-in
    noise map that signals a bug (full noise always embeds), with custom
    noise it yields the NoEmbeddingEvenAtFullNoise status.
    """
    tol = resolve_tol(tol)
    maps = compute_inclusion_maps(fragment, tol)
    h_states, h_effects = fragment_facets(fragment, maps, tol)
    lp = assemble_embedding_lp(fragment, maps, h_states, h_effects, noise, tol)
    solution = solve(lp, tol)
    if solution.status is LpStatus.INFEASIBLE:
        if noise.kind is NoiseKind.CUSTOM:
            return EmbeddingSolution(
                r_min=float("nan"),
                sigma=None,
                status=EmbeddingStatus.NO_EMBEDDING_EVEN_AT_FULL_NOISE,
                model=None,
            )
        raise InternalConsistencyError(
            "embedding LP infeasible with a built-in noise map; the fully "
            "noisy fragment must always embed"
        )
    if solution.status is not LpStatus.OPTIMAL:
        raise InternalConsistencyError(
            f"embedding LP reported {solution.status.value}; the objective is bounded"
        )
    r_min = min(1.0, max(0.0, float(solution.x[0])))
    n_eff = h_effects.normals.shape[0]
    n_sta = h_states.normals.shape[0]
    sigma = solution.x[1:].reshape(n_eff, n_sta)
    status = (
        EmbeddingStatus.ALREADY_EMBEDDABLE
        if r_min <= tol
        else EmbeddingStatus.ROBUST_UP_TO
    )
    model = extract_model(
        fragment, maps, h_states, h_effects, sigma, r_min, noise, tol
    )
    return EmbeddingSolution(r_min=r_min, sigma=sigma, status=status, model=model)


def is_simplex_embeddable(fragment: GptFragment, tol: float | None = None) -> bool:
    """True when the fragment embeds with no added noise (r_min below ``tol``)."""
    tol = resolve_tol(tol)
    solution = min_noise_for_embedding(fragment, NoiseMap.depolarizing(fragment, tol), tol)
    return solution.status is EmbeddingStatus.ALREADY_EMBEDDABLE


def embedding_feasible_at_noise(
    fragment: GptFragment,
    noise: NoiseMap,
    r: float,
    tol: float | None = None,
) -> bool:
    """Feasibility of the embedding constraints at a pinned noise weight ``r``."""
    tol = resolve_tol(tol)
    maps = compute_inclusion_maps(fragment, tol)
    h_states, h_effects = fragment_facets(fragment, maps, tol)
    lp = assemble_embedding_lp(fragment, maps, h_states, h_effects, noise, tol)
    pinned = LinearProgram(
        objective=np.zeros(lp.n_vars - 1),
        constraint_matrix=lp.constraint_matrix[:, 1:],
        rhs=lp.rhs - lp.constraint_matrix[:, 0] * float(r),
    )
    return solve(pinned, tol).status is LpStatus.OPTIMAL


def noisy_probability(
    fragment: GptFragment,
    maps: InclusionMaps,
    noise: NoiseMap,
    r: float,
    effect_label: str,
    state_label: str,
) -> float:
    """Pairing of an effect and a state at noise weight ``r``, via the LP's convention."""
    effect = maps.effect_basis @ maps.effect_coords[effect_label]
    state = maps.state_basis @ maps.state_coords[state_label]
    return float((1.0 - r) * (effect @ state) + r * (effect @ noise.matrix @ state))


def model_violations(
    model: NoncontextualModel,
    fragment: GptFragment,
    noise: NoiseMap,
    r: float,
    tol: float | None = None,
) -> list[str]:
    """Check every model invariant against the ``r``-noisy fragment.

    Returns human-readable problems: negative or unnormalized epistemic
    states, response values outside [0, 1], wrong unit/zero responses, or
    statistics that fail to reproduce the noisy probabilities within 1e-7.
    """
    tol = resolve_tol(tol)
    maps = compute_inclusion_maps(fragment, tol)
    problems: list[str] = []
    for label, mu in model.epistemic_states.items():
        if mu.shape != (model.ontic_dim,):
            problems.append(f"mu[{label}] has length {mu.shape[0]}")
            continue
        if float(np.min(mu, initial=0.0)) < -1e-9:
            problems.append(f"mu[{label}] has a negative entry {float(np.min(mu)):.3g}")
        total = float(np.sum(mu))
        if abs(total - 1.0) > 1e-7:
            problems.append(f"mu[{label}] sums to {total:.9g}")
    for label, xi in model.response_functions.items():
        if xi.shape != (model.ontic_dim,):
            problems.append(f"xi[{label}] has length {xi.shape[0]}")
            continue
        if xi.size and (float(np.min(xi)) < -1e-9 or float(np.max(xi)) > 1.0 + 1e-9):
            problems.append(f"xi[{label}] leaves [0, 1]")
    xi_unit = model.response_functions.get(fragment.unit_label)
    if xi_unit is not None and xi_unit.size and float(np.max(np.abs(xi_unit - 1.0))) > 1e-7:
        problems.append("unit response is not all-ones on the supported ontic states")
    xi_zero = model.response_functions.get(fragment.zero_label)
    if xi_zero is not None and xi_zero.size and float(np.max(np.abs(xi_zero))) > 1e-7:
        problems.append("zero response is not zero")
    for elabel, xi in model.response_functions.items():
        if xi.shape != (model.ontic_dim,):
            continue
        for slabel, mu in model.epistemic_states.items():
            if mu.shape != (model.ontic_dim,):
                continue
            predicted = float(xi @ mu)
            expected = noisy_probability(fragment, maps, noise, r, elabel, slabel)
            if abs(predicted - expected) > 1e-7:
                problems.append(
                    f"p({elabel}|{slabel}): model gives {predicted:.9g}, "
                    f"noisy fragment gives {expected:.9g}"
                )
    return problems
