"""The four-preparation discrimination scenario family and its closed forms.

Builds the ZX-plane fragment with preparations psi, psibar, phi, phibar tilted
by ``theta`` from the Z axis and a discriminating measurement that may be
rotated by ``alpha`` toward X and pre-depolarized by ``p``.  Every analytic
quantity used to cross-check the linear program lives here: the robustness
curves for depolarizing and dephasing noise, the (s, c, epsilon) data-table
parameterization and its noncontextuality inequality, the coherence
quantifier, and the explicit ontic model for incoherent inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .embedding import NoiseMap, NoncontextualModel
from .errors import NotParameterizableError
from .fragment import GptFragment, apply_noise_to_effects, find_duplicates
from .tolerance import resolve_tol

MEASUREMENT_ROWS = ("M_phi", "M_psi", "M_g")
PREPARATION_COLS = ("P_phi", "P_psi", "P_phibar", "P_psibar")

_ROW_EFFECT_LABELS = ("phi", "psi", "Egphi")
_COL_STATE_LABELS = ("phi", "psi", "phibar", "psibar")

_THETA_GUARD = 1e-6


@dataclass(frozen=True)
class MesdParams:
    """Scenario parameters: state tilt, measurement rotation, impurity, axis.

    ``theta`` is the angle between the prepared states and the Z axis;
    ``alpha`` rotates the discriminating measurement from Z toward X (0
    recovers the original scenario, pi/2 aligns it with X); ``p`` depolarizes
    that measurement at build time; ``eta`` records the dephasing axis used
    by noise built from these parameters (pi/2 is the Z axis).
    """

    theta: float
    alpha: float = 0.0
    p: float = 0.0
    eta: float = math.pi / 2

    def __post_init__(self):
        for name in ("theta", "alpha", "p", "eta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


def build_mesd(params: MesdParams) -> GptFragment:
    """Concrete fragment for the scenario parameters.

    States are ``(1, ±sin(theta), ±cos(theta)) / sqrt(2)``; effects are the
    four state projectors plus the two discriminating effects at angle
    ``alpha`` (mixed toward the unit by ``p`` when positive), the zero effect
    and the unit.  Coinciding elements are kept under their own labels but
    reported with a warning, since downstream cone processing deduplicates.
    """
    rt2 = math.sqrt(2.0)
    st, ct = math.sin(params.theta), math.cos(params.theta)
    sa, ca = math.sin(params.alpha), math.cos(params.alpha)
    states = {
        "psi": np.array([1.0, st, ct]) / rt2,
        "psibar": np.array([1.0, -st, -ct]) / rt2,
        "phi": np.array([1.0, st, -ct]) / rt2,
        "phibar": np.array([1.0, -st, ct]) / rt2,
    }
    unit = np.array([rt2, 0.0, 0.0])
    eg_psi = np.array([1.0, sa, ca]) / rt2
    eg_phi = np.array([1.0, -sa, -ca]) / rt2
    if params.p > 0.0:
        eg_psi = (1.0 - params.p) * eg_psi + (params.p / 2.0) * unit
        eg_phi = (1.0 - params.p) * eg_phi + (params.p / 2.0) * unit
    effects = {
        "psi": states["psi"].copy(),
        "psibar": states["psibar"].copy(),
        "phi": states["phi"].copy(),
        "phibar": states["phibar"].copy(),
        "Egpsi": eg_psi,
        "Egphi": eg_phi,
        "zero": np.zeros(3),
        "unit": unit,
    }
    fragment = GptFragment(
        ambient_dim=3,
        states=states,
        effects=effects,
        unit_label="unit",
        zero_label="zero",
        maxmix=np.array([1.0 / rt2, 0.0, 0.0]),
    )
    tol = resolve_tol(None)
    coincide = find_duplicates(fragment.states, tol) + find_duplicates(
        {l: v for l, v in fragment.effects.items() if l != "zero"}, tol
    )
    if coincide:
        warnings.warn(
            "coinciding scenario elements: "
            + ", ".join(f"{a} = {b}" for a, b in coincide),
            stacklevel=2,
        )
    return fragment


def dephasing_matrix(eta: float) -> np.ndarray:
    """Dephasing along the axis at angle ``eta`` in the ZX plane (3x3 matrix)."""
    return NoiseMap.dephasing(eta).matrix


def depolarizing_matrix(fragment: GptFragment) -> np.ndarray:
    """Rank-one map sending every normalized state to the maximally mixed state."""
    return NoiseMap.depolarizing(fragment).matrix


def r_depol_min_analytic(theta: float) -> float:
    """Closed-form robustness to depolarization, 1 - 1/(sin^2 + cos)."""
    theta = float(theta)
    return 1.0 - 1.0 / (math.sin(theta) ** 2 + math.cos(theta))


def r_deph_min_analytic(theta: float) -> float:
    """Closed-form robustness to Z dephasing, 1 - (1 - cos)/sin^2.

    Below theta = 1e-6 the 0/0 form is replaced by its limit value 0.5.
    """
    theta = float(theta)
    if theta < _THETA_GUARD:
        return 0.5
    return 1.0 - (1.0 - math.cos(theta)) / math.sin(theta) ** 2


def p_threshold(theta: float) -> float:
    """Largest measurement impurity still allowing a contextuality proof."""
    return 1.0 - math.cos(float(theta))


def coherence_bound(p: float) -> float:
    """Coherence the preparations must exceed to survive impurity ``p``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return math.sqrt(p * (2.0 - p))


def coherence(vector) -> float:
    """Trace distance to the Z-dephased counterpart: sqrt(2) |X component|."""
    vec = np.asarray(vector, dtype=float).reshape(-1)
    if vec.shape[0] != 3:
        raise ValueError("coherence is defined on the 3-dimensional ZX representation")
    return math.sqrt(2.0) * abs(float(vec[1]))


@dataclass(frozen=True)
class DataTable:
    """3x4 outcome-0 statistics, rows M_phi/M_psi/M_g, columns P_phi/P_psi/P_phibar/P_psibar."""

    probabilities: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if probs.shape != (3, 4):
            raise ValueError(f"data table must be 3x4, got {probs.shape}")
        if float(np.min(probs)) < -1e-9 or float(np.max(probs)) > 1.0 + 1e-9:
            raise ValueError("data table entries must lie in [0, 1]")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)


def data_table(fragment: GptFragment) -> DataTable:
    """Born-rule pairings of the scenario fragment in the standard layout."""
    try:
        rows = [fragment.effects[label] for label in _ROW_EFFECT_LABELS]
        cols = [fragment.states[label] for label in _COL_STATE_LABELS]
    except KeyError as exc:
        raise KeyError(
            f"fragment lacks the scenario label {exc.args[0]!r}"
        ) from exc
    probs = np.array([[float(e @ s) for s in cols] for e in rows])
    return DataTable(probabilities=probs)


@dataclass(frozen=True)
class SceParameters:
    """(s, c, epsilon) with the residual against the full symmetry pattern."""

    s: float
    c: float
    epsilon: float
    residual: float

    def __iter__(self):
        return iter((self.s, self.c, self.epsilon))


def extract_sce(table: DataTable, tol: float | None = None) -> SceParameters:
    """Read (s, c, epsilon) off a data table and verify the symmetry pattern.

    Tables outside the four-preparation symmetry family (residual beyond
    ``tol``) raise :class:`NotParameterizableError`.
    """
    tol = resolve_tol(tol)
    probs = table.probabilities
    s = float(probs[2, 0])
    c = float(probs[1, 0])
    epsilon = float(probs[0, 2])
    pattern = np.array(
        [
            [1.0 - epsilon, c, epsilon, 1.0 - c],
            [c, 1.0 - epsilon, 1.0 - c, epsilon],
            [s, 1.0 - s, 1.0 - s, s],
        ]
    )
    residual = float(np.max(np.abs(probs - pattern)))
    if residual > tol:
        raise NotParameterizableError(
            f"table deviates from the symmetry pattern by {residual:.3g}"
        )
    return SceParameters(s=s, c=c, epsilon=epsilon, residual=residual)


def nc_inequality_holds(s: float, c: float, epsilon: float) -> bool:
    """Noncontextual-model compatibility: s <= 1 - (c - epsilon)/2."""
    return float(s) <= 1.0 - (float(c) - float(epsilon)) / 2.0


def incoherent_model(states, effects, tol: float | None = None) -> NoncontextualModel:
    """Explicit two-ontic-state model for Z-diagonal states.

    ``states`` and ``effects`` are label-to-vector mappings in the ZX
    representation; every state must have X component at most ``tol`` in
    magnitude.  Epistemic weights and responses are the diagonal entries of
    the corresponding operators, which reproduce all pairings exactly.
    """
    tol = resolve_tol(tol)
    rt2 = math.sqrt(2.0)
    epistemic: dict[str, np.ndarray] = {}
    responses: dict[str, np.ndarray] = {}
    for label, vec in states.items():
        v = np.asarray(vec, dtype=float).reshape(-1)
        if v.shape[0] != 3:
            raise ValueError(f"state {label!r} is not in the 3-dimensional representation")
        if abs(float(v[1])) > tol:
            raise ValueError(
                f"state {label!r} has X component {float(v[1]):.3g}; "
                "the incoherent model needs Z-diagonal states"
            )
        epistemic[label] = np.array([(v[0] + v[2]) / rt2, (v[0] - v[2]) / rt2])
    for label, vec in effects.items():
        e = np.asarray(vec, dtype=float).reshape(-1)
        if e.shape[0] != 3:
            raise ValueError(f"effect {label!r} is not in the 3-dimensional representation")
        responses[label] = np.array([(e[0] + e[2]) / rt2, (e[0] - e[2]) / rt2])
    return NoncontextualModel(
        ontic_dim=2, epistemic_states=epistemic, response_functions=responses
    )


def dephase_fragment(
    fragment: GptFragment,
    eta: float = math.pi / 2,
    r: float = 1.0,
) -> GptFragment:
    """Fragment with the ``eta``-axis dephasing applied to states and effects."""
    noise = NoiseMap.dephasing(eta)
    noisy = apply_noise_to_effects(fragment, noise, r)
    states = {
        label: (1.0 - r) * vec + r * (noise.matrix @ vec)
        for label, vec in fragment.states.items()
    }
    return GptFragment(
        ambient_dim=fragment.ambient_dim,
        states=states,
        effects=dict(noisy.effects),
        unit_label=fragment.unit_label,
        zero_label=fragment.zero_label,
        maxmix=fragment.maxmix,
    )
