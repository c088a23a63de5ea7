"""Accessible GPT fragments: validation, inclusion maps, probabilities, noise.

A fragment is a finite collection of labeled state vectors and labeled effect
vectors in a common ambient space, together with the unit effect, the zero
effect and a designated maximally mixed state.  Probabilities are plain inner
products between effect and state vectors.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidNoiseError, StructureError
from .linalg import affine_span_contains_origin, orthonormal_basis
from .tolerance import resolve_tol


def _frozen_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1).copy()
    arr.setflags(write=False)
    return arr


@dataclass
class GptFragment:
    """Labeled state and effect vectors with unit, zero and maximally mixed state.

    ``unit_label`` and ``zero_label`` point into ``effects``, so the unit and
    zero effects are members of the effect list by construction.  Vectors are
    stored read-only in the raw ambient basis; fragments are immutable after
    construction and safe to share across threads.

    Structural problems (empty state list, dimension mismatches, missing
    labels) raise :class:`StructureError` at construction time; numeric
    invariants are checked separately by :func:`validate_fragment`.
    """

    ambient_dim: int
    states: dict[str, np.ndarray]
    effects: dict[str, np.ndarray]
    unit_label: str
    zero_label: str
    maxmix: np.ndarray
    _maps_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.ambient_dim = int(self.ambient_dim)
        if self.ambient_dim <= 0:
            raise StructureError("ambient_dim must be a positive integer")
        self.states = {str(k): _frozen_vector(v) for k, v in self.states.items()}
        self.effects = {str(k): _frozen_vector(v) for k, v in self.effects.items()}
        self.maxmix = _frozen_vector(self.maxmix)
        if not self.states:
            raise StructureError("fragment has no states")
        for kind, table in (("state", self.states), ("effect", self.effects)):
            for label, vec in table.items():
                if vec.shape != (self.ambient_dim,):
                    raise StructureError(
                        f"{kind} {label!r} has dimension {vec.shape[0]}, "
                        f"expected {self.ambient_dim}"
                    )
        if self.maxmix.shape != (self.ambient_dim,):
            raise StructureError(
                f"maxmix has dimension {self.maxmix.shape[0]}, expected {self.ambient_dim}"
            )
        for label in (self.unit_label, self.zero_label):
            if label not in self.effects:
                raise StructureError(f"effect label {label!r} missing from effects")

    @property
    def unit(self) -> np.ndarray:
        return self.effects[self.unit_label]

    @property
    def zero(self) -> np.ndarray:
        return self.effects[self.zero_label]


@dataclass(frozen=True)
class Violation:
    """One violated invariant: which check, which element, observed value."""

    check: str
    label: str
    value: float

    def __str__(self) -> str:
        return f"{self.check}[{self.label}] = {self.value:.6g}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_fragment(fragment: GptFragment, tol: float | None = None) -> ValidationReport:
    """Check every numeric fragment invariant at tolerance ``tol``.

    Returns a report listing one entry per violated invariant with the
    offending label and the observed value; the report is empty exactly when
    the fragment is valid.  ``0 not in AffSpan(states)`` is reported as a
    warning only, never as a violation.
    """
    tol = resolve_tol(tol)
    violations: list[Violation] = []
    finite = {}
    for kind, table in (("state", fragment.states), ("effect", fragment.effects)):
        for label, vec in table.items():
            good = bool(np.all(np.isfinite(vec)))
            finite[(kind, label)] = good
            if not good:
                violations.append(Violation("finite-entries", f"{kind}:{label}", float("nan")))
    if not np.all(np.isfinite(fragment.maxmix)):
        violations.append(Violation("finite-entries", "maxmix", float("nan")))
        return ValidationReport(tuple(violations))

    unit = fragment.unit
    zero = fragment.zero
    if finite[("effect", fragment.zero_label)]:
        zero_norm = float(np.max(np.abs(zero))) if zero.size else 0.0
        if zero_norm > tol:
            violations.append(Violation("zero-is-origin", fragment.zero_label, zero_norm))
    unit_ok = finite[("effect", fragment.unit_label)]

    for label, state in fragment.states.items():
        if not finite[("state", label)]:
            continue
        if unit_ok:
            pairing = float(unit @ state)
            if abs(pairing - 1.0) > tol:
                violations.append(Violation("unit-pairing", label, pairing))
        for elabel, effect in fragment.effects.items():
            if not finite[("effect", elabel)]:
                continue
            p = float(effect @ state)
            if p < -tol or p > 1.0 + tol:
                violations.append(Violation("pairing-range", f"{elabel}|{label}", p))
    if unit_ok:
        mm = float(unit @ fragment.maxmix)
        if abs(mm - 1.0) > tol:
            violations.append(Violation("maxmix-pairing", "maxmix", mm))

    report_warnings: list[str] = []
    finite_states = [v for l, v in fragment.states.items() if finite[("state", l)]]
    if finite_states and affine_span_contains_origin(np.array(finite_states), tol):
        report_warnings.append("origin lies in the affine span of the states")
    return ValidationReport(tuple(violations), tuple(report_warnings))


@dataclass(frozen=True)
class InclusionMaps:
    """Orthonormal span bases and coordinates linking a fragment to its common space.

    ``state_basis`` (d x k_states) and ``effect_basis`` (d x k_effects) have
    orthonormal columns spanning the state span and the effect span; the
    common space is their sum, of dimension ``common_dim``.  Coordinates
    reconstruct the raw vectors exactly: ``state_basis @ state_coords[label]``
    is the stored state vector, and inner products through the maps reproduce
    the raw probability rule.
    """

    state_basis: np.ndarray
    effect_basis: np.ndarray
    common_dim: int
    state_coords: dict[str, np.ndarray]
    effect_coords: dict[str, np.ndarray]


def compute_inclusion_maps(fragment: GptFragment, tol: float | None = None) -> InclusionMaps:
    """Inclusion maps of ``fragment`` into the smallest common space.

    Cached on the fragment per tolerance value; the computation is a pivoted
    orthonormalization of the state rows, the effect rows and their union.
    """
    tol = resolve_tol(tol)
    cached = fragment._maps_cache.get(tol)
    if cached is not None:
        return cached
    state_rows = np.array(list(fragment.states.values()))
    effect_rows = np.array(list(fragment.effects.values()))
    state_basis = orthonormal_basis(state_rows, tol)
    effect_basis = orthonormal_basis(effect_rows, tol)
    common_dim = orthonormal_basis(np.vstack([state_rows, effect_rows]), tol).shape[1]
    maps = InclusionMaps(
        state_basis=state_basis,
        effect_basis=effect_basis,
        common_dim=common_dim,
        state_coords={l: state_basis.T @ v for l, v in fragment.states.items()},
        effect_coords={l: effect_basis.T @ v for l, v in fragment.effects.items()},
    )
    fragment._maps_cache[tol] = maps
    return maps


def pair_probability(
    fragment: GptFragment,
    maps: InclusionMaps,
    effect_label: str,
    state_label: str,
) -> float:
    """Probability of ``effect_label`` on ``state_label`` through the inclusion maps."""
    if effect_label not in maps.effect_coords:
        raise KeyError(f"unknown effect label {effect_label!r}")
    if state_label not in maps.state_coords:
        raise KeyError(f"unknown state label {state_label!r}")
    effect = maps.effect_basis @ maps.effect_coords[effect_label]
    state = maps.state_basis @ maps.state_coords[state_label]
    return float(effect @ state)


def apply_noise_to_effects(
    fragment: GptFragment,
    noise,
    r: float,
    tol: float | None = None,
) -> GptFragment:
    """Replace every effect by ``(1-r)*e + r*(N @ e)`` for noise matrix ``N``.

    ``noise`` may be a NoiseMap or a bare (d, d) matrix.  The unit effect must
    be a fixed point of ``N`` (otherwise the noisy unit would break
    normalization) and ``r`` is a convex mixing weight in [0, 1].
    """
    tol = resolve_tol(tol)
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"noise weight r must lie in [0, 1], got {r}")
    matrix = np.asarray(getattr(noise, "matrix", noise), dtype=float)
    if matrix.shape != (fragment.ambient_dim, fragment.ambient_dim):
        raise InvalidNoiseError(
            f"noise matrix has shape {matrix.shape}, expected "
            f"({fragment.ambient_dim}, {fragment.ambient_dim})"
        )
    unit = fragment.unit
    drift = float(np.max(np.abs(matrix @ unit - unit)))
    if drift > tol:
        raise InvalidNoiseError(f"noise map moves the unit effect by {drift:.3g}")
    noisy = {
        label: (1.0 - r) * vec + r * (matrix @ vec)
        for label, vec in fragment.effects.items()
    }
    return GptFragment(
        ambient_dim=fragment.ambient_dim,
        states=dict(fragment.states),
        effects=noisy,
        unit_label=fragment.unit_label,
        zero_label=fragment.zero_label,
        maxmix=fragment.maxmix,
    )


def find_duplicates(vectors: dict[str, np.ndarray], tol: float) -> list[tuple[str, str]]:
    """Pairs (duplicate_label, first_label) of coinciding vectors, within ``tol``."""
    kept: dict[str, np.ndarray] = {}
    pairs: list[tuple[str, str]] = []
    for label, vec in vectors.items():
        match = next(
            (k for k, w in kept.items() if float(np.max(np.abs(vec - w))) <= tol), None
        )
        if match is None:
            kept[label] = vec
        else:
            pairs.append((label, match))
    return pairs


def dedupe_vectors(vectors: dict[str, np.ndarray], tol: float) -> dict[str, np.ndarray]:
    """Drop entries duplicating an earlier vector within ``tol``, with a warning."""
    pairs = find_duplicates(vectors, tol)
    if not pairs:
        return dict(vectors)
    dropped = {dup for dup, _ in pairs}
    warnings.warn(
        "dropped duplicate vectors: "
        + ", ".join(f"{dup} (= {first})" for dup, first in pairs),
        stacklevel=2,
    )
    return {l: v for l, v in vectors.items() if l not in dropped}


def _fmt_number(x: float) -> str:
    # 17 significant digits: exact float64 round trip
    return format(float(x), ".16e")


def _fmt_vector(vec: np.ndarray) -> str:
    return "[" + ", ".join(_fmt_number(x) for x in vec) + "]"


def _fmt_table(table: dict[str, np.ndarray], indent: str) -> str:
    body = ",\n".join(
        f"{indent}{json.dumps(label)}: {_fmt_vector(vec)}" for label, vec in table.items()
    )
    return "{\n" + body + "\n" + indent[:-2] + "}"


def fragment_to_json(fragment: GptFragment) -> str:
    """Serialize a fragment to its JSON interchange form (17-digit numbers)."""
    parts = [
        f'  "ambient_dim": {fragment.ambient_dim}',
        f'  "states": {_fmt_table(fragment.states, "    ")}',
        f'  "effects": {_fmt_table(fragment.effects, "    ")}',
        f'  "unit": {json.dumps(fragment.unit_label)}',
        f'  "zero": {json.dumps(fragment.zero_label)}',
        f'  "maxmix": {_fmt_vector(fragment.maxmix)}',
    ]
    return "{\n" + ",\n".join(parts) + "\n}\n"


def fragment_from_json(text: str) -> GptFragment:
    """Parse the JSON interchange form produced by :func:`fragment_to_json`."""
    data = json.loads(text)
    try:
        return GptFragment(
            ambient_dim=data["ambient_dim"],
            states=data["states"],
            effects=data["effects"],
            unit_label=data["unit"],
            zero_label=data["zero"],
            maxmix=data["maxmix"],
        )
    except KeyError as exc:
        raise StructureError(f"fragment JSON is missing key {exc.args[0]!r}") from exc
