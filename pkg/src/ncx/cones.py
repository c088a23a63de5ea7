"""Facet enumeration for finitely generated positive cones.

The main routine runs the double description method in the coordinates of the
generator span (directions orthogonal to every generator are projected out
first, so the cone is full-dimensional where the facets are computed).  A
cross-product brute force for three-dimensional spans serves as an
independent oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConeError, SpanDimensionError
from .linalg import lexsorted_rows, orthonormal_basis, rank_of
from .tolerance import resolve_tol


@dataclass(frozen=True)
class ConeFacets:
    """Facet inequalities of a finitely generated cone.

    ``normals`` has one unit-norm row per facet, expressed in the span-basis
    coordinates of the generators; ``v`` lies in the cone exactly when
    ``normals @ v >= 0`` entrywise (for ``v`` in the span).  ``span_basis``
    maps ambient vectors into those coordinates via ``span_basis.T @ v``; it
    is the identity whenever the generators already span their ambient space.
    """

    normals: np.ndarray
    generator_span_dim: int
    span_basis: np.ndarray

    def span_coords(self, v) -> np.ndarray:
        return self.span_basis.T @ np.asarray(v, dtype=float)


def _prepared_generators(generators, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero deduplicated generators in span coordinates, plus the span basis."""
    gens = np.atleast_2d(np.asarray(generators, dtype=float))
    gens = gens[np.linalg.norm(gens, axis=1) > tol]
    if gens.shape[0] == 0:
        raise DegenerateConeError("all generators are zero")
    kept: list[np.ndarray] = []
    for row in gens:
        if not any(float(np.max(np.abs(row - w))) <= tol for w in kept):
            kept.append(row)
    gens = np.array(kept)
    dim = gens.shape[1]
    if rank_of(gens, tol) == dim:
        basis = np.eye(dim)
        coords = gens
    else:
        basis = orthonormal_basis(gens, tol)
        coords = gens @ basis
    return lexsorted_rows(coords), basis


def _greedy_independent_rows(rows: np.ndarray, tol: float) -> list[int]:
    picked: list[int] = []
    for i in range(rows.shape[0]):
        if rank_of(rows[picked + [i]], tol) > len(picked):
            picked.append(i)
        if len(picked) == rows.shape[1]:
            break
    return picked


def _dedupe_rays(rays: list[np.ndarray], tol: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for ray in rays:
        if not any(float(np.max(np.abs(ray - w))) <= tol for w in kept):
            kept.append(ray)
    return kept


def _double_description(coords: np.ndarray, tol: float) -> np.ndarray:
    """Extreme rays of the dual cone {h : coords @ h >= 0} (rows normalized)."""
    norms = np.linalg.norm(coords, axis=1)
    gens = coords / norms[:, None]
    n, k = gens.shape

    init = _greedy_independent_rows(gens, tol)
    inv = np.linalg.inv(gens[init])
    rays = [inv[:, j] / np.linalg.norm(inv[:, j]) for j in range(k)]
    processed = gens[init]

    for i in range(n):
        if i in init:
            continue
        g = gens[i]
        scores = np.array([float(g @ r) for r in rays])
        plus = [j for j, s in enumerate(scores) if s > tol]
        minus = [j for j, s in enumerate(scores) if s < -tol]
        if minus:
            keep = [rays[j] for j, s in enumerate(scores) if s >= -tol]
            fresh: list[np.ndarray] = []
            activity = np.abs(processed @ np.array(rays).T) <= tol  # constraints x rays
            for p in plus:
                for m in minus:
                    common = activity[:, p] & activity[:, m]
                    if int(common.sum()) < k - 2:
                        continue
                    if rank_of(processed[common], tol) != k - 2:
                        continue  # adjacency by rank: the pair spans a 2-face
                    new = scores[p] * rays[m] - scores[m] * rays[p]
                    norm = np.linalg.norm(new)
                    if norm > tol:
                        fresh.append(new / norm)
            rays = _dedupe_rays(keep + fresh, tol)
        processed = np.vstack([processed, g[None, :]])
    if not rays:
        return np.zeros((0, k))
    return np.array(rays)


def enumerate_facets(generators, tol: float | None = None) -> ConeFacets:
    """Facet matrix H of the cone generated by ``generators``.

    For every ``v`` in the generator span, ``H @ v >= 0`` entrywise holds
    exactly when ``v`` is a nonnegative combination of the generators.  Uses
    double description with lexicographic generator insertion; rows come back
    unit-norm and lexicographically sorted.
    """
    tol = resolve_tol(tol)
    coords, basis = _prepared_generators(generators, tol)
    k = coords.shape[1]
    if k == 1:
        signs = coords[:, 0]
        has_pos = bool(np.any(signs > tol))
        has_neg = bool(np.any(signs < -tol))
        if has_pos and has_neg:
            normals = np.zeros((0, 1))  # cone equals the span: no inequality
        else:
            normals = np.array([[1.0 if has_pos else -1.0]])
    else:
        normals = lexsorted_rows(_double_description(coords, tol))
    return ConeFacets(normals=normals, generator_span_dim=k, span_basis=basis)


def enumerate_facets_bruteforce_3d(generators, tol: float | None = None) -> ConeFacets:
    """Independent facet oracle for generators spanning a 3-dimensional space.

    Candidate normals are the normalized cross products of generator pairs,
    kept (with the appropriate sign) iff every generator lies on their
    nonnegative side.
    """
    tol = resolve_tol(tol)
    coords, basis = _prepared_generators(generators, tol)
    n, k = coords.shape
    if k != 3:
        raise SpanDimensionError(f"generator span has dimension {k}, expected 3")
    found: list[np.ndarray] = []
    for i in range(n):
        for j in range(i + 1, n):
            normal = np.cross(coords[i], coords[j])
            norm = np.linalg.norm(normal)
            if norm <= tol:
                continue
            normal = normal / norm
            side = coords @ normal
            if np.all(side >= -tol):
                found.append(normal)
            elif np.all(side <= tol):
                found.append(-normal)
    normals = lexsorted_rows(np.array(_dedupe_rays(found, tol))) if found else np.zeros((0, 3))
    return ConeFacets(normals=normals, generator_span_dim=3, span_basis=basis)


def cone_contains(facets: ConeFacets, v, tol: float | None = None) -> bool:
    """Membership test ``H @ v >= -tol`` for ``v`` in span coordinates."""
    tol = resolve_tol(tol)
    vec = np.asarray(v, dtype=float).reshape(-1)
    if vec.shape[0] != facets.generator_span_dim:
        raise SpanDimensionError(
            f"vector has dimension {vec.shape[0]}, expected {facets.generator_span_dim}"
        )
    if facets.normals.shape[0] == 0:
        return True
    return bool(np.all(facets.normals @ vec >= -tol))
