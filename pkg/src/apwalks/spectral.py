"""Eigendecomposition of the transport Hamiltonian and degeneracy grouping.

Every transport quantity downstream is a function of the eigenvalues and an
orthonormal eigenbasis of the (real symmetric) Laplacian, so this module is
the single place the matrix is diagonalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NumericError(RuntimeError):
    """A linear-algebra routine failed or produced out-of-tolerance output."""


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues paired with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def order(self) -> int:
        return self.eigenvalues.shape[0]

    def check_node(self, node: int) -> None:
        if not isinstance(node, (int, np.integer)) or isinstance(node, bool):
            raise ValueError(f"node index must be an integer, got {node!r}")
        if not 1 <= node <= self.order:
            raise ValueError(f"node index {node} out of range 1..{self.order}")


@dataclass(frozen=True)
class EigenspaceGrouping:
    """Half-open index ranges over the eigenvalues, one per eigenspace."""

    groups: tuple[tuple[int, int], ...]
    tolerance: float

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(stop - start for start, stop in self.groups)


def eigendecompose(h: np.ndarray) -> Spectrum:
    """Diagonalize a real symmetric matrix.

    Output is deterministic for identical input: eigenvalues ascending,
    eigenvector columns orthonormal, both arrays frozen read-only.

    Raises:
        ValueError: if ``h`` is not square and exactly symmetric.
        NumericError: if the eigensolver fails to converge.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.array_equal(h, h.T):
        raise ValueError("matrix is not symmetric")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"eigendecomposition failed for matrix of order {h.shape[0]}: {exc}"
        ) from exc
    eigenvalues.flags.writeable = False
    eigenvectors.flags.writeable = False
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def default_degeneracy_tolerance(s: Spectrum) -> float:
    """Scale-aware gap tolerance separating structural degeneracies."""
    return 1e-8 * max(1.0, float(abs(s.eigenvalues[-1])))


def group_degenerate(s: Spectrum, tol: float) -> EigenspaceGrouping:
    """Cluster adjacent eigenvalues whose gap is at most ``tol``.

    Greedy left-to-right on the ascending eigenvalues: a new group starts
    whenever the gap to the previous eigenvalue exceeds the tolerance.

    Raises:
        ValueError: if ``tol`` is not positive.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    values = s.eigenvalues
    if np.any(np.diff(values) < 0):
        raise ValueError("eigenvalues must be ascending")
    groups: list[tuple[int, int]] = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            groups.append((start, i))
            start = i
    groups.append((start, len(values)))
    return EigenspaceGrouping(groups=tuple(groups), tolerance=tol)
