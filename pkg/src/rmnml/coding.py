"""Prefix-code demonstration on a discretized geodesic ball (D = 2).

A polar grid partitions the ball; each cell S gets the integer code-length

    l_S = ceil( sup_{x in S} (-log2 p(x)) - log2 vol(S) )

for a density p on the ball.  Such lengths always satisfy the Kraft
inequality (so a prefix code with these lengths exists), and the expected
code-length of any uniquely decodable code over the partition is bounded
below by E_S[ inf_{x in S} (-log2 p(x)) - log2 vol(S) ].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Cell extrema are approximated on this many points per axis.
SUBGRID = 5


@dataclass(frozen=True)
class Partition:
    """Polar-grid partition of a geodesic ball in H^2."""

    representatives: np.ndarray   # (m, 3) Lorentz coordinates of cell centers
    volumes: np.ndarray           # (m,)
    r_ranges: np.ndarray          # (m, 2)
    angle_ranges: np.ndarray      # (m, 2)
    dim: int = 2

    def __len__(self) -> int:
        return self.volumes.size


def _lorentz_of_polar(r: np.ndarray, theta: np.ndarray) -> np.ndarray:
    out = np.empty(r.shape + (3,))
    out[..., 0] = np.cosh(r)
    out[..., 1] = np.sinh(r) * np.cos(theta)
    out[..., 2] = np.sinh(r) * np.sin(theta)
    return out


def partition_ball(radius: float, n_r: int, n_angle: int) -> Partition:
    """Split the radius-``radius`` ball of H^2 into an n_r x n_angle polar grid.

    Cell volumes are exact: delta_theta * (cosh r_hi - cosh r_lo), and they
    telescope to the full ball volume.
    """
    if n_r < 1 or n_angle < 1:
        raise ValueError("n_r and n_angle must be >= 1")
    if not radius > 0:
        raise ValueError("radius must be positive")
    r_edges = np.linspace(0.0, radius, n_r + 1)
    t_edges = np.linspace(0.0, 2.0 * math.pi, n_angle + 1)
    r_lo = np.repeat(r_edges[:-1], n_angle)
    r_hi = np.repeat(r_edges[1:], n_angle)
    t_lo = np.tile(t_edges[:-1], n_r)
    t_hi = np.tile(t_edges[1:], n_r)
    dtheta = t_hi - t_lo
    volumes = dtheta * (np.cosh(r_hi) - np.cosh(r_lo))
    reps = _lorentz_of_polar(0.5 * (r_lo + r_hi), 0.5 * (t_lo + t_hi))
    return Partition(
        representatives=reps,
        volumes=volumes,
        r_ranges=np.stack([r_lo, r_hi], axis=1),
        angle_ranges=np.stack([t_lo, t_hi], axis=1))


def _cell_extrema(partition: Partition, pdf) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell (min, max) of the density on an inclusive sub-grid."""
    frac = np.linspace(0.0, 1.0, SUBGRID)
    lo = np.full(len(partition), np.inf)
    hi = np.full(len(partition), -np.inf)
    for fr in frac:
        r = partition.r_ranges[:, 0] + fr * (partition.r_ranges[:, 1] - partition.r_ranges[:, 0])
        for ft in frac:
            t = partition.angle_ranges[:, 0] + ft * (
                partition.angle_ranges[:, 1] - partition.angle_ranges[:, 0])
            values = np.asarray(pdf(_lorentz_of_polar(r, t)), dtype=float)
            lo = np.minimum(lo, values)
            hi = np.maximum(hi, values)
    return lo, hi


def cell_codelengths(partition: Partition, pdf) -> np.ndarray:
    """Integer code-lengths (bits) per cell for the density ``pdf``.

    ``pdf`` maps an (m, 3) array of Lorentz coordinates to m positive
    density values (with respect to the volume element).  The supremum of
    -log2 p over each cell is taken on a SUBGRID x SUBGRID inclusive grid.
    """
    lo, _ = _cell_extrema(partition, pdf)
    if np.any(lo <= 0):
        raise ValueError("the density must be positive on the ball")
    return np.ceil(-np.log2(lo) - np.log2(partition.volumes)).astype(int)


def cell_probabilities(partition: Partition, pdf) -> np.ndarray:
    """Cell masses approximated by pdf(representative) * volume, renormalized."""
    values = np.asarray(pdf(partition.representatives), dtype=float)
    mass = values * partition.volumes
    return mass / mass.sum()


def expected_lower_bound(partition: Partition, pdf) -> float:
    """Lower bound (bits) on the expected code-length over the partition."""
    _, hi = _cell_extrema(partition, pdf)
    prob = cell_probabilities(partition, pdf)
    return float(prob @ (-np.log2(hi) - np.log2(partition.volumes)))


def average_codelength(partition: Partition, pdf, lengths: np.ndarray) -> float:
    """Expected code-length sum_S P(S) l_S in bits."""
    return float(cell_probabilities(partition, pdf) @ lengths)


def kraft_sum(lengths: np.ndarray) -> float:
    """sum_S 2^(-l_S); at most 1 for any prefix-codeable length assignment."""
    return float(np.sum(np.exp2(-np.asarray(lengths, dtype=float))))
