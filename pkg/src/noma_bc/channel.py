"""Topology generation, fading draws and inter-cell interference.

Every link gain is a squared magnitude: Rayleigh amplitude fading over
distance-law decay, i.e. ``|h|^2 ~ Exponential(mean = d**-pathloss_exp)``.
The draw order inside :func:`sample_channels` is fixed and is part of the
reproducibility contract — identical ``(seed, num_cells, trial)`` tuples give
identical realizations regardless of which sweep consumes them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig


@dataclass
class Topology:
    """Static node positions (meters) and the distances derived from them.

    The two user slots are provisional: which one ends up as the SIC-capable
    strong user is decided per fading draw in :func:`sample_channels`, so the
    arrays here are slot-indexed, not role-indexed.
    """

    bs: np.ndarray          # (J, 2)
    user_a: np.ndarray      # (J, 2)
    user_b: np.ndarray      # (J, 2)
    bd: np.ndarray          # (J, 2)
    d_bs_a: np.ndarray      # (J,)   serving BS -> user slot a
    d_bs_b: np.ndarray      # (J,)
    d_bs_bd: np.ndarray     # (J,)
    d_bd_a: np.ndarray      # (J,)   backscatter device -> user slot a
    d_bd_b: np.ndarray      # (J,)
    d_cross_a: np.ndarray   # (J, J) BS j' -> user slot a of cell j; diag 0
    d_cross_b: np.ndarray   # (J, J)


@dataclass
class ChannelRealization:
    """One fading draw, already relabeled so gain_n >= gain_m per cell.

    ``cross_n[j, jp]`` is the gain from BS ``jp`` to the strong user of cell
    ``j`` (diagonal zero).  ``interference_*`` caches the current inter-cell
    interference powers; the network solver refreshes it between sweeps, and
    it stays zero for isolated single-cell studies.
    """

    gain_n: np.ndarray      # (J,) direct BS -> strong user
    gain_m: np.ndarray      # (J,) direct BS -> weak user
    bs_to_bd: np.ndarray    # (J,)
    bd_to_n: np.ndarray     # (J,)
    bd_to_m: np.ndarray     # (J,)
    cross_n: np.ndarray     # (J, J)
    cross_m: np.ndarray     # (J, J)
    interference_n: np.ndarray = field(default=None)  # type: ignore[assignment]
    interference_m: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        j = self.gain_n.shape[0]
        if self.interference_n is None:
            self.interference_n = np.zeros(j)
        if self.interference_m is None:
            self.interference_m = np.zeros(j)

    @property
    def num_cells(self) -> int:
        return self.gain_n.shape[0]

    def copy(self) -> "ChannelRealization":
        """Independent copy; solvers mutate the interference caches in place,
        so paired scheme comparisons should each work on their own copy."""
        return ChannelRealization(
            gain_n=self.gain_n.copy(),
            gain_m=self.gain_m.copy(),
            bs_to_bd=self.bs_to_bd.copy(),
            bd_to_n=self.bd_to_n.copy(),
            bd_to_m=self.bd_to_m.copy(),
            cross_n=self.cross_n.copy(),
            cross_m=self.cross_m.copy(),
            interference_n=self.interference_n.copy(),
            interference_m=self.interference_m.copy(),
        )


def link_gain(distance, pathloss_exp: float, rng: np.random.Generator, size=None):
    """Draw squared channel magnitudes for links at the given distance(s)."""
    scale = np.asarray(distance, dtype=float) ** (-pathloss_exp)
    return rng.exponential(scale=scale, size=size)


def _annulus(rng: np.random.Generator, n: int, r_lo: float, r_hi: float) -> np.ndarray:
    """Uniform-in-area points in an annulus around the origin, shape (n, 2)."""
    r = np.sqrt(rng.uniform(r_lo**2, r_hi**2, size=n))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)


def generate_topology(cfg: SystemConfig, rng: np.random.Generator) -> Topology:
    """Place BSs on a line and drop users/backscatter devices around them."""
    j = cfg.num_cells
    bs = np.zeros((j, 2))
    bs[:, 0] = np.arange(j) * cfg.inter_site_distance

    user_a = bs + _annulus(rng, j, cfg.min_user_distance, cfg.cell_radius)
    user_b = bs + _annulus(rng, j, cfg.min_user_distance, cfg.cell_radius)
    bd = bs + _annulus(rng, j, cfg.min_user_distance, cfg.cell_radius / 2.0)

    def dist(p, q):
        return np.linalg.norm(p - q, axis=-1)

    d_cross_a = dist(user_a[:, None, :], bs[None, :, :])
    d_cross_b = dist(user_b[:, None, :], bs[None, :, :])

    return Topology(
        bs=bs,
        user_a=user_a,
        user_b=user_b,
        bd=bd,
        d_bs_a=dist(user_a, bs),
        d_bs_b=dist(user_b, bs),
        d_bs_bd=dist(bd, bs),
        d_bd_a=dist(user_a, bd),
        d_bd_b=dist(user_b, bd),
        d_cross_a=d_cross_a,
        d_cross_b=d_cross_b,
    )


def sample_channels(topo: Topology, cfg: SystemConfig,
                    rng: np.random.Generator) -> ChannelRealization:
    """Draw all link gains for one coherence block and assign user roles.

    Within each cell the user slot with the larger direct gain becomes the
    strong (SIC-capable) user; the swap carries the slot's backscatter and
    cross-cell gains along so the realization stays self-consistent.
    """
    j = cfg.num_cells
    delta = cfg.pathloss_exp

    g_a = link_gain(topo.d_bs_a, delta, rng)
    g_b = link_gain(topo.d_bs_b, delta, rng)
    g_bd = link_gain(topo.d_bs_bd, delta, rng)
    g_bd_a = link_gain(topo.d_bd_a, delta, rng)
    g_bd_b = link_gain(topo.d_bd_b, delta, rng)
    cross_a = link_gain(topo.d_cross_a, delta, rng)
    cross_b = link_gain(topo.d_cross_b, delta, rng)
    np.fill_diagonal(cross_a, 0.0)
    np.fill_diagonal(cross_b, 0.0)

    swap = g_b > g_a
    gain_n = np.where(swap, g_b, g_a)
    gain_m = np.where(swap, g_a, g_b)
    bd_to_n = np.where(swap, g_bd_b, g_bd_a)
    bd_to_m = np.where(swap, g_bd_a, g_bd_b)
    cross_n = np.where(swap[:, None], cross_b, cross_a)
    cross_m = np.where(swap[:, None], cross_a, cross_b)

    return ChannelRealization(
        gain_n=gain_n,
        gain_m=gain_m,
        bs_to_bd=g_bd,
        bd_to_n=bd_to_n,
        bd_to_m=bd_to_m,
        cross_n=cross_n,
        cross_m=cross_m,
    )


def intercell_interference(real: ChannelRealization, powers: np.ndarray, cell: int,
                           user: str, model: str = "per_interferer") -> float:
    """Aggregate downlink interference at one user of ``cell``.

    ``powers`` holds the current transmit power of every BS.  The default
    sums each interfering BS's power over its own cross gain; the "factored"
    variant multiplies the total interfering power by the gain of the
    lowest-index interferer (a common single-coefficient simplification).
    """
    cross = real.cross_n if user == "n" else real.cross_m
    j = real.num_cells
    if j == 1:
        return 0.0
    others = [jp for jp in range(j) if jp != cell]
    if model == "per_interferer":
        return float(sum(powers[jp] * cross[cell, jp] for jp in others))
    if model == "factored":
        return float(cross[cell, others[0]] * sum(powers[jp] for jp in others))
    raise ValueError(f"unknown interference model {model!r}")
