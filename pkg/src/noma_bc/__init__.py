"""Downlink NOMA network with passive backscatter devices: spectral-efficiency
maximization via dual decomposition with closed-form per-cell subproblems.

The package is organized around the per-cell two-user NOMA pair assisted by a
single backscatter device.  ``optimizer.solve_network`` coordinates the cells;
``power_dual`` and ``beta_solver`` hold the per-cell subproblem solvers;
``oracle`` provides independent brute-force and finite-difference checks.
"""

from .config import SystemConfig, dbm_to_linear
from .channel import Topology, ChannelRealization, generate_topology, sample_channels
from .sinr import PowerAlloc, RateCoeffs, BetaCoeffs, sinr_n, sinr_m, cell_se
from .optimizer import SolveResult, solve_network, noma_nb_baseline

__all__ = [
    "SystemConfig",
    "dbm_to_linear",
    "Topology",
    "ChannelRealization",
    "generate_topology",
    "sample_channels",
    "PowerAlloc",
    "RateCoeffs",
    "BetaCoeffs",
    "sinr_n",
    "sinr_m",
    "cell_se",
    "SolveResult",
    "solve_network",
    "noma_nb_baseline",
]

__version__ = "0.1.0"
