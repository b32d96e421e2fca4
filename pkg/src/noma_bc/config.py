"""Scenario configuration.

All powers are handled internally in linear milliwatts; dBm appears only at
the configuration boundary.  The noise variance is taken to be in the same
linear unit as the transmit powers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict, fields


def dbm_to_linear(p_dbm: float) -> float:
    """Convert a dBm power level to linear milliwatts (30 dBm -> 1000 mW)."""
    return 10.0 ** (p_dbm / 10.0)


@dataclass
class SystemConfig:
    """Knobs for one simulated network instance.

    Geometry defaults are chosen so that a single cell at the full power
    budget meets the default QoS target for the large majority of fading
    draws; see the solver's feasibility precheck for the closed form that
    decides this.
    """

    # network scale and radio parameters
    num_cells: int = 5
    p_tot_dbm: float = 30.0          # per-BS power budget
    sic_error: float = 0.5           # residual cancellation fraction, in [0, 1]
    r_req: float = 0.5               # per-user rate floor [bit/s/Hz]
    noise_var: float = 0.1           # receiver noise, linear
    pathloss_exp: float = 3.0

    # layout (meters): BSs on a line, users in an annulus around their BS,
    # backscatter device in the inner half of the cell
    cell_radius: float = 10.0
    inter_site_distance: float = 20.0
    min_user_distance: float = 1.0

    rng_seed: int = 1

    # dual/outer loop controls
    tol_dual: float = 1e-4
    max_dual_iters: int = 500
    tol_outer: float = 1e-4
    max_outer: int = 50
    step0: float = 0.1
    init_multiplier: float = 0.01

    # behavioural switches
    interference_model: str = "per_interferer"   # or "factored"
    beta_rule: str = "max_se"                    # or "z1_active"
    sweep_mode: str = "gauss_seidel"             # or "jacobi"
    phi_quadratic_form: str = "reduced"          # or "direct"

    def __post_init__(self) -> None:
        if self.num_cells < 1:
            raise ValueError("num_cells must be >= 1")
        if not 0.0 <= self.sic_error <= 1.0:
            raise ValueError("sic_error must lie in [0, 1]")
        if self.r_req <= 0.0:
            raise ValueError("r_req must be positive")
        if self.noise_var <= 0.0:
            raise ValueError("noise_var must be positive")
        if self.pathloss_exp <= 0.0:
            raise ValueError("pathloss_exp must be positive")
        if not 0.0 < self.min_user_distance < self.cell_radius:
            raise ValueError("need 0 < min_user_distance < cell_radius")
        if self.interference_model not in ("per_interferer", "factored"):
            raise ValueError(f"unknown interference_model {self.interference_model!r}")
        if self.beta_rule not in ("max_se", "z1_active"):
            raise ValueError(f"unknown beta_rule {self.beta_rule!r}")
        if self.sweep_mode not in ("gauss_seidel", "jacobi"):
            raise ValueError(f"unknown sweep_mode {self.sweep_mode!r}")
        if self.phi_quadratic_form not in ("reduced", "direct"):
            raise ValueError(f"unknown phi_quadratic_form {self.phi_quadratic_form!r}")

    @property
    def p_tot(self) -> float:
        """Power budget in linear milliwatts."""
        return dbm_to_linear(self.p_tot_dbm)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p_tot_mw"] = self.p_tot
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SystemConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known - {"p_tot_mw"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**{k: v for k, v in d.items() if k in known})

    @classmethod
    def from_json(cls, path: str) -> "SystemConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
