"""Lumped-point cure simulator with prescribed temperature history.

The degree of cure follows a two-branch autocatalytic rate law integrated
with fixed-step RK4; the step grid is aligned to the cycle vertices so the
right-hand side is smooth within every integration step. Alongside the cure
state the simulator tracks the exotherm rate diagnostic, resin viscosity,
instantaneous glass transition, the cure-hardening modulus, volumetric
shrinkage and its linear strain, and a scalar residual measure

    sigma_bar[k] = sigma_bar[k-1] + E_r(alpha_k) * (CTE dT_k + CCS d eps_k)

accumulated from the gel point onward (fully constrained increments, i.e.
zero total strain). The dimensionless deformation proxy is
|sigma_bar(end)| / E_cured.

Default material constants are literature values for a 3501-6 class epoxy
and are not ground truth for any particular part; every one of them can be
overridden. The rate law is evaluated with the conventional negative
Arrhenius exponent, exp(-E / (R T)).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from curebo.problems.cycle import CureCycle

R_GAS = 8.314  # J / (mol K)
KELVIN_OFFSET = 273.15

TRACE_COLUMNS = (
    "time_min",
    "T_C",
    "alpha",
    "dalpha_dt",
    "Q_dot",
    "mu",
    "Tg_C",
    "Er",
    "Vrs",
    "eps_s",
    "sigma_bar",
)


class IntegrationError(RuntimeError):
    """Cure state left its admissible range or went non-finite."""


@dataclass(frozen=True)
class KineticParams:
    """Two-branch autocatalytic rate-law constants (per-minute units)."""

    a1: float = 2.101e9
    a2: float = -2.014e9
    a3: float = 1.960e5
    e1: float = 8.07e4  # J/mol
    e2: float = 7.78e4
    e3: float = 5.66e4
    alpha_crit: float = 0.47
    branch_switch: float = 0.3
    heat_of_reaction: float = 473.6e3  # J/kg resin
    resin_density: float = 1260.0  # kg/m^3
    fiber_volume_fraction: float = 0.58

    def __post_init__(self):
        if min(self.e1, self.e2, self.e3) <= 0:
            raise ValueError("activation energies must be positive")
        if not self.branch_switch < self.alpha_crit <= 1.0:
            raise ValueError("alpha_crit must lie in (branch_switch, 1]")
        if not 0.0 <= self.fiber_volume_fraction < 1.0:
            raise ValueError("fiber volume fraction must lie in [0, 1)")


@dataclass(frozen=True)
class MechanicalParams:
    """Modulus growth, shrinkage, viscosity and glass-transition constants."""

    modulus_liquid: float = 3.45e6  # Pa
    modulus_cured: float = 3.45e9  # Pa
    gamma: float = 0.0  # early/late modulus growth shape, in [-1, 1]
    alpha_mod_lo: float = 0.30  # cure bounds of the modulus ramp
    alpha_mod_hi: float = 0.90
    shrink_total: float = -0.0873  # final volumetric shrinkage (signed)
    shrink_profile_a: Optional[float] = None  # linear coefficient; None -> shrink_total
    alpha_shrink_lo: float = 0.20  # cure bounds of the shrinkage window
    alpha_shrink_hi: float = 0.90
    cte: float = 57.6e-6  # 1/K
    ccs: float = 1.0  # cure-shrinkage strain coefficient
    visc_inf: float = 7.93e-14  # Pa s
    visc_u: float = 9.08e4  # J/mol
    visc_k: float = 14.1
    gel_viscosity: float = 100.0  # Pa s
    tg0_c: float = 0.0
    tg_inf_c: float = 215.0
    tg_lambda: float = 0.4

    def __post_init__(self):
        if not 0.0 <= self.alpha_mod_lo < self.alpha_mod_hi <= 1.0:
            raise ValueError("modulus cure bounds must satisfy 0 <= lo < hi <= 1")
        if not 0.0 <= self.alpha_shrink_lo < self.alpha_shrink_hi <= 1.0:
            raise ValueError("shrinkage cure bounds must satisfy 0 <= lo < hi <= 1")
        if self.modulus_liquid >= self.modulus_cured:
            raise ValueError("liquid modulus must be below cured modulus")
        if not -1.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [-1, 1]")


def cure_rate(alpha, temp_k, kin: KineticParams = KineticParams()):
    """Cure rate (per minute) at degree of cure alpha and temperature in K."""
    alpha = np.asarray(alpha, dtype=float)
    temp_k = np.asarray(temp_k, dtype=float)
    inv_rt = 1.0 / (R_GAS * temp_k)
    b1 = kin.a1 * np.exp(-kin.e1 * inv_rt)
    b2 = kin.a2 * np.exp(-kin.e2 * inv_rt)
    b3 = kin.a3 * np.exp(-kin.e3 * inv_rt)
    low = (b1 + alpha * b2) * (1.0 - alpha) * (kin.alpha_crit - alpha)
    high = b3 * (1.0 - alpha)
    out = np.where(alpha <= kin.branch_switch, low, high)
    return out if out.ndim else float(out)


def viscosity(alpha, temp_k, mech: MechanicalParams = MechanicalParams()):
    """Resin viscosity (Pa s): Arrhenius in T with exponential cure buildup."""
    alpha = np.asarray(alpha, dtype=float)
    temp_k = np.asarray(temp_k, dtype=float)
    out = mech.visc_inf * np.exp(mech.visc_u / (R_GAS * temp_k) + mech.visc_k * alpha)
    return out if out.ndim else float(out)


def glass_transition_c(alpha, mech: MechanicalParams = MechanicalParams()):
    """Instantaneous glass transition (C), DiBenedetto form."""
    alpha = np.asarray(alpha, dtype=float)
    lam = mech.tg_lambda
    out = mech.tg0_c + (mech.tg_inf_c - mech.tg0_c) * lam * alpha / (1.0 - (1.0 - lam) * alpha)
    return out if out.ndim else float(out)


def chile_modulus(alpha, mech: MechanicalParams = MechanicalParams()):
    """Cure-hardening modulus (Pa), continuous at both cure knots."""
    alpha = np.asarray(alpha, dtype=float)
    span = mech.alpha_mod_hi - mech.alpha_mod_lo
    amod = np.clip((alpha - mech.alpha_mod_lo) / span, 0.0, 1.0)
    e0, e1 = mech.modulus_liquid, mech.modulus_cured
    out = (1.0 - amod) * e0 + amod * e1 + mech.gamma * amod * (1.0 - amod) * (e1 - e0)
    return out if out.ndim else float(out)


def volumetric_shrinkage(alpha, mech: MechanicalParams = MechanicalParams()):
    """Volumetric shrinkage (signed), quadratic ramp over the cure window."""
    alpha = np.asarray(alpha, dtype=float)
    a_coeff = mech.shrink_total if mech.shrink_profile_a is None else mech.shrink_profile_a
    span = mech.alpha_shrink_hi - mech.alpha_shrink_lo
    a_s = np.clip((alpha - mech.alpha_shrink_lo) / span, 0.0, 1.0)
    out = a_coeff * a_s + (mech.shrink_total - a_coeff) * a_s * a_s
    return out if out.ndim else float(out)


def shrinkage_strain(vrs):
    """Linear strain from volumetric shrinkage: (1 + V)^(1/3) - 1."""
    vrs = np.asarray(vrs, dtype=float)
    out = np.cbrt(1.0 + vrs) - 1.0
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class CureTrace:
    """Time series of the simulated cure plus its scalar outputs."""

    time_min: np.ndarray
    temp_c: np.ndarray
    alpha: np.ndarray
    rate: np.ndarray
    heat_rate: np.ndarray
    mu: np.ndarray
    tg_c: np.ndarray
    modulus: np.ndarray
    vol_shrinkage: np.ndarray
    shrink_strain: np.ndarray
    sigma_bar: np.ndarray
    gel_index: Optional[int]
    vitrification_index: Optional[int]
    final_doc: float
    u_proxy: float

    def write_csv(self, path) -> None:
        """Write the trace with the fixed public column order."""
        columns = (
            self.time_min,
            self.temp_c,
            self.alpha,
            self.rate,
            self.heat_rate,
            self.mu,
            self.tg_c,
            self.modulus,
            self.vol_shrinkage,
            self.shrink_strain,
            self.sigma_bar,
        )
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(TRACE_COLUMNS)
            for row in zip(*columns):
                writer.writerow([format(v, ".12g") for v in row])


def _time_grid(cycle: CureCycle, dt: float) -> np.ndarray:
    """Vertex-aligned grid: every cycle segment split into <= dt substeps."""
    times = cycle.times
    pieces = [np.array([0.0])]
    for a, b in zip(times, times[1:]):
        steps = max(1, int(np.ceil((b - a) / dt - 1e-12)))
        pieces.append(np.linspace(a, b, steps + 1)[1:])
    return np.concatenate(pieces)


def simulate_cure(
    cycle: CureCycle,
    kin: KineticParams = KineticParams(),
    mech: MechanicalParams = MechanicalParams(),
    dt: float = 0.1,
) -> CureTrace:
    """Integrate the cure state along a cycle and derive the output trace.

    Parameters
    ----------
    cycle : temperature schedule, evaluated exactly (piecewise linear).
    kin, mech : material constants.
    dt : nominal step in minutes; actual steps divide each cycle segment.

    Gelation is flagged at the first upward crossing of the gel viscosity
    (the resin starts cold and thick, so a plain threshold test would fire
    at time zero); vitrification at the first instant Tg reaches the
    current temperature. The residual measure only accumulates after
    gelation, so a cycle that never gels reports a zero deformation proxy.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    t = _time_grid(cycle, dt)
    temps_c = cycle.temperature(t)
    temps_k = temps_c + KELVIN_OFFSET
    mid_k = cycle.temperature(0.5 * (t[:-1] + t[1:])) + KELVIN_OFFSET

    # scalar rate for the hot loop; same formula as cure_rate
    inv_r = 1.0 / R_GAS
    switch, crit = kin.branch_switch, kin.alpha_crit

    def rhs(a: float, tk: float) -> float:
        # cure is irreversible: never allow a negative rate
        scale = inv_r / tk
        if a <= switch:
            rate = (
                kin.a1 * math.exp(-kin.e1 * scale) + a * kin.a2 * math.exp(-kin.e2 * scale)
            ) * (1.0 - a) * (crit - a)
        else:
            rate = kin.a3 * math.exp(-kin.e3 * scale) * (1.0 - a)
        return rate if rate > 0.0 else 0.0

    def rk4_step(a: float, h: float, t_lo: float, t_mid: float, t_hi: float) -> float:
        k1 = rhs(a, t_lo)
        k2 = rhs(a + 0.5 * h * k1, t_mid)
        k3 = rhs(a + 0.5 * h * k2, t_mid)
        k4 = rhs(a + h * k3, t_hi)
        return a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    n = len(t)
    alpha = np.empty(n)
    alpha[0] = 0.0
    a = 0.0
    for k in range(n - 1):
        h = t[k + 1] - t[k]
        t_lo, t_hi = temps_k[k], temps_k[k + 1]
        trial = rk4_step(a, h, t_lo, mid_k[k], t_hi)
        if a < switch < trial:
            # the rate law jumps at the branch switch; refine the straddling
            # step so the discontinuity is confined to a tiny substep
            # (temperature is linear within a step: the grid is vertex aligned)
            sub = 64
            hs = h / sub
            trial = a
            for j in range(sub):
                f_lo = t_lo + (t_hi - t_lo) * (j / sub)
                f_mid = t_lo + (t_hi - t_lo) * ((j + 0.5) / sub)
                f_hi = t_lo + (t_hi - t_lo) * ((j + 1.0) / sub)
                trial = rk4_step(trial, hs, f_lo, f_mid, f_hi)
        a = trial
        if not math.isfinite(a):
            raise IntegrationError(f"non-finite cure state at t={t[k + 1]:.4f} min")
        if a < -1e-9 or a > 1.0 + 1e-9:
            raise IntegrationError(f"degree of cure left [0, 1] at t={t[k + 1]:.4f} min")
        a = min(max(a, 0.0), 1.0)
        alpha[k + 1] = a

    rate = np.maximum(cure_rate(alpha, temps_k, kin), 0.0)
    heat_rate = rate * (1.0 - kin.fiber_volume_fraction) * kin.resin_density * kin.heat_of_reaction
    mu = viscosity(alpha, temps_k, mech)
    tg = glass_transition_c(alpha, mech)
    modulus = chile_modulus(alpha, mech)
    vrs = volumetric_shrinkage(alpha, mech)
    eps = shrinkage_strain(vrs)

    above = mu >= mech.gel_viscosity
    crossings = np.nonzero(above[1:] & ~above[:-1])[0]
    gel_index = int(crossings[0] + 1) if len(crossings) else None
    vit_hits = np.nonzero(tg >= temps_c)[0]
    vitrification_index = int(vit_hits[0]) if len(vit_hits) else None

    sigma = np.zeros(n)
    if gel_index is not None:
        increments = modulus[1:] * (mech.cte * np.diff(temps_c) + mech.ccs * np.diff(eps))
        increments[: gel_index] = 0.0  # increment k covers (t[k], t[k+1])
        sigma[1:] = np.cumsum(increments)

    return CureTrace(
        time_min=t,
        temp_c=temps_c,
        alpha=alpha,
        rate=rate,
        heat_rate=heat_rate,
        mu=mu,
        tg_c=tg,
        modulus=modulus,
        vol_shrinkage=vrs,
        shrink_strain=eps,
        sigma_bar=sigma,
        gel_index=gel_index,
        vitrification_index=vitrification_index,
        final_doc=float(alpha[-1]),
        u_proxy=float(abs(sigma[-1]) / mech.modulus_cured),
    )


def with_overrides(base, **kwargs):
    """Copy a params dataclass with field overrides (unknown keys rejected)."""
    return replace(base, **kwargs)
