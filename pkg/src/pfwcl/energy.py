"""Spectral functions rho, rho-hat, G and the dipole ground-state energy.

All three functions are even in t and reduce to weighted radial integrals
against the form-factor measure (pf denotes the polarization factor, already
absorbed into the weights of a discrete measure):

    rho(t)     = pf * int |phi|^2 / (2 omega) * exp(-|t| kappa^2 omega) dk
    rho_hat(t) = pf * int kappa^2 |phi|^2 / (kappa^4 omega^2 + t^2) dk
    G(t)       = pf * int t^2 |phi|^2/(t^2+omega^2)^2 dk
                 / (1 + pf * int |phi|^2/(t^2+omega^2) dk)

The ground-state energy of (1/2) A(0)^2 + H_f is

    calE = d_eff / (2 pi) * int_R G(t) dt,

where d_eff = d for continuum measures and 1 for discrete ones (the discrete
convention is per scalar component, which makes the truncated-Fock and
Bogoliubov oracles directly comparable).  The log-spectral pipeline

    (1/2 pi) int_R log(1 + kappa^2 rho_hat(t)) dt = (kappa^2 / pi) int_R G(t) dt

is an exact identity and is computed independently as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MeasureError
from .formfactor import (GaussianProfile, PointMasses, RadialMeasure,
                         SharpCutoff, Tabulated, moment_report)
from .quadrature import adaptive_quad, adaptive_quad_0inf, adaptive_quad_sym_line

DEFAULT_REL_TOL = 1e-11


def measure_integral(ff: RadialMeasure, weight, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """pf * int weight(omega) |phi(k)|^2 dk, radially reduced.

    ``weight`` must accept a numpy array of radii.  For PointMasses the atom
    weights are used directly (polarization already absorbed).
    """
    p = ff.profile
    if isinstance(p, PointMasses):
        if not p.atoms:
            return 0.0
        omegas = np.array([a[0] for a in p.atoms])
        weights = np.array([a[1] for a in p.atoms])
        return float(weights @ np.asarray(weight(omegas), dtype=float))
    pref = ff.polarization_factor * ff.sphere_area()
    d = ff.dimension
    if isinstance(p, SharpCutoff):
        def f(r):
            return weight(r) * r ** (d - 1)
        val, _ = adaptive_quad(f, 0.0, p.lam, rel_tol=rel_tol)
        return pref * val
    if isinstance(p, GaussianProfile):
        inv_s2 = 1.0 / p.sigma**2

        def f(r):
            return np.exp(-r * r * inv_s2) * weight(r) * r ** (d - 1)
        val, _ = adaptive_quad_0inf(f, split=4.0 * p.sigma, rel_tol=rel_tol)
        return pref * val
    if isinstance(p, Tabulated):
        def f(r):
            return p(r) ** 2 * weight(r) * r ** (d - 1)
        total = 0.0
        for lo, hi in zip(p.radii[:-1], p.radii[1:]):
            seg, _ = adaptive_quad(f, lo, hi, rel_tol=rel_tol)
            total += seg
        return pref * total
    raise MeasureError(f"unsupported profile {type(p).__name__}")


@dataclass(frozen=True)
class SpectralFunctions:
    """Evaluator for rho and rho-hat at a fixed coupling scale kappa."""

    ff: RadialMeasure
    kappa: float = 1.0
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self):
        if not (self.kappa >= 0.0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be a nonnegative real, got {self.kappa}")

    def rho(self, t: float) -> float:
        at = abs(t)
        k2 = self.kappa**2
        return measure_integral(
            self.ff, lambda r: np.exp(-at * k2 * r) / (2.0 * r), self.rel_tol)

    def rho_hat(self, t: float) -> float:
        k2 = self.kappa**2
        t2 = t * t
        return measure_integral(
            self.ff, lambda r: k2 / (k2 * k2 * r * r + t2), self.rel_tol)


def dispersion_parts(ff: RadialMeasure, t: float,
                     rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """The two integrals entering G: (pf*||t phi/(t^2+w^2)||^2, pf*||phi/sqrt(t^2+w^2)||^2)."""
    t2 = t * t
    num = measure_integral(ff, lambda r: t2 / (t2 + r * r) ** 2, rel_tol)
    den = measure_integral(ff, lambda r: 1.0 / (t2 + r * r), rel_tol)
    return num, den


def G_function(ff: RadialMeasure, t: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """G(t) >= 0, even, with G(0) = 0 for measures without a zero-frequency atom."""
    if t == 0.0:
        return 0.0
    num, den = dispersion_parts(ff, t, rel_tol)
    return num / (1.0 + den)


def _effective_component_count(ff: RadialMeasure) -> int:
    # discrete measures use the per-component scalar convention
    return 1 if ff.is_discrete else ff.dimension


@dataclass(frozen=True)
class EnergyResult:
    calE: float
    log_spectral: float
    estimated_abs_error: float


def ground_energy(ff: RadialMeasure, rel_tol: float = DEFAULT_REL_TOL) -> EnergyResult:
    """Ground-state energy of (1/2) A(0)^2 + H_f via the G-quadrature.

    ``log_spectral`` holds the independently computed value
    (1/2 pi) int log(1 + rho_hat_1(t)) dt, which must equal
    (2/d_eff) * calE up to the reported error.
    """
    d_eff = _effective_component_count(ff)
    inner_tol = rel_tol / 10.0

    def g_vals(ts):
        ts = np.atleast_1d(ts)
        return np.array([G_function(ff, t, inner_tol) for t in ts])

    i_g, err_g = adaptive_quad_sym_line(g_vals, rel_tol=rel_tol, abs_tol=1e-14)
    cal_e = d_eff / (2.0 * math.pi) * i_g

    sf1 = SpectralFunctions(ff, kappa=1.0, rel_tol=inner_tol)

    def log_vals(ts):
        ts = np.atleast_1d(ts)
        return np.array([math.log1p(sf1.rho_hat(t)) for t in ts])

    i_log, err_log = adaptive_quad_sym_line(log_vals, rel_tol=rel_tol, abs_tol=1e-14)
    log_spectral = i_log / (2.0 * math.pi)

    propagated = d_eff / (2.0 * math.pi) * err_g + err_log / (2.0 * math.pi)
    residual = abs(log_spectral - (2.0 / d_eff) * cal_e)
    return EnergyResult(calE=cal_e, log_spectral=log_spectral,
                        estimated_abs_error=max(propagated, residual))


def log_spectral_energy(ff: RadialMeasure, kappa: float,
                        rel_tol: float = DEFAULT_REL_TOL) -> float:
    """(1/2 pi) int_R log(1 + kappa^2 rho_hat_kappa(t)) dt.

    Scales exactly as kappa^2 times the kappa = 1 value (change of variables
    t -> kappa^2 t), and equals (2 kappa^2 / d_eff) * calE.
    """
    sf = SpectralFunctions(ff, kappa=kappa, rel_tol=rel_tol / 10.0)
    k2 = kappa * kappa

    def log_vals(ts):
        ts = np.atleast_1d(ts)
        return np.array([math.log1p(k2 * sf.rho_hat(t)) for t in ts])

    val, _ = adaptive_quad_sym_line(log_vals, rel_tol=rel_tol, abs_tol=1e-14)
    return val / (2.0 * math.pi)


def dipole_dispersion(ff: RadialMeasure, kappa: float, p: float,
                      rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Bottom of the dipole fiber spectrum: p^2/(2 m_eff) + kappa^2 * calE.

    Note the mass term persists at kappa = 0: the value is p^2/(2 m_eff),
    not p^2/2.
    """
    rep = moment_report(ff)
    cal_e = ground_energy(ff, rel_tol).calE
    return p * p / (2.0 * rep.m_eff) + kappa * kappa * cal_e


# ---------------------------------------------------------------------------
# d = 3 sharp-cutoff asymptotics

_SERIES_SWITCH = 1e-3


def _arctan_minus_rational(u):
    """arctan(u) - u/(1+u^2); series (2/3)u^3 - (4/5)u^5 + (6/7)u^7 - ... for small u."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _SERIES_SWITCH
    out = np.empty_like(u)
    us = u[small]
    u2 = us * us
    out[small] = us**3 * (2.0 / 3.0 + u2 * (-4.0 / 5.0 + u2 * (
        6.0 / 7.0 + u2 * (-8.0 / 9.0 + u2 * (10.0 / 11.0)))))
    ub = u[~small]
    out[~small] = np.arctan(ub) - ub / (1.0 + ub * ub)
    return out


def _u_minus_arctan(u):
    """u - arctan(u); series u^3/3 - u^5/5 + u^7/7 - ... for small u."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _SERIES_SWITCH
    out = np.empty_like(u)
    us = u[small]
    u2 = us * us
    out[small] = us**3 * (1.0 / 3.0 + u2 * (-1.0 / 5.0 + u2 * (
        1.0 / 7.0 + u2 * (-1.0 / 9.0 + u2 * (1.0 / 11.0)))))
    ub = u[~small]
    out[~small] = ub - np.arctan(ub)
    return out


def _cutoff_integrand(lam: float):
    c = 8.0 * math.pi / 3.0 * lam

    def g(u):
        u = np.asarray(u, dtype=float)
        num = _arctan_minus_rational(u)
        den = (u + c * _u_minus_arctan(u)) * u * u
        return num / den

    return g


def cutoff_energy_3d(lam: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Ground energy E(Lambda) of the d = 3 sharp-cutoff model at kappa = 1:

        E = 4 Lambda^2 int_0^inf [arctan u - u/(1+u^2)]
            / [u + (8 pi/3) Lambda (u - arctan u)] du / u^2.

    Agrees with ground_energy(SharpCutoff(Lambda), d=3).calE; grows like
    Lambda^{3/2} with E/Lambda^{3/2} eventually inside
    [sqrt(2 pi/3), sqrt(2 pi)].
    """
    if not lam > 0.0:
        raise ValueError(f"cutoff must be positive, got {lam}")
    g = _cutoff_integrand(lam)
    val, _ = adaptive_quad_0inf(g, split=2.0, rel_tol=rel_tol)
    return 4.0 * lam * lam * val


def cutoff_split_I1_I2(lam: float, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """Split E(Lambda)/(4 Lambda) = I1 + I2 at u = Lambda^{-1/4}.

    I2/sqrt(Lambda) -> 0 while I1/sqrt(Lambda) carries the Lambda^{3/2}
    growth of E.
    """
    if not lam > 1.0:
        raise ValueError(f"the split needs Lambda > 1, got {lam}")
    g = _cutoff_integrand(lam)
    u_split = lam ** -0.25
    v1, _ = adaptive_quad(g, 0.0, u_split, rel_tol=rel_tol)
    v2a, _ = adaptive_quad(g, u_split, 2.0, rel_tol=rel_tol)

    def tail(w):
        w = np.asarray(w, dtype=float)
        return g(1.0 / w) / (w * w)

    v2b, _ = adaptive_quad(tail, 0.0, 0.5, rel_tol=rel_tol)
    return lam * v1, lam * (v2a + v2b)
