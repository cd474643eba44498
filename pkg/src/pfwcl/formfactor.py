"""Rotation-invariant form factors and their moment integrals.

A measure |phi(k)|^2 dk on R^d with phi rotation invariant and massless
dispersion omega(k) = |k| reduces every d-dimensional integral to a radial
one:

    M_s = int |phi(k)|^2 omega(k)^s dk = S_{d-1} int_0^inf phi(r)^2 r^{s+d-1} dr,

with S_{d-1} = 2 pi^{d/2} / Gamma(d/2).  Discrete measures are lists of atoms
(omega_j, W_j) whose weights already absorb the transversal polarization
average (d-1)/d, so M_s = sum_j W_j omega_j^s directly.

The mass shift is delta_m = polarization_factor * M_{-2} and the effective
mass m_eff = 1 + delta_m.  A measure is infrared regular iff M_{-3} < inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import MeasureError
from .quadrature import DivergentIntegral, adaptive_quad, adaptive_quad_0inf

VALID_MOMENT_ORDERS = (-3, -2, -1, 1)


@dataclass(frozen=True)
class SharpCutoff:
    """phi(r) = 1 for r <= lam, 0 beyond (ultraviolet cutoff indicator)."""
    lam: float

    def __post_init__(self):
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise MeasureError(f"sharp cutoff needs lambda > 0, got {self.lam}")


@dataclass(frozen=True)
class GaussianProfile:
    """phi(r) = exp(-r^2 / (2 sigma^2))."""
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise MeasureError(f"gaussian profile needs sigma > 0, got {self.sigma}")


@dataclass(frozen=True)
class PointMasses:
    """Atoms (omega_j, W_j); weights carry the (d-1)/d polarization factor."""
    atoms: tuple[tuple[float, float], ...]

    def __init__(self, atoms: Sequence[Sequence[float]] = ()):
        normalized = tuple((float(w), float(W)) for w, W in atoms)
        for omega, weight in normalized:
            if not (omega > 0.0 and math.isfinite(omega)):
                raise MeasureError(f"atom frequency must be positive, got {omega}")
            if not (weight > 0.0 and math.isfinite(weight)):
                raise MeasureError(f"atom weight must be positive, got {weight}")
        object.__setattr__(self, "atoms", normalized)


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear phi(r) through (r_i, phi_i); zero outside [r_0, r_last]."""
    radii: tuple[float, ...]
    values: tuple[float, ...]

    def __init__(self, points: Sequence[Sequence[float]]):
        pts = [(float(r), float(v)) for r, v in points]
        if len(pts) < 2:
            raise MeasureError("tabulated profile needs at least two points")
        radii = tuple(r for r, _ in pts)
        values = tuple(v for _, v in pts)
        if any(r < 0 for r in radii):
            raise MeasureError("tabulated radii must be nonnegative")
        if any(b <= a for a, b in zip(radii[:-1], radii[1:])):
            raise MeasureError("tabulated radii must be strictly increasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    def __call__(self, r):
        return np.interp(r, self.radii, self.values, left=0.0, right=0.0)


Profile = Union[SharpCutoff, GaussianProfile, PointMasses, Tabulated]


@dataclass(frozen=True)
class RadialMeasure:
    """A rotation-invariant form-factor measure in d spatial dimensions."""

    dimension: int
    profile: Profile
    polarization_factor: float = field(init=False)

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 2:
            raise MeasureError(f"dimension must be an integer >= 2, got {self.dimension}")
        object.__setattr__(self, "dimension", int(self.dimension))
        if isinstance(self.profile, PointMasses):
            pol = 1.0  # absorbed into the atom weights
        elif isinstance(self.profile, (SharpCutoff, GaussianProfile, Tabulated)):
            pol = (self.dimension - 1) / self.dimension
        else:
            raise MeasureError(f"unknown profile type {type(self.profile).__name__}")
        object.__setattr__(self, "polarization_factor", pol)
        _check_square_integrability(self)

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.profile, PointMasses)

    @property
    def is_null(self) -> bool:
        """True when the measure carries no mass at all."""
        if isinstance(self.profile, PointMasses):
            return len(self.profile.atoms) == 0
        if isinstance(self.profile, Tabulated):
            return all(v == 0.0 for v in self.profile.values)
        return False

    def sphere_area(self) -> float:
        d = self.dimension
        return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def _origin_exponent_divergent(ff: RadialMeasure, s: int) -> bool:
    """Analytic endpoint test: does int_0 phi(r)^2 r^{s+d-1} dr diverge?

    Only relevant when phi does not vanish near r = 0; the radial integrand
    behaves like r^{s+d-1} there, which is integrable iff s + d > 0.
    """
    p = ff.profile
    if isinstance(p, PointMasses):
        return False
    if isinstance(p, Tabulated):
        if p.radii[0] > 0.0 or p.values[0] == 0.0:
            return False
    return s + ff.dimension <= 0


def _radial_integral(ff: RadialMeasure, power: float, rel_tol: float) -> float:
    """int_0^inf phi(r)^2 r^power dr for a continuum profile."""
    p = ff.profile
    if isinstance(p, SharpCutoff):
        lam = p.lam

        def f(r):
            return r ** power

        value, _ = adaptive_quad(f, 0.0, lam, rel_tol=rel_tol, growth_guard=True)
        return value
    if isinstance(p, GaussianProfile):
        inv_s2 = 1.0 / p.sigma**2

        def f(r):
            return np.exp(-r * r * inv_s2) * r ** power

        # |phi|^2 < 1e-320 beyond ~27 sigma; the tail map covers the rest.
        value, _ = adaptive_quad_0inf(f, split=4.0 * p.sigma, rel_tol=rel_tol,
                                      growth_guard=True)
        return value
    if isinstance(p, Tabulated):
        def f(r):
            return p(r) ** 2 * r ** power

        total = 0.0
        for lo, hi in zip(p.radii[:-1], p.radii[1:]):
            seg, _ = adaptive_quad(f, lo, hi, rel_tol=rel_tol, growth_guard=True)
            total += seg
        return total
    raise MeasureError(f"unsupported profile {type(p).__name__}")


def moment(ff: RadialMeasure, s: int, rel_tol: float = 1e-11) -> float:
    """M_s = int |phi|^2 omega^s dk; returns math.inf on divergence."""
    if s not in VALID_MOMENT_ORDERS:
        raise ValueError(f"moment order must be one of {VALID_MOMENT_ORDERS}, got {s}")
    if isinstance(ff.profile, PointMasses):
        return math.fsum(W * omega ** s for omega, W in ff.profile.atoms)
    if _origin_exponent_divergent(ff, s):
        return math.inf
    try:
        radial = _radial_integral(ff, s + ff.dimension - 1, rel_tol)
    except DivergentIntegral:
        return math.inf
    return ff.sphere_area() * radial


@dataclass(frozen=True)
class MomentReport:
    m_plus1: float
    m_minus1: float
    m_minus2: float
    m_minus3: float
    ir_regular: bool
    delta_m: float
    m_eff: float


def moment_report(ff: RadialMeasure, rel_tol: float = 1e-11) -> MomentReport:
    """Evaluate the four standing moments, delta_m, m_eff and the IR flag."""
    m_p1 = moment(ff, 1, rel_tol)
    m_m1 = moment(ff, -1, rel_tol)
    m_m2 = moment(ff, -2, rel_tol)
    m_m3 = moment(ff, -3, rel_tol)
    delta_m = ff.polarization_factor * m_m2
    return MomentReport(
        m_plus1=m_p1, m_minus1=m_m1, m_minus2=m_m2, m_minus3=m_m3,
        ir_regular=math.isfinite(m_m3),
        delta_m=delta_m, m_eff=1.0 + delta_m)


_ASSUMPTION_LABELS = {
    1: "sqrt(omega)*phi not square-integrable",
    -1: "phi/sqrt(omega) not square-integrable",
    -2: "phi/omega not square-integrable",
}


@dataclass(frozen=True)
class AssumptionReport:
    passed: bool
    finite: dict
    failures: tuple[str, ...]
    values: dict


def _check_square_integrability(ff: RadialMeasure) -> None:
    """Construction-time guard: M_{+1}, M_{-1}, M_{-2} must be finite.

    Uses the analytic endpoint test only, so construction stays cheap.
    """
    bad = [s for s in (1, -1, -2) if _origin_exponent_divergent(ff, s)]
    if bad:
        reasons = "; ".join(_ASSUMPTION_LABELS[s] for s in bad)
        raise MeasureError(
            f"form factor violates the standing integrability conditions: {reasons}")


def validate_assumptions(ff: RadialMeasure, rel_tol: float = 1e-11) -> AssumptionReport:
    """Report which of M_{+1}, M_{-1}, M_{-2} are finite, with values."""
    finite = {}
    values = {}
    failures = []
    for s in (1, -1, -2):
        val = moment(ff, s, rel_tol)
        values[s] = val
        finite[s] = math.isfinite(val)
        if not finite[s]:
            failures.append(_ASSUMPTION_LABELS[s])
    return AssumptionReport(
        passed=not failures, finite=finite, failures=tuple(failures), values=values)


# ---------------------------------------------------------------------------
# JSON serialization (schema documented in docs/measure_schema.md)

def measure_to_json(ff: RadialMeasure) -> dict:
    p = ff.profile
    if isinstance(p, SharpCutoff):
        profile = {"type": "sharp", "lambda": p.lam}
    elif isinstance(p, GaussianProfile):
        profile = {"type": "gaussian", "sigma": p.sigma}
    elif isinstance(p, PointMasses):
        profile = {"type": "point_masses",
                   "atoms": [{"omega": w, "weight": W} for w, W in p.atoms]}
    else:
        profile = {"type": "tabulated",
                   "points": [[r, v] for r, v in zip(p.radii, p.values)]}
    return {"dimension": ff.dimension, "profile": profile}


def _require_keys(obj: dict, required: set, context: str) -> None:
    extra = set(obj) - required
    if extra:
        raise MeasureError(f"unknown keys {sorted(extra)} in {context}")
    missing = required - set(obj)
    if missing:
        raise MeasureError(f"missing keys {sorted(missing)} in {context}")


def measure_from_json(obj: dict) -> RadialMeasure:
    if not isinstance(obj, dict):
        raise MeasureError("measure must be a JSON object")
    _require_keys(obj, {"dimension", "profile"}, "measure")
    prof = obj["profile"]
    if not isinstance(prof, dict) or "type" not in prof:
        raise MeasureError("profile must be an object with a 'type' key")
    kind = prof["type"]
    if kind == "sharp":
        _require_keys(prof, {"type", "lambda"}, "sharp profile")
        profile = SharpCutoff(float(prof["lambda"]))
    elif kind == "gaussian":
        _require_keys(prof, {"type", "sigma"}, "gaussian profile")
        profile = GaussianProfile(float(prof["sigma"]))
    elif kind == "point_masses":
        _require_keys(prof, {"type", "atoms"}, "point_masses profile")
        atoms = []
        for atom in prof["atoms"]:
            if isinstance(atom, dict):
                _require_keys(atom, {"omega", "weight"}, "atom")
                atoms.append((atom["omega"], atom["weight"]))
            else:
                atoms.append(tuple(atom))
        profile = PointMasses(atoms)
    elif kind == "tabulated":
        _require_keys(prof, {"type", "points"}, "tabulated profile")
        profile = Tabulated(prof["points"])
    else:
        raise MeasureError(f"unknown profile type {kind!r}")
    return RadialMeasure(dimension=obj["dimension"], profile=profile)
