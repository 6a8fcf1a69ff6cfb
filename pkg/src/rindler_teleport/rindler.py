"""Single Rindler-mode expansions of Minkowski states and Rindler kinematics.

The physics core is dimensionless: the squeezing parameter r, the
Rindler frequency Omega = omega_R / (a/c) and a dimensionless proper
time. SI units only enter through `r_from_physical`,
`unruh_temperature` and the CLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import constants as _sc

from .fock import TOL, ContractViolation, DensityOp, FockKet, ModeSpec, apply_ladder

REGION_I = "RegionI"
REGION_II = "RegionII"

# CODATA values as shipped by scipy.constants
PHYSICAL_CONSTANTS = {
    "hbar": _sc.hbar,  # J s
    "c": _sc.c,  # m / s
    "k_B": _sc.k,  # J / K
}

MIN_CUTOFF = 8
MAX_CUTOFF = 4096
DEFAULT_TAIL = 1e-12


class DomainError(ValueError):
    pass


def _log_tanh(r: float) -> float:
    if r < 0.5:
        return math.log(math.tanh(r))
    # tanh r is close to 1 here; avoid the cancellation in log(tanh r)
    e = math.exp(-2.0 * r)
    return math.log1p(-e) - math.log1p(e)


@dataclass(frozen=True)
class SqueezeParam:
    """Squeezing parameter r plus whatever physical context produced it.

    Only r is stored; the hyperbolic functions are recomputed on access so
    cosh^2 - sinh^2 = 1 holds to rounding. When the parameter came from
    (omega_R, acceleration) those are kept so that Omega and T_U survive
    an underflow of r to 0.
    """

    r: float
    omega_R: float | None = None
    acceleration: float | None = None
    underflow: bool = False

    def __post_init__(self):
        if not (self.r >= 0.0) or math.isinf(self.r):
            raise DomainError(f"r must be finite and >= 0, got {self.r}")

    @property
    def cosh(self) -> float:
        return math.cosh(self.r)

    @property
    def sinh(self) -> float:
        return math.sinh(self.r)

    @property
    def tanh(self) -> float:
        return math.tanh(self.r)

    @property
    def Omega(self) -> float:
        if self.omega_R is not None and self.acceleration is not None:
            return self.omega_R / (self.acceleration / PHYSICAL_CONSTANTS["c"])
        if self.r == 0.0:
            return math.inf
        return -_log_tanh(self.r) / math.pi

    @property
    def T_U(self) -> float | None:
        if self.acceleration is None:
            return None
        return unruh_temperature(self.acceleration)


def squeeze(r: float) -> SqueezeParam:
    return SqueezeParam(float(r))


def r_from_omega(Omega: float) -> SqueezeParam:
    """r with tanh r = exp(-pi * Omega)."""
    if not Omega > 0:
        raise DomainError(f"Omega must be > 0, got {Omega}")
    x = math.pi * Omega
    u = math.exp(-x)
    if u == 0.0:
        return SqueezeParam(0.0, underflow=True)
    if u < 0.5:
        r = math.atanh(u)
    else:
        # artanh(u) = (log1p(u) - log(1 - u)) / 2 with 1 - u = -expm1(-x)
        r = 0.5 * (math.log1p(u) - math.log(-math.expm1(-x)))
    return SqueezeParam(r)


def r_from_physical(omega_R: float, acceleration: float) -> SqueezeParam:
    """Squeezing for a Rindler mode of angular frequency omega_R (rad/s)
    seen with proper acceleration `acceleration` (m/s^2).

    For terrestrial accelerations r underflows to exactly 0 and the
    returned parameter carries ``underflow=True``.
    """
    if not omega_R > 0:
        raise DomainError(f"omega_R must be > 0, got {omega_R}")
    if not acceleration > 0:
        raise DomainError(f"acceleration must be > 0, got {acceleration}")
    Omega = omega_R / (acceleration / PHYSICAL_CONSTANTS["c"])
    p = r_from_omega(Omega)
    return SqueezeParam(p.r, omega_R=omega_R, acceleration=acceleration, underflow=p.underflow)


def omega_for_r(r: float) -> float:
    """Inverse of `r_from_omega`."""
    return squeeze(r).Omega


def unruh_temperature(acceleration: float) -> float:
    """Unruh temperature in kelvin, hbar a / (2 pi c k_B)."""
    if not acceleration > 0:
        raise DomainError(f"acceleration must be > 0, got {acceleration}")
    k = PHYSICAL_CONSTANTS
    return k["hbar"] * acceleration / (2.0 * math.pi * k["c"] * k["k_B"])


def cutoff_for(p: SqueezeParam | float, tail: float = DEFAULT_TAIL) -> int:
    """Smallest N whose discarded weight is <= tail for both the vacuum
    (tanh^(2N) r) and the one-particle expansion, clamped to
    [MIN_CUTOFF, MAX_CUTOFF].

    The one-particle tail carries an extra factor ~N, so the vacuum-only
    estimate is a starting point that is then stepped up.
    """
    p = p if isinstance(p, SqueezeParam) else squeeze(p)
    if p.r == 0.0:
        return MIN_CUTOFF
    n = max(math.ceil(math.log(tail) / (2.0 * _log_tanh(p.r))), MIN_CUTOFF)
    while n < MAX_CUTOFF and one_particle_tail(p, n) > tail:
        n += 1
    return int(min(n, MAX_CUTOFF))


def vacuum_tail(p: SqueezeParam, cutoff: int) -> float:
    """Weight of the squeezed vacuum beyond occupation cutoff-1."""
    return p.tanh ** (2 * cutoff)


def one_particle_tail(p: SqueezeParam, cutoff: int) -> float:
    """Weight of the one-particle expansion with n_I >= cutoff."""
    q = p.tanh**2
    k = cutoff - 1
    return q**k * (k + 1 - k * q)


class Expansion(NamedTuple):
    """A truncated, renormalized ket with its error accounting."""

    ket: FockKet
    tail: float  # analytic weight discarded by the truncation
    norm: float  # norm of the truncated ket before renormalization


def _rindler_modes(cutoff: int) -> tuple[ModeSpec, ModeSpec]:
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    return ModeSpec(cutoff, REGION_I), ModeSpec(cutoff, REGION_II)


def _geometric(p: SqueezeParam, n: np.ndarray) -> np.ndarray:
    # tanh^n r; 0**0 = 1 covers r = 0
    return np.power(p.tanh, n)


def _squeezed_amplitudes(p: SqueezeParam, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff)
    amps = np.zeros((cutoff, cutoff), dtype=complex)
    amps[n, n] = _geometric(p, n) / p.cosh
    return amps


def squeezed_vacuum(p: SqueezeParam, cutoff: int) -> Expansion:
    """Minkowski vacuum as the two-mode squeezed state over regions I and II."""
    modes = _rindler_modes(cutoff)
    raw = FockKet(modes, _squeezed_amplitudes(p, cutoff))
    ket, norm = raw.normalized()
    return Expansion(ket, vacuum_tail(p, cutoff), norm)


def _one_particle_closed_form(p: SqueezeParam, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff - 1)
    amps = np.zeros((cutoff, cutoff), dtype=complex)
    amps[n + 1, n] = _geometric(p, n) * np.sqrt(n + 1.0) / p.cosh**2
    return amps


def one_particle_via_ladder(p: SqueezeParam, cutoff: int) -> np.ndarray:
    """Unnormalized (cosh r b_I^dag - sinh r b_II) acting on the squeezed vacuum.

    The vacuum is built with one extra level and the result cut back to
    `cutoff`, so every retained amplitude sees both of its contributions.
    """
    modes = _rindler_modes(cutoff + 1)
    vac = FockKet(modes, _squeezed_amplitudes(p, cutoff + 1))
    up, _ = apply_ladder(vac, REGION_I, "create")
    down, _ = apply_ladder(vac, REGION_II, "annihilate")
    amps = p.cosh * up.amplitudes - p.sinh * down.amplitudes
    return amps[:cutoff, :cutoff]


def minkowski_one_particle(p: SqueezeParam, cutoff: int, check: bool = True) -> Expansion:
    """Minkowski one-particle state a_M^dag |0>_M expanded over regions I and II.

    With ``check`` the closed form is compared against the ladder-operator
    construction and a ContractViolation is raised on disagreement.
    """
    modes = _rindler_modes(cutoff)
    amps = _one_particle_closed_form(p, cutoff)
    if check:
        dev = float(np.max(np.abs(amps - one_particle_via_ladder(p, cutoff))))
        if dev > TOL.elementwise:
            raise ContractViolation(f"closed form and ladder construction differ by {dev:.3g}")
    ket, norm = FockKet(modes, amps).normalized()
    return Expansion(ket, one_particle_tail(p, cutoff), norm)


def thermal_weights(p: SqueezeParam, cutoff: int) -> np.ndarray:
    """Geometric occupation weights (1 - q) q^n, q = tanh^2 r, renormalized on 0..cutoff-1."""
    w = _geometric(p, 2 * np.arange(cutoff)) / p.cosh**2
    return w / w.sum()


def thermal_vacuum(p: SqueezeParam, cutoff: int) -> DensityOp:
    """Region I reduction of the Minkowski vacuum: a thermal state."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    return DensityOp((ModeSpec(cutoff, REGION_I),), np.diag(thermal_weights(p, cutoff)))


def annihilator_tail_bound(p: SqueezeParam, cutoff: int) -> float:
    """Norm that truncation can leave behind when the Unruh annihilator acts
    on the truncated vacuum: sinh r times the top coefficient times sqrt(N),
    plus a rounding allowance."""
    top = p.tanh ** (cutoff - 1) / p.cosh
    norm = math.sqrt(max(1.0 - vacuum_tail(p, cutoff), 0.0)) or 1.0
    exact = p.sinh * top * math.sqrt(cutoff) / norm
    rounding = 16 * np.finfo(float).eps * math.sqrt(cutoff) * (p.cosh + p.sinh)
    return exact * (1 + 1e-12) + rounding


def unruh_annihilator_defect(p: SqueezeParam, cutoff: int) -> float:
    """|| (cosh r b_I - sinh r b_II^dag) |0>_M ||, counting the amplitude that
    b_II^dag pushes past the cutoff."""
    vac = squeezed_vacuum(p, cutoff).ket
    down, _ = apply_ladder(vac, REGION_I, "annihilate")
    up, lost = apply_ladder(vac, REGION_II, "create")
    in_space = (p.cosh * down - p.sinh * up).norm()
    outside = p.sinh * math.sqrt(cutoff) * lost
    return math.hypot(in_space, outside)


def apply_proper_time_phase(
    k: FockKet, p: SqueezeParam, tau: float, omega: float | None = None
) -> FockKet:
    """Evolve a region I/II ket by exp(-i H_R tau), H_R = Omega (n_I - n_II).

    `omega` overrides p.Omega; it is required at r = 0 where Omega is
    infinite and the phase is undefined.
    """
    w = p.Omega if omega is None else omega
    if tau == 0.0:
        return k
    if not math.isfinite(w):
        raise DomainError("Omega is infinite at r = 0; pass omega explicitly")
    ai, aii = k.axis(REGION_I), k.axis(REGION_II)
    shape = [1] * len(k.modes)
    shape[ai] = k.modes[ai].cutoff
    n_i = np.arange(k.modes[ai].cutoff).reshape(shape)
    shape = [1] * len(k.modes)
    shape[aii] = k.modes[aii].cutoff
    n_ii = np.arange(k.modes[aii].cutoff).reshape(shape)
    phase = np.exp(-1j * w * tau * (n_i - n_ii))
    return FockKet(k.modes, k.amplitudes * phase)


def region_phase(k: FockKet, label: str, angle: float) -> FockKet:
    """Multiply occupation n of one mode by exp(-i angle n)."""
    ax = k.axis(label)
    shape = [1] * len(k.modes)
    shape[ax] = k.modes[ax].cutoff
    n = np.arange(k.modes[ax].cutoff).reshape(shape)
    return FockKet(k.modes, k.amplitudes * np.exp(-1j * angle * n))


# -- kinematics (c = 1) ------------------------------------------------------


@dataclass(frozen=True)
class WorldlineEvent:
    tau: float
    t: float
    z: float
    eta: float
    zeta: float


def worldline(acceleration: float, tau: float) -> WorldlineEvent:
    """Event at proper time tau on the uniformly accelerated worldline."""
    if not acceleration > 0:
        raise DomainError(f"acceleration must be > 0, got {acceleration}")
    a = acceleration
    return WorldlineEvent(tau, math.sinh(a * tau) / a, math.cosh(a * tau) / a, a * tau, 1.0 / a)


def rindler_to_minkowski(eta: float, zeta: float) -> tuple[float, float]:
    if not zeta > 0:
        raise DomainError(f"zeta must be > 0 in region I, got {zeta}")
    return zeta * math.sinh(eta), zeta * math.cosh(eta)


def minkowski_to_rindler(t: float, z: float) -> tuple[float, float]:
    """Inverse chart map on region I (z > |t|).

    Absolute error in eta grows like eps * exp(2|eta|) because z - t is
    recovered by cancellation; see `rindler_to_minkowski`.
    """
    if not z > abs(t):
        raise DomainError(f"(t={t}, z={z}) is outside region I")
    zeta = math.sqrt((z - t) * (z + t))
    eta = 0.5 * (math.log(z + t) - math.log(z - t))
    return eta, zeta


def horizon_crossing_time(acceleration: float, alice_z: float | None = None, c: float = 1.0) -> float:
    """Coordinate time at which an inertial observer at fixed z crosses the
    future horizon t = z of the accelerated observer.

    By default the inertial observer sits where the two worldlines meet at
    tau = 0, z = c^2 / a, giving t = c / a.
    """
    if not acceleration > 0:
        raise DomainError(f"acceleration must be > 0, got {acceleration}")
    z = c**2 / acceleration if alice_z is None else alice_z
    return z / c
