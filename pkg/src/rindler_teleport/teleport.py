"""Teleportation from an inertial sender to a uniformly accelerated receiver.

Rob's conditional region I state is produced two independent ways:
`rob_state_analytic` evaluates the closed-form banded matrix, while
`rob_state_numeric` runs the textbook protocol on an explicit ket over
(AliceInput, AliceBell, RegionI, RegionII) and traces out region II.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .fock import (
    TOL,
    ContractViolation,
    DensityOp,
    FockKet,
    ModeSpec,
    basis_ket,
    fidelity_pure,
    make_ket,
    reduced_density,
    tensor,
)
from .rindler import (
    REGION_I,
    REGION_II,
    DomainError,
    SqueezeParam,
    apply_proper_time_phase,
    minkowski_one_particle,
    one_particle_tail,
    squeezed_vacuum,
    vacuum_tail,
)

ALICE_INPUT = "AliceInput"
ALICE_BELL = "AliceBell"
OUTCOMES = ((0, 0), (0, 1), (1, 0), (1, 1))

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


class DegenerateOutcome(ValueError):
    """Conditioning on a measurement result of (numerically) zero probability."""


@dataclass(frozen=True)
class InputState:
    alpha: complex
    beta: complex

    def __post_init__(self):
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1.0) > TOL.elementwise:
            raise ContractViolation(f"|alpha|^2 + |beta|^2 = {n!r}, expected 1")

    @classmethod
    def from_angle(cls, theta: float, phase: float = 0.0) -> "InputState":
        return cls(complex(math.cos(theta)), math.sin(theta) * cmath.exp(1j * phase))


@dataclass(frozen=True)
class OutcomeCoeffs:
    l: int
    m: int
    x: complex
    y: complex


def outcome_coefficients(l: int, m: int, s: InputState) -> OutcomeCoeffs:
    """Amplitudes (x, y) of the receiver's qubit after Alice measures |l m>."""
    a, b = complex(s.alpha), complex(s.beta)
    table = {
        (0, 0): (a, b),
        (0, 1): (b, a),
        (1, 0): (a, -b),
        (1, 1): (-b, a),
    }
    try:
        x, y = table[(l, m)]
    except KeyError:
        raise ValueError(f"outcome bits must be 0 or 1, got ({l}, {m})") from None
    return OutcomeCoeffs(l, m, x, y)


@dataclass(frozen=True)
class RobState:
    rho: DensityOp
    provenance: str  # "analytic" or "numeric"
    params: SqueezeParam
    coeffs: OutcomeCoeffs
    cutoff: int
    tau: float = 0.0
    omega: float | None = None
    # truncation bookkeeping: tails and pre-renormalization norms
    meta: dict = field(default_factory=dict, compare=False)

    def phase_angle(self) -> float:
        if self.tau == 0.0:
            return 0.0
        return (self.params.Omega if self.omega is None else self.omega) * self.tau


def _evolved_y(o: OutcomeCoeffs, p: SqueezeParam, tau: float, omega: float | None) -> complex:
    if tau == 0.0:
        return complex(o.y)
    w = p.Omega if omega is None else omega
    if not math.isfinite(w):
        raise DomainError("Omega is infinite at r = 0; pass omega explicitly")
    return complex(o.y) * cmath.exp(-1j * w * tau)


def rob_state_bands(
    x: complex, y: complex, p: SqueezeParam, cutoff: int
) -> tuple[np.ndarray, np.ndarray, dict]:
    """Diagonal and first sub-diagonal (rho[n+1, n]) of the conditional
    region I state for coefficients (x, y).

    The coherence x y* sits at rho[n, n+1] (ket |n> from the x-branch, bra
    <n+1| from the y-branch), so the returned sub-diagonal carries x* y.
    The x- and y-branches are renormalized separately over the truncated
    support, matching how the two Minkowski kets are truncated.
    """
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    x, y = complex(x), complex(y)
    c, t = p.cosh, p.tanh
    n = np.arange(cutoff)
    q_n = np.power(t, 2 * n)
    z0 = 1.0 - vacuum_tail(p, cutoff)
    z1 = 1.0 - one_particle_tail(p, cutoff)

    # n |y|^2 tanh^2n / (cosh^2 sinh^2) rewritten as n tanh^(2n-2) / cosh^4,
    # which stays finite at r = 0
    q_prev = np.zeros(cutoff)
    q_prev[1:] = q_n[:-1]
    diag = abs(x) ** 2 * q_n / c**2 / z0 + abs(y) ** 2 * n * q_prev / c**4 / z1
    k = n[:-1]
    # <n|rho|n+1> carries x y*; the lower band is its conjugate
    sub = (x * y.conjugate()).conjugate() * np.sqrt(k + 1.0) * q_n[:-1] / c**3 / math.sqrt(z0 * z1)
    meta = {"vacuum_tail": vacuum_tail(p, cutoff), "one_particle_tail": one_particle_tail(p, cutoff),
            "vacuum_norm": math.sqrt(z0), "one_particle_norm": math.sqrt(z1)}
    return diag, sub, meta


def bands_to_matrix(diag: np.ndarray, sub: np.ndarray) -> np.ndarray:
    n = len(diag)
    rho = np.zeros((n, n), dtype=complex)
    k = np.arange(n - 1)
    rho[k, k] = diag[:-1]
    rho[n - 1, n - 1] = diag[-1]
    rho[k + 1, k] = sub
    rho[k, k + 1] = sub.conjugate()
    return rho


def rob_state_analytic(
    o: OutcomeCoeffs,
    p: SqueezeParam,
    cutoff: int,
    tau: float = 0.0,
    omega: float | None = None,
) -> RobState:
    """Closed-form region I state after outcome (l, m), as a banded matrix."""
    if p.r < 0:
        raise DomainError("r must be >= 0")
    diag, sub, meta = rob_state_bands(o.x, _evolved_y(o, p, tau, omega), p, cutoff)
    rho = DensityOp((ModeSpec(cutoff, REGION_I),), bands_to_matrix(diag, sub))
    return RobState(rho, "analytic", p, o, cutoff, tau, omega, meta)


def _qubit(label: str) -> ModeSpec:
    return ModeSpec(2, label)


def apply_qubit_gate(k: FockKet, label: str, gate: np.ndarray) -> FockKet:
    ax = k.axis(label)
    amps = np.moveaxis(np.tensordot(gate, k.amplitudes, axes=([1], [ax])), 0, ax)
    return FockKet(k.modes, amps)


def cnot(k: FockKet, control: str, target: str) -> FockKet:
    ac, at = k.axis(control), k.axis(target)
    amps = np.array(k.amplitudes)
    idx1 = [slice(None)] * amps.ndim
    idx1[ac] = 1
    flipped = np.flip(amps[tuple(idx1)], axis=at - (1 if at > ac else 0)).copy()
    amps[tuple(idx1)] = flipped
    return FockKet(k.modes, amps)


def resource_state(p: SqueezeParam, cutoff: int) -> tuple[FockKet, dict]:
    """Bell pair (|0>|0>_M + |1>|1>_M)/sqrt2 with Rob's half expanded over regions I and II."""
    vac = squeezed_vacuum(p, cutoff)
    one = minkowski_one_particle(p, cutoff)
    a0 = basis_ket((_qubit(ALICE_BELL),), (0,))
    a1 = basis_ket((_qubit(ALICE_BELL),), (1,))
    bell = (tensor(a0, vac.ket) + tensor(a1, one.ket)) * (1 / math.sqrt(2.0))
    meta = {"vacuum_tail": vac.tail, "one_particle_tail": one.tail,
            "vacuum_norm": vac.norm, "one_particle_norm": one.norm}
    return bell, meta


def teleport_ket(s: InputState, p: SqueezeParam, cutoff: int, tau: float = 0.0,
                 omega: float | None = None) -> tuple[FockKet, dict]:
    """Full four-mode ket after Alice's CNOT and Hadamard, before measurement."""
    psi = make_ket((_qubit(ALICE_INPUT),), {(0,): s.alpha, (1,): s.beta})
    bell, meta = resource_state(p, cutoff)
    k = tensor(psi, bell)
    if tau != 0.0:
        k = apply_proper_time_phase(k, p, tau, omega)
    k = cnot(k, ALICE_INPUT, ALICE_BELL)
    k = apply_qubit_gate(k, ALICE_INPUT, HADAMARD)
    return k, meta


def _project(k: FockKet, l: int, m: int) -> FockKet:
    amps = k.amplitudes[l, m]
    return FockKet(k.modes[2:], amps)


def outcome_probabilities(s: InputState, p: SqueezeParam, cutoff: int) -> dict[tuple[int, int], float]:
    k, _ = teleport_ket(s, p, cutoff)
    return {lm: _project(k, *lm).norm() ** 2 for lm in OUTCOMES}


def rob_state_numeric(
    o: OutcomeCoeffs,
    s: InputState,
    p: SqueezeParam,
    cutoff: int,
    tau: float = 0.0,
    omega: float | None = None,
) -> RobState:
    """Region I state from running the protocol on the explicit ket."""
    k, meta = teleport_ket(s, p, cutoff, tau, omega)
    rob = _project(k, o.l, o.m)
    prob = rob.norm() ** 2
    if prob < 1e-15:
        raise DegenerateOutcome(f"outcome ({o.l}, {o.m}) has probability {prob:.3g}")
    rob, _ = rob.normalized()

    # conditional ket must be x |0>_M + y |1>_M in the Rindler expansion
    vac = squeezed_vacuum(p, cutoff).ket
    one = minkowski_one_particle(p, cutoff, check=False).ket
    if tau != 0.0:
        one = apply_proper_time_phase(one, p, tau, omega)
    expected = vac * complex(o.x) + one * complex(o.y)
    dev = float(np.max(np.abs(rob.amplitudes - expected.amplitudes)))
    if dev > TOL.elementwise:
        raise ContractViolation(f"projected state deviates from x|0>_M + y|1>_M by {dev:.3g}")

    rho = reduced_density(rob, {REGION_I})
    meta = dict(meta, probability=prob)
    return RobState(rho, "numeric", p, o, cutoff, tau, omega, meta)


def thermally_teleported_target(o: OutcomeCoeffs, cutoff: int, phase: float = 0.0) -> FockKet:
    """x|0>_I + y e^{-i phase}|1>_I in the truncated region I space."""
    y = complex(o.y) * cmath.exp(-1j * phase)
    return make_ket((ModeSpec(cutoff, REGION_I),), {(0,): o.x, (1,): y})


def fidelity_numeric(rs: RobState, o: OutcomeCoeffs) -> float:
    """<phi|rho|phi> with phi the region I qubit state, co-evolved with rho."""
    target = thermally_teleported_target(o, rs.cutoff, rs.phase_angle())
    return fidelity_pure(target, rs.rho)


def fidelity_closed_form(o: OutcomeCoeffs, p: SqueezeParam) -> float:
    x2, y2 = abs(o.x) ** 2, abs(o.y) ** 2
    c = p.cosh
    return (x2**2 + (p.tanh**2 * x2 + y2 / c**2) * y2 + 2 * x2 * y2 / c) / c**2


def _fidelity_theta(theta: np.ndarray, p: SqueezeParam) -> np.ndarray:
    x2, y2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    c = p.cosh
    return (x2**2 + (p.tanh**2 * x2 + y2 / c**2) * y2 + 2 * x2 * y2 / c) / c**2


def averaged_fidelity(p: SqueezeParam, quadrature_points: int = 1001) -> float:
    """(1/pi) * integral over theta in [0, pi] of the fidelity for
    (x, y) = (cos theta, sin theta), by composite Simpson."""
    if quadrature_points < 3 or quadrature_points % 2 == 0:
        raise ValueError(f"quadrature_points must be odd and >= 3, got {quadrature_points}")
    theta = np.linspace(0.0, math.pi, quadrature_points)
    return float(simpson(_fidelity_theta(theta, p), x=theta) / math.pi)


def averaged_fidelity_closed_form(p: SqueezeParam) -> float:
    c = p.cosh
    return (3 / 8 + p.tanh**2 / 8 + (3 / 8) / c**2 + (1 / 4) / c) / c**2
