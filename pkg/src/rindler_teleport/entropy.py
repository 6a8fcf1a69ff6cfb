"""Von Neumann entropies of Rob's states and the information gain from
learning Alice's measurement result. Entropies are in bits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from scipy.linalg import eigvalsh_tridiagonal

from .fock import TOL, ContractViolation, DensityOp, ModeSpec, Tolerances, eigenvalues_hermitian
from .rindler import REGION_I, SqueezeParam, cutoff_for, thermal_vacuum, thermal_weights
from .teleport import OUTCOMES, InputState, bands_to_matrix, outcome_coefficients, rob_state_bands

HALF = 1 / math.sqrt(2.0)


def entropy_of_spectrum(lam: np.ndarray, tol: Tolerances = TOL) -> float:
    lam = np.asarray(lam, dtype=float)
    if lam.size and lam.min() < -tol.psd_floor:
        raise ContractViolation(f"eigenvalue {lam.min():.3g} below PSD floor")
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho: DensityOp, tol: Tolerances = TOL) -> float:
    return entropy_of_spectrum(eigenvalues_hermitian(rho, tol), tol)


def thermal_entropy_closed_form(p: SqueezeParam) -> float:
    """Entropy of the untruncated thermal state, cosh^2 log cosh^2 - sinh^2 log sinh^2."""
    c2, s2 = p.cosh**2, p.sinh**2
    return c2 * math.log2(c2) - (s2 * math.log2(s2) if s2 > 0 else 0.0)


def _band_entropy(diag: np.ndarray, sub: np.ndarray) -> float:
    # Hermitian tridiagonal is unitarily similar to the real one with |sub|
    return entropy_of_spectrum(eigvalsh_tridiagonal(diag.real, np.abs(sub)))


def pre_measurement_bands(s: InputState, p: SqueezeParam, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    parts = [rob_state_bands(o.x, o.y, p, cutoff)
             for o in (outcome_coefficients(l, m, s) for l, m in OUTCOMES)]
    diag = sum(d for d, _, _ in parts) / 4.0
    sub = sum(b for _, b, _ in parts) / 4.0
    return diag, sub


def post_measurement_bands(p: SqueezeParam, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    o = outcome_coefficients(0, 0, InputState(HALF, HALF))
    diag, sub, _ = rob_state_bands(o.x, o.y, p, cutoff)
    return diag, sub


def pre_measurement_state(s: InputState, p: SqueezeParam, cutoff: int) -> DensityOp:
    """Uniform average of the four conditional states: Rob's state before he
    learns which outcome Alice got. The off-diagonal band cancels."""
    diag, sub = pre_measurement_bands(s, p, cutoff)
    return DensityOp((ModeSpec(cutoff, REGION_I),), bands_to_matrix(diag, sub))


def post_measurement_state(p: SqueezeParam, cutoff: int) -> DensityOp:
    """Conditional state for input (|0> + |1>)/sqrt2 and outcome (0, 0)."""
    return DensityOp((ModeSpec(cutoff, REGION_I),), bands_to_matrix(*post_measurement_bands(p, cutoff)))


def vacuum_entropy(p: SqueezeParam, cutoff: int) -> float:
    return von_neumann_entropy(thermal_vacuum(p, cutoff))


def qubit_block(x: complex, y: complex, p: SqueezeParam) -> np.ndarray:
    """Untruncated {|0>_I, |1>_I} block of the conditional state for (x, y)."""
    c, t = p.cosh, p.tanh
    x2, y2 = abs(x) ** 2, abs(y) ** 2
    b01 = x * np.conj(y) / c**3
    return np.array([[x2 / c**2, b01], [np.conj(b01), (t**2 * x2 + y2 / c**2) / c**2]])


def _block_entropy(block: np.ndarray) -> float:
    # 2x2 Hermitian eigenvalues: mean +- sqrt(half-difference^2 + |off|^2)
    block = block / np.trace(block).real
    a, d, b = block[0, 0].real, block[1, 1].real, abs(block[0, 1])
    rad = math.hypot((a - d) / 2, b)
    return entropy_of_spectrum(np.array([(a + d) / 2 + rad, (a + d) / 2 - rad]))


def two_state_model_gain(p: SqueezeParam) -> float:
    """Information gain with both states cut down to their renormalized
    {|0>_I, |1>_I} block."""
    s = InputState(HALF, HALF)
    coeffs = [outcome_coefficients(l, m, s) for l, m in OUTCOMES]
    pre = sum(qubit_block(o.x, o.y, p) for o in coeffs) / 4
    post = qubit_block(coeffs[0].x, coeffs[0].y, p)
    return _block_entropy(pre) - _block_entropy(post)


@dataclass(frozen=True)
class EntropyReport:
    r: float
    S_pre: float
    S_post: float
    S_vac: float
    dS_gain: float
    dS_gain_tsm: float
    cutoff: int


def info_gain(p: SqueezeParam, cutoff: int | None = None) -> EntropyReport:
    """Entropies of the pre-/post-measurement and vacuum states at one r.

    Works on the band representation, so large cutoffs stay cheap.
    """
    n = cutoff_for(p) if cutoff is None else cutoff
    s_pre = _band_entropy(*pre_measurement_bands(InputState(HALF, HALF), p, n))
    s_post = _band_entropy(*post_measurement_bands(p, n))
    s_vac = entropy_of_spectrum(thermal_weights(p, n))
    return EntropyReport(p.r, s_pre, s_post, s_vac, s_pre - s_post, two_state_model_gain(p), n)
