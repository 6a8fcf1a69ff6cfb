"""Dense linear algebra on small truncated tensor-product Fock spaces.

Kets are stored as numpy arrays shaped by the per-mode cutoffs, so a
two-mode ket with cutoffs (N, M) is an (N, M) complex array. Density
operators are stored as plain square matrices of side prod(cutoffs).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal


@dataclass(frozen=True)
class Tolerances:
    elementwise: float = 1e-12
    trace: float = 1e-10
    psd_floor: float = 1e-10
    eig_sum: float = 1e-9


TOL = Tolerances()


class ContractViolation(ValueError):
    """A numerical contract (normalization, Hermiticity, PSD) does not hold."""


class CompositionError(ValueError):
    """Mode spaces cannot be combined or do not match."""


@dataclass(frozen=True)
class ModeSpec:
    cutoff: int
    label: str

    def __post_init__(self):
        if int(self.cutoff) < 1:
            raise ValueError(f"mode {self.label!r}: cutoff must be >= 1, got {self.cutoff}")


def _check_labels(modes: Sequence[ModeSpec]) -> tuple[ModeSpec, ...]:
    modes = tuple(modes)
    labels = [m.label for m in modes]
    if len(set(labels)) != len(labels):
        raise CompositionError(f"duplicate mode labels in {labels}")
    return modes


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FockKet:
    modes: tuple[ModeSpec, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        modes = _check_labels(self.modes)
        shape = tuple(m.cutoff for m in modes)
        amps = np.array(self.amplitudes, dtype=complex).reshape(shape)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.modes)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def is_normalized(self, tol: float = TOL.elementwise) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalized(self) -> tuple["FockKet", float]:
        """Return the unit-norm ket and the norm it was divided by."""
        n = self.norm()
        if n == 0.0:
            raise ContractViolation("cannot normalize the zero ket")
        return FockKet(self.modes, self.amplitudes / n), n

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise IndexError(f"unknown mode label {label!r}; have {self.labels}") from None

    def __add__(self, other: "FockKet") -> "FockKet":
        _same_space(self.modes, other.modes)
        return FockKet(self.modes, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "FockKet") -> "FockKet":
        _same_space(self.modes, other.modes)
        return FockKet(self.modes, self.amplitudes - other.amplitudes)

    def __mul__(self, c: complex) -> "FockKet":
        return FockKet(self.modes, c * self.amplitudes)

    __rmul__ = __mul__

    def inner(self, other: "FockKet") -> complex:
        """<self|other>."""
        _same_space(self.modes, other.modes)
        return complex(np.vdot(self.vector, other.vector))


@dataclass(frozen=True)
class DensityOp:
    modes: tuple[ModeSpec, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        modes = _check_labels(self.modes)
        dim = int(np.prod([m.cutoff for m in modes]))
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise CompositionError(f"matrix shape {mat.shape} does not match modes (dim {dim})")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(m.label for m in self.modes)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def check(self, normalized: bool = True, tol: Tolerances = TOL) -> "DensityOp":
        """Raise ContractViolation unless Hermitian, PSD and (optionally) unit trace."""
        if self.hermiticity_error() > tol.elementwise:
            raise ContractViolation(f"not Hermitian (max deviation {self.hermiticity_error():.3g})")
        if normalized and abs(self.trace() - 1.0) > tol.trace:
            raise ContractViolation(f"trace {self.trace()!r} differs from 1")
        lam = eigenvalues_hermitian(self, tol)
        if lam[-1] < -tol.psd_floor:
            raise ContractViolation(f"negative eigenvalue {lam[-1]:.3g}")
        return self


def _same_space(a: Sequence[ModeSpec], b: Sequence[ModeSpec]) -> None:
    if tuple(a) != tuple(b):
        raise CompositionError(f"mode spaces differ: {tuple(a)} vs {tuple(b)}")


def make_ket(modes: Sequence[ModeSpec], entries: Mapping[tuple[int, ...], complex]) -> FockKet:
    modes = _check_labels(modes)
    amps = np.zeros(tuple(m.cutoff for m in modes), dtype=complex)
    for occ, value in entries.items():
        occ = tuple(occ) if isinstance(occ, Iterable) else (occ,)
        if len(occ) != len(modes):
            raise IndexError(f"occupation tuple {occ} has {len(occ)} entries for {len(modes)} modes")
        for n, m in zip(occ, modes):
            if not 0 <= n < m.cutoff:
                raise IndexError(f"occupation {n} out of range for mode {m.label!r} (cutoff {m.cutoff})")
        amps[occ] += value
    return FockKet(modes, amps)


def basis_ket(modes: Sequence[ModeSpec], occ: tuple[int, ...]) -> FockKet:
    return make_ket(modes, {tuple(occ): 1.0})


def tensor(a: FockKet, b: FockKet) -> FockKet:
    modes = a.modes + b.modes
    if set(a.labels) & set(b.labels):
        raise CompositionError(f"shared mode labels {sorted(set(a.labels) & set(b.labels))}")
    return FockKet(modes, np.multiply.outer(a.amplitudes, b.amplitudes))


def outer(k: FockKet, tol: float = TOL.elementwise) -> DensityOp:
    if not k.is_normalized(tol):
        raise ContractViolation(f"outer() needs a normalized ket, squared norm is {k.norm() ** 2!r}")
    v = k.vector
    return DensityOp(k.modes, np.outer(v, v.conj()))


def reduced_density(k: FockKet, keep: Iterable[str]) -> DensityOp:
    """Partial trace of |k><k| computed straight from the ket.

    Avoids forming the full outer product, which matters for the
    (2, 2, N, N) teleportation kets.
    """
    keep_axes = sorted(k.axis(lbl) for lbl in set(keep))
    if not keep_axes:
        raise ValueError("keep must name at least one mode")
    drop_axes = [i for i in range(len(k.modes)) if i not in keep_axes]
    psi = np.transpose(k.amplitudes, keep_axes + drop_axes)
    d_keep = int(np.prod([k.modes[i].cutoff for i in keep_axes]))
    psi = psi.reshape(d_keep, -1)
    return DensityOp(tuple(k.modes[i] for i in keep_axes), psi @ psi.conj().T)


def partial_trace(rho: DensityOp, keep: Iterable[str]) -> DensityOp:
    keep = set(keep)
    unknown = keep - set(rho.labels)
    if unknown:
        raise IndexError(f"unknown mode labels {sorted(unknown)}; have {rho.labels}")
    if not keep:
        raise ValueError("keep must name at least one mode")
    dims = [m.cutoff for m in rho.modes]
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    keep_axes = [i for i, lbl in enumerate(rho.labels) if lbl in keep]
    # einsum subscripts: row index i -> letter i, column index -> letter n+i,
    # traced modes share the row letter
    row = list(range(n))
    col = [i if i not in keep_axes else n + i for i in range(n)]
    out = keep_axes + [n + i for i in keep_axes]
    reduced = np.einsum(t, row + col, out)
    d = int(np.prod([dims[i] for i in keep_axes]))
    return DensityOp(tuple(rho.modes[i] for i in keep_axes), reduced.reshape(d, d))


def apply_ladder(k: FockKet, mode: str, kind: str) -> tuple[FockKet, float]:
    """Apply b or b^dagger on one mode.

    Returns the new ket and the norm of the top-level amplitudes that
    creation discarded (always 0 for annihilation). The state actually
    lost is sqrt(cutoff) times that.
    """
    ax = k.axis(mode)
    cutoff = k.modes[ax].cutoff
    a = np.moveaxis(k.amplitudes, ax, 0)
    out = np.zeros_like(a)
    n = np.arange(cutoff, dtype=float).reshape((-1,) + (1,) * (a.ndim - 1))
    lost = 0.0
    if kind == "create":
        # |n> -> sqrt(n+1) |n+1>
        out[1:] = np.sqrt(n[:-1] + 1.0) * a[:-1]
        lost = float(np.linalg.norm(a[-1]))
    elif kind == "annihilate":
        out[:-1] = np.sqrt(n[1:]) * a[1:]
    else:
        raise ValueError(f"kind must be 'create' or 'annihilate', got {kind!r}")
    return FockKet(k.modes, np.moveaxis(out, 0, ax)), lost


def _tridiagonal_parts(m: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    d = m.shape[0]
    if d < 3:
        return None
    if np.any(np.triu(m, 2)) or np.any(np.tril(m, -2)):
        return None
    return np.diag(m).real, np.abs(np.diag(m, -1))


def eigenvalues_hermitian(rho: DensityOp, tol: Tolerances = TOL) -> np.ndarray:
    """Real eigenvalues in descending order.

    Tridiagonal matrices (thermal and teleported states are) go through
    the O(N^2) tridiagonal solver; a Hermitian tridiagonal matrix is
    unitarily similar to the real one with |off-diagonal| entries.
    """
    m = rho.matrix
    if rho.hermiticity_error() > tol.elementwise:
        raise ContractViolation(f"not Hermitian (max deviation {rho.hermiticity_error():.3g})")
    parts = _tridiagonal_parts(m)
    if parts is not None:
        lam = eigvalsh_tridiagonal(*parts)
    else:
        lam = np.linalg.eigvalsh(m)
    return lam[::-1].copy()


def fidelity_pure(target: FockKet, rho: DensityOp, tol: float = TOL.elementwise) -> float:
    _same_space(target.modes, rho.modes)
    if not target.is_normalized(tol):
        raise ContractViolation("fidelity target must be normalized")
    v = target.vector
    f = np.vdot(v, rho.matrix @ v)
    if abs(f.imag) > tol:
        raise ContractViolation(f"fidelity has imaginary part {f.imag:.3g}")
    return float(f.real)
