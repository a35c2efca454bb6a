"""Partial trace, Schmidt spectra, entanglement entropies, and the
eigenvector-statistics diagnostics of saturated chaotic states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .evolve import PureState
from .spincore import SpinQuantum

_HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class ReducedDensityMatrix:
    spin: SpinQuantum
    entries: np.ndarray

    def __post_init__(self):
        n = self.spin.dim
        if self.entries.shape != (n, n):
            raise ValueError(f"RDM must be {n}x{n}")
        if np.abs(self.entries - self.entries.conj().T).max() > _HERMITICITY_TOL:
            raise ValueError("RDM not Hermitian within tolerance")
        tr = np.trace(self.entries).real
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"RDM trace {tr!r} too far from 1")


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Eigenvalues (descending, clipped at 0) and eigenvectors of an RDM.

    clip_magnitude records the largest negative eigenvalue removed by
    clipping; roundoff-scale values (< 1e-10) are expected, anything larger
    indicates a broken input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clip_magnitude: float


@dataclass(frozen=True)
class ComponentStats:
    mean_re: float
    var_re: float
    mean_im: float
    var_im: float
    ks_exponential: float


def reduce(state: PureState, subsystem: int) -> ReducedDensityMatrix:
    """Partial trace of |psi><psi| over the other top."""
    a = state.amplitudes
    if subsystem == 1:
        rho = a @ a.conj().T
    elif subsystem == 2:
        rho = a.T @ a.conj()
    else:
        raise ValueError(f"subsystem must be 1 or 2, got {subsystem}")
    return ReducedDensityMatrix(spin=state.spin, entries=rho)


def schmidt(rdm: Union[ReducedDensityMatrix, np.ndarray]) -> SchmidtSpectrum:
    """Full Hermitian eigendecomposition, eigenvalues descending."""
    entries = rdm.entries if isinstance(rdm, ReducedDensityMatrix) else np.asarray(rdm)
    if np.abs(entries - entries.conj().T).max() > _HERMITICITY_TOL:
        raise ValueError("matrix not Hermitian within tolerance")
    w, v = np.linalg.eigh(entries)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    clip = float(max(0.0, -w.min())) if w.size else 0.0
    return SchmidtSpectrum(eigenvalues=np.maximum(w, 0.0), eigenvectors=v, clip_magnitude=clip)


def entropies(spectrum: SchmidtSpectrum) -> Tuple[float, float]:
    """(S_V, S_R) = (-sum lam ln lam, 1 - sum lam^2); 0 ln 0 := 0 by branch."""
    lam = spectrum.eigenvalues
    pos = lam[lam > 0.0]
    s_v = float(-(pos * np.log(pos)).sum())
    s_r = float(1.0 - (lam * lam).sum())
    return s_v, s_r


def linear_entropy_direct(state: PureState, subsystem: int = 1) -> float:
    """1 - Tr rho^2 without an eigendecomposition (Frobenius norm of the RDM)."""
    rho = reduce(state, subsystem).entries
    return float(1.0 - (np.abs(rho) ** 2).sum())


def subsystem_symmetry_check(state: PureState) -> float:
    """|S_V(rho_1) - S_V(rho_2)|; zero for any exact Schmidt decomposition."""
    sv1, _ = entropies(schmidt(reduce(state, 1)))
    sv2, _ = entropies(schmidt(reduce(state, 2)))
    return abs(sv1 - sv2)


def ks_exponential(values: np.ndarray) -> float:
    """One-sample Kolmogorov-Smirnov statistic against the unit exponential."""
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    cdf = 1.0 - np.exp(-x)
    i = np.arange(1, n + 1)
    return float(np.maximum(i / n - cdf, cdf - (i - 1) / n).max())


def component_statistics(vector: np.ndarray) -> ComponentStats:
    """Moments of Re/Im parts and the KS statistic of N |c|^2 vs Exp(1).

    GUE-distributed vectors give Gaussian components and exponential N |c|^2;
    the asymptotic 5% KS band is 1.36 / sqrt(N).
    """
    v = np.asarray(vector)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"vector norm {nrm!r} too far from 1")
    n = len(v)
    scaled = n * np.abs(v) ** 2
    return ComponentStats(
        mean_re=float(v.real.mean()),
        var_re=float(v.real.var()),
        mean_im=float(v.imag.mean()),
        var_im=float(v.imag.var()),
        ks_exponential=ks_exponential(scaled),
    )
