"""Closed-form maximal-violation criteria from the correlation spectrum.

Every quantity here depends on a source only through the descending
eigenvalues (t1, t2, t3) of T^T T, where T is the Pauli correlation matrix.
All maxima are over projective qubit measurements; the classical bound for
each expression is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import jacobi
from .errors import EmptyNetworkError, ValidationError
from .qstate import CorrelationMatrix, TwoQubitState, correlation_matrix

_CLAMP_TOL = 1e-12
_UPPER_TOL = 1e-9


@dataclass(frozen=True)
class TSpectrum:
    """Descending eigenvalues of T^T T (squared singular values of T)."""

    t1: float
    t2: float
    t3: float

    def __post_init__(self):
        values = [self.t1, self.t2, self.t3]
        for name, value in zip(("t1", "t2", "t3"), values):
            if value < -_CLAMP_TOL:
                raise ValidationError(f"{name}={value:.3e} below zero beyond tolerance")
        clamped = [0.0 if v < 0.0 else float(v) for v in values]
        if not clamped[0] >= clamped[1] >= clamped[2]:
            raise ValidationError(f"spectrum not descending: {tuple(clamped)}")
        if clamped[0] > 1.0 + _UPPER_TOL:
            raise ValidationError(f"t1={clamped[0]:.6g} exceeds 1 beyond tolerance")
        object.__setattr__(self, "t1", clamped[0])
        object.__setattr__(self, "t2", clamped[1])
        object.__setattr__(self, "t3", clamped[2])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t1, self.t2, self.t3)


def t_spectrum(corr: CorrelationMatrix) -> TSpectrum:
    """Spectrum of T^T T, descending, tiny negatives clamped to zero."""
    gram = corr.t.T @ corr.t
    eigs = jacobi.eigvalsh_symmetric(gram)
    return TSpectrum(float(eigs[2]), float(eigs[1]), float(eigs[0]))


def _spectrum_of(state: TwoQubitState) -> TSpectrum:
    return t_spectrum(correlation_matrix(state))


def chsh_max(state: TwoQubitState) -> float:
    """Maximal CHSH value sqrt(t1 + t2); above 1 iff the state violates CHSH."""
    sp = _spectrum_of(state)
    return math.sqrt(sp.t1 + sp.t2)


def bilocality_max(state_ab: TwoQubitState, state_bc: TwoQubitState) -> float:
    """Maximal bilocality value sqrt(sqrt(t1 t1') + sqrt(t2 t2'))."""
    sa = _spectrum_of(state_ab)
    sc = _spectrum_of(state_bc)
    return math.sqrt(math.sqrt(sa.t1 * sc.t1) + math.sqrt(sa.t2 * sc.t2))


def star_max(states: Iterable[TwoQubitState]) -> float:
    """Maximal n-branch star value sqrt((prod t1)^(1/n) + (prod t2)^(1/n))."""
    spectra = [_spectrum_of(s) for s in states]
    if not spectra:
        raise EmptyNetworkError("star network needs at least one source state")
    n = len(spectra)
    prod1 = math.prod(sp.t1 for sp in spectra)
    prod2 = math.prod(sp.t2 for sp in spectra)
    return math.sqrt(prod1 ** (1.0 / n) + prod2 ** (1.0 / n))


def phi_plus_comparison(state: TwoQubitState) -> tuple[float, float]:
    """(bilocality, CHSH) maxima when the other source is a perfect Bell pair.

    With one source maximally entangled, both spectra factors of the pair
    criterion collapse onto the remaining state: the bilocality maximum is
    sqrt(sqrt(t1) + sqrt(t2)) and the CHSH maximum is sqrt(t1 + t2), so a
    noisy source always violates bilocality at least as easily as CHSH.
    """
    sp = _spectrum_of(state)
    biloc = math.sqrt(math.sqrt(sp.t1) + math.sqrt(sp.t2))
    chsh = math.sqrt(sp.t1 + sp.t2)
    return (biloc, chsh)


@dataclass(frozen=True)
class MaxReport:
    """Per-link CHSH maxima plus the joint network maximum for one network."""

    chsh_per_link: tuple[float, ...]
    biloc_or_star: float | None
    spectra: tuple[TSpectrum, ...]

    def __post_init__(self):
        if len(self.chsh_per_link) == 2 and self.biloc_or_star is not None:
            slack = self.biloc_or_star**2 - self.chsh_per_link[0] * self.chsh_per_link[1]
            if slack > 1e-12:
                raise ValidationError(
                    f"pair maximum squared exceeds the CHSH product by {slack:.3e}"
                )


def network_report(states: Sequence[TwoQubitState]) -> MaxReport:
    """Assemble spectra, per-link CHSH maxima, and the network maximum."""
    spectra = tuple(_spectrum_of(s) for s in states)
    if not spectra:
        raise EmptyNetworkError("network report needs at least one source state")
    chsh = tuple(math.sqrt(sp.t1 + sp.t2) for sp in spectra)
    joint = None
    if len(spectra) >= 2:
        n = len(spectra)
        prod1 = math.prod(sp.t1 for sp in spectra)
        prod2 = math.prod(sp.t2 for sp in spectra)
        joint = math.sqrt(prod1 ** (1.0 / n) + prod2 ** (1.0 / n))
    return MaxReport(chsh_per_link=chsh, biloc_or_star=joint, spectra=spectra)
