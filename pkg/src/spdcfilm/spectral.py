"""Two-photon spectrum of the film source and Hong-Ou-Mandel curves.

The joint spectral amplitude of the degenerate collinear pair is modeled
single-pass with per-frequency cavity field factors:

    Phi(W) = sinc(dk(W) L / 2) * A(v_p) * A(v0 + W) * A(v0 - W)

where v0 = v_p/2, W is the detuning of the signal from degeneracy in THz
(idler at -W), dk the collinear wavevector mismatch from the film index
model, and A the Airy field-enhancement factor of the film etalon

    A(v) = t / (1 - r1 r2 exp(2 i phi(v))),   phi = 2 pi n_f v L / c,

with r1, r2 the film/ambient and film/substrate Fresnel amplitude
coefficients and t the film/substrate transmission. This reproduces the
Fabry-Perot-limited ~50 THz intensity width; a full multilayer transfer-
matrix emission model is deliberately out of scope.

Frequency unit conventions: frequencies and detunings in THz, delays in
fs, lengths in nm; c = 299792.458 nm THz.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import AsymmetricSpectrum, GridTooNarrow, InvalidState
from .materials import resolve_index_model

C_NM_THZ = 299792.458  # speed of light in nm*THz


@dataclass(frozen=True)
class FilmStack:
    """Film etalon: thickness, index models, pump wavelength.

    Index models may be material names from the data file, plain numbers
    (constant index), or objects with an ``index(lam_um)`` method.
    """

    thickness_nm: float = 400.0
    film: object = "gap"
    substrate: object = "fused_silica"
    ambient: object = 1.0
    pump_nm: float = 638.0

    def __post_init__(self):
        if self.thickness_nm <= 0:
            raise ValueError("film thickness must be positive")

    def indices(self, nu_thz):
        """(n_film, n_substrate, n_ambient) at frequency nu (THz)."""
        lam_um = C_NM_THZ / np.asarray(nu_thz, dtype=float) * 1e-3
        n_f = resolve_index_model(self.film).index(lam_um)
        n_s = resolve_index_model(self.substrate).index(lam_um)
        n_a = resolve_index_model(self.ambient).index(lam_um)
        return n_f, n_s, n_a


@dataclass(frozen=True)
class SpectralAmplitude:
    """Complex pair amplitude on a uniform detuning grid, signal at v0 + W.

    ``response`` is an optional detector/filter intensity multiplier on the
    same grid; ``intensity`` folds it in.
    """

    omega_thz: np.ndarray
    phi: np.ndarray
    pump_nm: float
    response: np.ndarray | None = None

    @property
    def intensity(self) -> np.ndarray:
        base = np.abs(self.phi) ** 2
        return base if self.response is None else base * self.response

    @property
    def degenerate_nu_thz(self) -> float:
        return C_NM_THZ / self.pump_nm / 2.0


def default_grid(span_thz: float = 150.0, points: int = 4096) -> np.ndarray:
    """Uniform detuning grid, symmetric about zero."""
    return np.linspace(-span_thz, span_thz, points)


def _airy_factor(stack: FilmStack, nu_thz):
    n_f, n_s, n_a = stack.indices(nu_thz)
    r1 = (n_f - n_a) / (n_f + n_a)
    r2 = (n_f - n_s) / (n_f + n_s)
    t = 2.0 * n_f / (n_f + n_s)
    phase = 2.0 * np.pi * n_f * np.asarray(nu_thz) * stack.thickness_nm / C_NM_THZ
    return t / (1.0 - r1 * r2 * np.exp(2j * phase))


def _wavevector(stack: FilmStack, nu_thz):
    n_f, _, _ = stack.indices(nu_thz)
    return 2.0 * np.pi * n_f * np.asarray(nu_thz) / C_NM_THZ


def joint_spectrum(stack: FilmStack, grid=None) -> SpectralAmplitude:
    """Degenerate-pair spectral amplitude on the detuning grid (THz).

    The grid must cover at least +-100 THz; the default +-150 THz / 4096
    points resolves the ~10 fs interference features with margin.
    """
    omega = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if omega.max() < 100.0 or omega.min() > -100.0:
        raise GridTooNarrow(
            f"grid [{omega.min():g}, {omega.max():g}] THz must cover +-100 THz"
        )
    nu_p = C_NM_THZ / stack.pump_nm
    nu0 = nu_p / 2.0
    nu_s, nu_i = nu0 + omega, nu0 - omega

    dk = _wavevector(stack, nu_p) - _wavevector(stack, nu_s) - _wavevector(stack, nu_i)
    phase_mismatch = dk * stack.thickness_nm / 2.0
    phi = (
        np.sinc(phase_mismatch / np.pi)
        * _airy_factor(stack, nu_p)
        * _airy_factor(stack, nu_s)
        * _airy_factor(stack, nu_i)
    )
    return SpectralAmplitude(omega_thz=omega, phi=phi, pump_nm=stack.pump_nm)


def longpass_pair_response(
    spectrum: SpectralAmplitude, cuton_nm=(850.0, 990.0), edge_thz: float = 3.0
) -> np.ndarray:
    """Detection-band multiplier of the pump-rejection long-pass filters.

    Each filter transmits frequencies below its cut-on frequency
    c/cuton_nm with a logistic edge of width ``edge_thz``; both photons of
    a pair traverse every filter, so the pair response is the product of
    single-photon transmissions at v0 + W and v0 - W.
    """
    nu0 = spectrum.degenerate_nu_thz
    nu_s = nu0 + spectrum.omega_thz
    nu_i = nu0 - spectrum.omega_thz
    resp = np.ones_like(spectrum.omega_thz)
    for cuton in np.atleast_1d(cuton_nm):
        nu_max = C_NM_THZ / float(cuton)
        for nu in (nu_s, nu_i):
            resp = resp / (1.0 + np.exp((nu - nu_max) / edge_thz))
    return resp


def gaussian_response(spectrum: SpectralAmplitude, fwhm_thz: float) -> np.ndarray:
    """Gaussian pair-response multiplier centered on degeneracy."""
    return np.exp(-4.0 * np.log(2.0) * (spectrum.omega_thz / fwhm_thz) ** 2)


def lorentzian_response(spectrum: SpectralAmplitude, fwhm_thz: float) -> np.ndarray:
    """Lorentzian pair-response multiplier centered on degeneracy."""
    return 1.0 / (1.0 + (2.0 * spectrum.omega_thz / fwhm_thz) ** 2)


def apply_detector_response(
    spectrum: SpectralAmplitude, response
) -> SpectralAmplitude:
    """Fold a tabulated intensity multiplier into the spectrum.

    Multipliers compose: applying twice multiplies the stored response.
    """
    response = np.asarray(response, dtype=float)
    if response.shape != spectrum.omega_thz.shape:
        raise ValueError("response must be tabulated on the spectrum grid")
    if np.any(response < 0.0):
        raise ValueError("response must be nonnegative")
    merged = response if spectrum.response is None else spectrum.response * response
    return replace(spectrum, response=merged)


def intensity_fwhm(spectrum: SpectralAmplitude) -> float:
    """Full width at half maximum of the intensity lobe containing W = 0.

    The etalon produces side resonances far from degeneracy; the quoted
    spectral width is that of the degenerate lobe, found by hill-climbing
    from the grid center and interpolating the half-maximum crossings.
    """
    s = spectrum.intensity
    omega = spectrum.omega_thz
    i = len(s) // 2
    while 0 < i < len(s) - 1 and (s[i + 1] > s[i] or s[i - 1] > s[i]):
        i = i + 1 if s[i + 1] > s[i] else i - 1
    half = s[i] / 2.0
    lo = i
    while lo > 0 and s[lo] > half:
        lo -= 1
    hi = i
    while hi < len(s) - 1 and s[hi] > half:
        hi += 1
    if s[lo] > half or s[hi] > half:
        raise InvalidState("half-maximum crossing lies outside the grid")
    left = np.interp(half, [s[lo], s[lo + 1]], [omega[lo], omega[lo + 1]])
    right = np.interp(half, [s[hi], s[hi - 1]], [omega[hi], omega[hi - 1]])
    return float(right - left)


def _check_symmetric(spectrum: SpectralAmplitude, tol: float = 1e-9) -> np.ndarray:
    s = spectrum.intensity
    norm = float(s.sum())
    if norm <= 0.0:
        raise InvalidState("spectrum has zero total weight")
    if np.max(np.abs(s - s[::-1])) > tol * float(s.max()):
        raise AsymmetricSpectrum(
            "intensity is not symmetric in detuning; degenerate HOM analysis "
            "requires identical signal/idler marginals"
        )
    return s


def interference_contrast(spectrum: SpectralAmplitude, delays_fs) -> np.ndarray:
    """g(tau): normalized cosine transform of the spectral intensity.

    g(tau) = sum I(W) cos(2 pi W tau * 1e-3) / sum I(W); the 1e-3 converts
    THz * fs into cycles. Real and even for symmetric spectra, g(0) = 1.
    """
    s = _check_symmetric(spectrum)
    taus = np.atleast_1d(np.asarray(delays_fs, dtype=float))
    phases = 2.0e-3 * np.pi * np.outer(taus, spectrum.omega_thz)
    return (np.cos(phases) @ s) / s.sum()


def hom_curve(spectrum: SpectralAmplitude, delays_fs, mode: str = "dip"):
    """Normalized coincidence rate R(tau) = (1 -+ g(tau)) / 2.

    mode 'dip' is the orthogonal-analyzer (D-A) curve with R(0) = 0;
    mode 'peak' the parallel (D-D) curve with R(0) = 1. Both approach 1/2
    at delays far beyond the coherence time, and dip + peak = 1 exactly.
    """
    if mode not in ("dip", "peak"):
        raise ValueError(f"mode must be 'dip' or 'peak', got {mode!r}")
    taus = np.atleast_1d(np.asarray(delays_fs, dtype=float))
    g = interference_contrast(spectrum, taus)
    r = (1.0 - g) / 2.0 if mode == "dip" else (1.0 + g) / 2.0
    return list(zip(taus.tolist(), r.tolist()))


def hom_fwhm(spectrum: SpectralAmplitude, mode: str = "dip", tau_max_fs: float = 400.0) -> float:
    """Full width of the HOM dip (peak) at half its asymptotic depth.

    The dip R(tau) runs from 0 at tau = 0 to 1/2 at large delay; the
    half-depth points are where g crosses 1/2, and the width is twice the
    first crossing (the curve is even in tau).
    """
    coarse = np.linspace(0.0, tau_max_fs, 4001)
    g = interference_contrast(spectrum, coarse)
    below = np.where(g < 0.5)[0]
    if len(below) == 0:
        raise InvalidState(f"g(tau) never falls below 1/2 out to {tau_max_fs} fs")
    k = below[0]
    if k == 0:
        raise InvalidState("g(0) < 1/2; spectrum is not normalizable as a HOM kernel")

    def g_minus_half(tau):
        return float(interference_contrast(spectrum, [tau])[0]) - 0.5

    crossing = brentq(g_minus_half, coarse[k - 1], coarse[k], xtol=1e-9)
    return 2.0 * float(crossing)
