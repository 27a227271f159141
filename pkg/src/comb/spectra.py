"""Comb observables: spectra, fidelity, comb teeth, stability, beat notes."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.fft
from scipy.optimize import brentq
from scipy.signal import find_peaks, periodogram

from src.comb.grid import CouplingProfile, RingGrid
from src.comb.lle import DimerField, Trajectory
from src.errors import FidelityError, InvalidParameterError, NoSpectralLineError, NoTeethError

logger = logging.getLogger(__name__)


# --- spectra ---------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Power per mode, ascending mode number k = -M/2..M/2-1.

    power[k] = |FFT_ortho(A)[k]|^2, so sum(power) = M * mean(|A|^2).
    """

    modes: np.ndarray
    power: np.ndarray

    def __len__(self):
        return len(self.power)

    def total(self) -> float:
        return float(np.sum(self.power))

    def at(self, k: int) -> float:
        return float(self.power[int(k) + len(self.power) // 2])

    def in_db(self) -> np.ndarray:
        db = 10.0 * np.log10(self.power + 1e-300)
        return db - db.max()


def power_spectrum(field: DimerField, both: bool = False) -> Spectrum:
    grid = RingGrid(field.mode_count)
    power = np.abs(scipy.fft.fft(field.A, norm='ortho')) ** 2
    if both:
        power = power + np.abs(scipy.fft.fft(field.B, norm='ortho')) ** 2
    return Spectrum(grid.centered_modes, grid.centered(power))


def spectral_fidelity(s1: Spectrum, s2: Spectrum) -> float:
    """Bhattacharyya overlap of the normalized spectra, in [0, 1]."""
    p1 = np.asarray(s1.power, dtype=float)
    p2 = np.asarray(s2.power, dtype=float)
    if p1.shape != p2.shape:
        raise FidelityError('spectra have different lengths')
    t1, t2 = p1.sum(), p2.sum()
    if t1 == 0 and t2 == 0:
        raise FidelityError('fidelity of two zero spectra is undefined')
    if t1 == 0 or t2 == 0:
        return 0.0
    n1, n2 = p1 / t1, p2 / t2
    if np.array_equal(n1, n2):
        return 1.0
    return float(min(1.0, max(0.0, np.sum(np.sqrt(n1 * n2)))))


# --- comb teeth -------------------------------------------------------------------

@dataclass(frozen=True)
class CombTooth:
    level: float
    positions: Tuple[float, ...]
    phases: Tuple[float, ...]
    degenerate: bool = False


def comb_teeth(profile: CouplingProfile, levels: Sequence[float], grid: RingGrid) -> List[CombTooth]:
    """Crossings of a(k) with each level on the continuous interpolant."""
    m = grid.mode_count
    ks = grid.centered_modes.astype(float)
    sampled = profile.centered_values(grid)
    out = []
    for level in levels:
        level = float(level)
        g = sampled - level
        if np.all(g == 0):
            out.append(CombTooth(level, (), (), degenerate=True))
            continue
        roots = []
        for i in range(m):
            lo, g_lo, g_hi = ks[i], g[i], g[(i + 1) % m]
            if g_lo == 0:
                roots.append(lo)
            elif g_lo * g_hi < 0:
                root = brentq(lambda k: float(profile.evaluate(k, m)) - level, lo, lo + 1.0, xtol=1e-13)
                if root >= m // 2:
                    root -= m
                roots.append(root)
        roots.sort()
        phases = tuple(2.0 * np.pi * r / m for r in roots)
        out.append(CombTooth(level, tuple(roots), phases))
    return out


# --- stability --------------------------------------------------------------------

class Stability(str, enum.Enum):
    STABLE = 'Stable'
    UNSTABLE = 'Unstable'
    BLOWUP = 'Blowup'
    UNDECIDED = 'Undecided'


def _mode_power(snapshot: np.ndarray) -> np.ndarray:
    modes = scipy.fft.fft(snapshot, axis=-1, norm='ortho')
    return np.sum(modes.real ** 2 + modes.imag ** 2, axis=0)


def spectral_changes(trajectory: Trajectory, trailing_fraction: float = 0.5,
                     power_floor: float = 1e-20) -> np.ndarray:
    """Relative L2 change of the mode-power spectrum between consecutive trailing snapshots."""
    n = len(trajectory)
    start = int(np.floor(n * (1.0 - trailing_fraction)))
    spectra = [_mode_power(s) for s in trajectory.snapshots[start:]]
    changes = []
    for a, b in zip(spectra, spectra[1:]):
        scale = max(np.linalg.norm(a), np.linalg.norm(b))
        changes.append(0.0 if scale < power_floor else float(np.linalg.norm(b - a) / scale))
    return np.asarray(changes)


def classify_stability(trajectory: Trajectory, tolerance: float = 1e-6,
                       trailing_fraction: float = 0.5, power_floor: float = 1e-20) -> Stability:
    if trajectory.flagged:
        return Stability.BLOWUP
    n = len(trajectory)
    if n < 4 or n - int(np.floor(n * (1.0 - trailing_fraction))) < 3:
        return Stability.UNDECIDED
    changes = spectral_changes(trajectory, trailing_fraction, power_floor)
    if np.all(changes < tolerance):
        return Stability.STABLE
    if np.count_nonzero(changes >= tolerance) * 2 >= len(changes):
        return Stability.UNSTABLE
    return Stability.UNDECIDED


# --- pinning ----------------------------------------------------------------------

@dataclass(frozen=True)
class ToothPinning:
    mode_k: int
    drift_max: float
    drift_rms: float
    amp_var: float
    lost: int = 0


@dataclass(frozen=True)
class PinningReport:
    realizations: int
    teeth: Tuple[ToothPinning, ...]


def find_teeth(spectrum: Spectrum, threshold: float = 1e-3) -> List[int]:
    """Indices (into the centered spectrum) of local maxima above threshold*peak, periodic."""
    power = np.asarray(spectrum.power, dtype=float)
    peak = power.max()
    if peak <= 0:
        return []
    padded = np.concatenate([power[-1:], power, power[:1]])
    idx, _ = find_peaks(padded, height=threshold * peak)
    return sorted(int(i - 1) for i in idx if 1 <= i <= len(power))


def _center_of_mass(power: np.ndarray, center: int, window: int) -> Tuple[Optional[float], float]:
    m = len(power)
    offsets = np.arange(-window, window + 1)
    weights = power[(center + offsets) % m]
    total = float(weights.sum())
    if total <= 0:
        return None, 0.0
    return float(np.dot(offsets, weights) / total), total


def pinning_statistics(reference: Spectrum, spectra: Sequence[Spectrum], threshold: float = 1e-3,
                       window: int = 2) -> PinningReport:
    """Per-tooth center-of-mass drift (mode units) and amplitude variance across realizations."""
    teeth = find_teeth(reference, threshold)
    if not teeth:
        raise NoTeethError(f'no spectral teeth above {threshold:g} of the peak')
    ref_power = np.asarray(reference.power, dtype=float)
    out = []
    for j in teeth:
        ref_com, _ = _center_of_mass(ref_power, j, window)
        drifts, amps, lost = [], [], 0
        for s in spectra:
            com, amp = _center_of_mass(np.asarray(s.power, dtype=float), j, window)
            amps.append(amp)
            if com is None:
                lost += 1
            else:
                drifts.append(com - ref_com)
        drifts = np.asarray(drifts)
        out.append(ToothPinning(
            mode_k=int(reference.modes[j]),
            drift_max=float(np.max(np.abs(drifts))) if drifts.size else float('nan'),
            drift_rms=float(np.sqrt(np.mean(drifts ** 2))) if drifts.size else float('nan'),
            amp_var=float(np.var(amps, ddof=1)) if len(amps) > 1 else 0.0,
            lost=lost,
        ))
    return PinningReport(len(spectra), tuple(out))


# --- beat note --------------------------------------------------------------------

@dataclass(frozen=True)
class BeatNote:
    freqs: np.ndarray
    psd: np.ndarray
    peak_freq: float
    fwhm: float
    resolution: float

    def lines(self, rel_height: float = 0.1) -> List[float]:
        """Frequencies of all PSD peaks above rel_height of the dominant one (DC excluded)."""
        psd = self.psd.copy()
        psd[0] = 0.0
        idx, _ = find_peaks(psd, height=rel_height * psd.max())
        return [float(self.freqs[i]) for i in idx]


def beat_note_series(trajectory: Trajectory, repetition_rate: float) -> np.ndarray:
    """Lab-frame intensity of field A at theta = 0, one sample per snapshot."""
    modes = scipy.fft.fft(trajectory.snapshots[:, 0, :], axis=1, norm='forward')
    k = trajectory.grid.modes.astype(float)
    rotation = np.exp(1j * np.outer(trajectory.times, k * repetition_rate))
    return np.abs(np.sum(modes * rotation, axis=1)) ** 2


def _half_crossing(freqs, psd, start, last, step, half):
    """Frequency where the PSD first drops below `half`, walking from `start` to index `last`."""
    i = start
    while psd[i] >= half:
        if i == last:
            return float(freqs[last])
        i += step
    f0, f1 = freqs[i - step], freqs[i]
    p0, p1 = psd[i - step], psd[i]
    return float(f0 + (half - p0) * (f1 - f0) / (p1 - p0))


def beat_note_psd(series: np.ndarray, dt: float, window: str = 'hann', detrend: str = 'constant') -> BeatNote:
    """Periodogram of a uniformly sampled real series and the FWHM of its dominant line."""
    series = np.asarray(series, dtype=float)
    n = series.shape[0]
    if n < 256:
        raise InvalidParameterError(f'beat-note PSD needs >= 256 samples, got {n}')
    if not dt > 0:
        raise InvalidParameterError('dt must be positive')
    if np.ptp(series) == 0:
        raise NoSpectralLineError('constant series has no spectral line')
    freqs, psd = periodogram(series, fs=1.0 / dt, window=window, detrend=detrend, scaling='density')
    if not np.any(psd[1:] > 0):
        raise NoSpectralLineError('no power away from DC')
    peak = 1 + int(np.argmax(psd[1:]))
    half = 0.5 * psd[peak]
    left = _half_crossing(freqs, psd, peak, 0, -1, half)
    right = _half_crossing(freqs, psd, peak, len(psd) - 1, 1, half)
    resolution = 1.0 / (n * dt)
    logger.debug('beat note at %g, fwhm %g (floor %g)', freqs[peak], right - left, resolution)
    return BeatNote(freqs, psd, float(freqs[peak]), float(right - left), resolution)
