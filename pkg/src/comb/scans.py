"""Parameter scans over the dimer integrator.

Every scan is a flat list of independent cells handed to `parallel_map`;
results are reassembled in grid order, so the output does not depend on the
worker count.
"""
from __future__ import annotations

import enum
import functools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.comb.disorder import DisorderSpec, apply_disorder
from src.comb.grid import RingGrid
from src.comb.lle import EvolutionConfig, LLEParams, Trajectory, evolve, seeded_initial_field
from src.comb.rng import realization_seed
from src.comb.spectra import (BeatNote, PinningReport, Spectrum, Stability, beat_note_psd, beat_note_series,
                              classify_stability, pinning_statistics, power_spectrum, spectral_fidelity)
from src.errors import BlowupError, FidelityError, InvalidParameterError
from src.parallel import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilityCriteria:
    tolerance: float = 1e-6
    trailing_fraction: float = 0.5
    power_floor: float = 1e-20

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidParameterError('stability tolerance must be positive')
        if not 0 < self.trailing_fraction <= 1:
            raise InvalidParameterError('trailing_fraction must be in (0, 1]')

    def classify(self, trajectory: Trajectory) -> Stability:
        return classify_stability(trajectory, self.tolerance, self.trailing_fraction, self.power_floor)


@dataclass(frozen=True)
class RunSetup:
    """What every cell needs besides its own parameters."""

    mode_count: int
    evolution: EvolutionConfig
    seed: int
    noise: float = 1e-4
    criteria: StabilityCriteria = StabilityCriteria()

    @property
    def grid(self) -> RingGrid:
        return RingGrid(self.mode_count)


def run_to_steady_state(params: LLEParams, setup: RunSetup) -> Trajectory:
    """Evolve from the seeded flat state; a blowup returns the flagged trajectory."""
    initial = seeded_initial_field(params, setup.grid, setup.seed, setup.noise)
    try:
        return evolve(initial, params, setup.evolution)
    except BlowupError as exc:
        return exc.trajectory


def _axis(name: str, values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidParameterError(f'{name} grid must be a non-empty list')
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f'{name} grid must be finite')
    if np.any(np.diff(arr) <= 0):
        raise InvalidParameterError(f'{name} grid must be strictly increasing')
    return arr


# --- Arnold tongues -------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityMap:
    detunings: np.ndarray
    moduli: np.ndarray
    classes: Tuple[Tuple[Stability, ...], ...]  # [detuning index][modulus index]

    def cell(self, i: int, j: int) -> Stability:
        return self.classes[i][j]

    def rows(self) -> Iterator[Tuple[float, float, Stability]]:
        for i, d in enumerate(self.detunings):
            for j, a in enumerate(self.moduli):
                yield float(d), float(a), self.classes[i][j]

    def count(self, stability: Stability) -> int:
        return sum(row.count(stability) for row in self.classes)


def tongue_params(base: LLEParams, detuning: float, modulus: float) -> LLEParams:
    return base.replace(detuning=float(detuning), coupling=base.coupling.with_modulus(modulus))


def _tongue_cell(cell: Tuple[float, float], base: LLEParams, setup: RunSetup) -> Stability:
    detuning, modulus = cell
    traj = run_to_steady_state(tongue_params(base, detuning, modulus), setup)
    return setup.criteria.classify(traj)


def _grid_cells(detunings: np.ndarray, moduli: np.ndarray) -> List[Tuple[float, float]]:
    return [(float(d), float(a)) for d in detunings for a in moduli]


def _reshape(values: list, rows: int, cols: int) -> tuple:
    return tuple(tuple(values[i * cols:(i + 1) * cols]) for i in range(rows))


def arnold_tongue_scan(detunings: Sequence[float], moduli: Sequence[float], base: LLEParams,
                       setup: RunSetup, workers: int = 1) -> StabilityMap:
    """Classify the seeded steady-state run of every (detuning, modulus) cell."""
    d_axis, a_axis = _axis('detuning', detunings), _axis('modulus', moduli)
    cells = _grid_cells(d_axis, a_axis)
    classes = parallel_map(functools.partial(_tongue_cell, base=base, setup=setup), cells,
                           workers=workers, label='tongues')
    result = StabilityMap(d_axis, a_axis, _reshape(classes, len(d_axis), len(a_axis)))
    logger.info('tongue scan: %d cells, %d stable, %d blowup', len(cells),
                result.count(Stability.STABLE), result.count(Stability.BLOWUP))
    return result


# --- pump threshold (EPS) ----------------------------------------------------------

class ThresholdStatus(str, enum.Enum):
    FOUND = 'Found'
    NOT_FOUND = 'NotFound'
    BELOW_BRACKET = 'BelowBracket'


@dataclass(frozen=True)
class Threshold:
    status: ThresholdStatus
    value: float
    width: float
    iterations: int


def bisect_threshold(predicate: Callable[[float], bool], lo: float, hi: float,
                     iterations: int = 20) -> Threshold:
    """Smallest x in [lo, hi] where a monotone predicate turns true.

    Found: midpoint of the final bracket, whose width is (hi - lo) / 2**iterations.
    NotFound: predicate false at hi. BelowBracket: predicate already true at lo.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InvalidParameterError(f'bisection bracket must satisfy lo < hi, got [{lo}, {hi}]')
    if iterations < 1:
        raise InvalidParameterError('bisection needs at least one iteration')
    if not predicate(hi):
        return Threshold(ThresholdStatus.NOT_FOUND, float('nan'), hi - lo, 0)
    if predicate(lo):
        return Threshold(ThresholdStatus.BELOW_BRACKET, lo, hi - lo, 0)
    for n in range(iterations):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
        logger.debug('bisection %d: [%g, %g]', n + 1, lo, hi)
    return Threshold(ThresholdStatus.FOUND, 0.5 * (lo + hi), hi - lo, iterations)


def off_center_fraction(spectrum: Spectrum) -> float:
    total = spectrum.total()
    if total == 0:
        return 0.0
    return 1.0 - spectrum.at(0) / total


def is_localized_state(params: LLEParams, setup: RunSetup, localized_fraction: float = 1e-3) -> bool:
    """Stable run whose final spectrum is not concentrated at k = 0 alone."""
    traj = run_to_steady_state(params, setup)
    if setup.criteria.classify(traj) is not Stability.STABLE:
        return False
    return off_center_fraction(power_spectrum(traj.final, both=True)) > localized_fraction


def _eps_cell(cell: Tuple[float, float], base: LLEParams, setup: RunSetup, bracket: Tuple[float, float],
              iterations: int, localized_fraction: float) -> Threshold:
    params = tongue_params(base, *cell)

    def predicate(power: float) -> bool:
        return is_localized_state(params.replace(pump_amplitude=math.sqrt(power)), setup, localized_fraction)

    return bisect_threshold(predicate, bracket[0], bracket[1], iterations)


@dataclass(frozen=True)
class EPSurface:
    detunings: np.ndarray
    moduli: np.ndarray
    thresholds: Tuple[Tuple[Threshold, ...], ...]
    bracket: Tuple[float, float]

    def cell(self, i: int, j: int) -> Threshold:
        return self.thresholds[i][j]

    def rows(self) -> Iterator[Tuple[float, float, Threshold]]:
        for i, d in enumerate(self.detunings):
            for j, a in enumerate(self.moduli):
                yield float(d), float(a), self.thresholds[i][j]


def power_threshold_scan(detunings: Sequence[float], moduli: Sequence[float], base: LLEParams,
                         setup: RunSetup, bracket: Tuple[float, float], iterations: int = 20,
                         localized_fraction: float = 1e-3, workers: int = 1) -> EPSurface:
    p_lo, p_hi = float(bracket[0]), float(bracket[1])
    if not 0 <= p_lo < p_hi:
        raise InvalidParameterError(f'power bracket must satisfy 0 <= P_lo < P_hi, got {bracket}')
    if not 1 <= iterations <= 20:
        raise InvalidParameterError('bisection iterations must be in 1..20')
    d_axis, a_axis = _axis('detuning', detunings), _axis('modulus', moduli)
    func = functools.partial(_eps_cell, base=base, setup=setup, bracket=(p_lo, p_hi),
                             iterations=iterations, localized_fraction=localized_fraction)
    thresholds = parallel_map(func, _grid_cells(d_axis, a_axis), workers=workers, label='eps')
    return EPSurface(d_axis, a_axis, _reshape(thresholds, len(d_axis), len(a_axis)), (p_lo, p_hi))


# --- disorder ------------------------------------------------------------------------

@dataclass(frozen=True)
class FidelityPoint:
    eta: float
    mean: float
    std: float
    blowup_count: int
    values: Tuple[float, ...]


@dataclass(frozen=True)
class FidelityCurve:
    realizations: int
    points: Tuple[FidelityPoint, ...]

    @property
    def etas(self) -> np.ndarray:
        return np.asarray([p.eta for p in self.points])

    @property
    def means(self) -> np.ndarray:
        return np.asarray([p.mean for p in self.points])


def reference_spectrum(base: LLEParams, setup: RunSetup) -> Spectrum:
    """Clean (eta = 0) steady-state spectrum; a blowup here is an error."""
    initial = seeded_initial_field(base, setup.grid, setup.seed, setup.noise)
    return power_spectrum(evolve(initial, base, setup.evolution).final, both=True)


def _realization_cell(task: Tuple[float, int], base: LLEParams, setup: RunSetup,
                      targets: Tuple[str, ...]) -> Optional[Spectrum]:
    eta, seed = task
    params = apply_disorder(base, DisorderSpec(eta, seed, targets), setup.grid)
    traj = run_to_steady_state(params, setup)
    if traj.flagged:
        return None
    return power_spectrum(traj.final, both=True)


def _fidelity(reference: Spectrum, spectrum: Spectrum) -> float:
    try:
        return spectral_fidelity(reference, spectrum)
    except FidelityError:
        if reference.total() == 0 and spectrum.total() == 0:
            return 1.0
        raise


def _realizations(base: LLEParams, setup: RunSetup, tasks: List[Tuple[float, int]], targets: Tuple[str, ...],
                  workers: int, label: str) -> List[Optional[Spectrum]]:
    func = functools.partial(_realization_cell, base=base, setup=setup, targets=tuple(targets))
    return parallel_map(func, tasks, workers=workers, label=label)


def disorder_fidelity_curve(etas: Sequence[float], realizations: int, base: LLEParams, setup: RunSetup,
                            targets: Sequence[str] = ('coupling',), workers: int = 1) -> FidelityCurve:
    """Mean and sample std of the fidelity against the clean comb, per disorder strength.

    Realization r at eta index i uses seed realization_seed(setup.seed, i, r);
    a realization that blows up scores 0 and is counted.
    """
    if realizations < 2:
        raise InvalidParameterError('disorder curve needs at least 2 realizations')
    axis = _axis('eta', etas)
    if axis[0] < 0:
        raise InvalidParameterError('disorder strengths must be >= 0')
    reference = reference_spectrum(base, setup)
    tasks = [(float(eta), realization_seed(setup.seed, i, r))
             for i, eta in enumerate(axis) for r in range(realizations)]
    spectra = _realizations(base, setup, tasks, tuple(targets), workers, 'disorder')

    points = []
    for i, eta in enumerate(axis):
        chunk = spectra[i * realizations:(i + 1) * realizations]
        values = [0.0 if s is None else _fidelity(reference, s) for s in chunk]
        blowups = sum(s is None for s in chunk)
        points.append(FidelityPoint(float(eta), float(np.mean(values)), float(np.std(values, ddof=1)),
                                    blowups, tuple(values)))
        logger.debug('eta=%g: mean fidelity %.6f (%d blowups)', eta, points[-1].mean, blowups)
    return FidelityCurve(realizations, tuple(points))


def pinning_report(realizations: int, eta: float, base: LLEParams, setup: RunSetup,
                   targets: Sequence[str] = ('coupling',), threshold: float = 1e-3, window: int = 2,
                   workers: int = 1) -> PinningReport:
    """Tooth drift and amplitude variance over `realizations` disorder draws at one strength."""
    if realizations < 2:
        raise InvalidParameterError('pinning report needs at least 2 realizations')
    reference = reference_spectrum(base, setup)
    tasks = [(float(eta), realization_seed(setup.seed, 0, r)) for r in range(realizations)]
    spectra = _realizations(base, setup, tasks, tuple(targets), workers, 'pinning')
    zero = Spectrum(reference.modes, np.zeros_like(reference.power))
    return pinning_statistics(reference, [zero if s is None else s for s in spectra], threshold, window)


# --- beat note -----------------------------------------------------------------------

def beat_note_run(base: LLEParams, setup: RunSetup, repetition_rate: float, window: str = 'hann') -> BeatNote:
    """Evolve once and analyse the lab-frame intensity at theta = 0."""
    initial = seeded_initial_field(base, setup.grid, setup.seed, setup.noise)
    traj = evolve(initial, base, setup.evolution)
    series = beat_note_series(traj, repetition_rate)
    sample_dt = setup.evolution.dt * setup.evolution.record_every
    return beat_note_psd(series[1:], sample_dt, window=window)
