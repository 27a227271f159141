"""Two-field (dimer) Lugiato-Lefever integrator on a ring.

Normalized model, time in photon lifetimes::

    dA/dt = -(loss + i*dA)*A + i*s*|A|^2*A + i*(d2/2)*A_thth + i*K[B] + F
    dB/dt = -(loss + i*dB)*B + i*s*|B|^2*B + i*(d2/2)*B_thth + i*K[A] (+ F if symmetric)

K is the Fourier multiplier with real symbol a(k), s the Kerr sign. The
scheme is Strang splitting N(h/2) L(h) N(h/2): the linear part (loss,
detuning, dispersion, coupling and the constant pump) is solved exactly per
mode with the closed-form 2x2 exponential, the Kerr part exactly as a
pointwise phase rotation.

Physical context only (no normalization map is used): Kerr index
KERR_N2 in m^2/W, loaded quality factor QUALITY_FACTOR.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
import scipy.fft
from scipy.linalg import expm

from src.comb.grid import CouplingProfile, RingGrid
from src.comb.rng import uniform_stream
from src.errors import BlowupError, InvalidParameterError

logger = logging.getLogger(__name__)

KERR_N2 = 2.4e-19
QUALITY_FACTOR = 2e6

GOVERNING_MODEL = (
    'dA/dt = -(loss + i*detuning_A)*A + i*kerr_sign*|A|^2*A + i*(d2/2)*d^2A/dtheta^2 + i*K[B] + F\n'
    'dB/dt = -(loss + i*detuning_B)*B + i*kerr_sign*|B|^2*B + i*(d2/2)*d^2B/dtheta^2 + i*K[A]'
    ' (+ F when symmetric_pump)\n'
    'K: Fourier multiplier with real symbol a(k); F = pump_amplitude; P = F^2; loss = 1 by default'
)


def governing_model() -> str:
    return GOVERNING_MODEL


@dataclass(frozen=True)
class LLEParams:
    detuning: float
    pump_amplitude: float
    dispersion_d2: float = 0.0
    coupling: CouplingProfile = CouplingProfile()
    kerr_sign: int = 1
    loss: float = 1.0
    kerr: bool = True
    symmetric_pump: bool = False
    field_detuning: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        for name in ('detuning', 'pump_amplitude', 'dispersion_d2', 'loss'):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f'{name} must be finite')
        if self.pump_amplitude < 0:
            raise InvalidParameterError('pump_amplitude must be >= 0')
        if self.loss < 0:
            raise InvalidParameterError('loss must be >= 0')
        if self.kerr_sign not in (1, -1):
            raise InvalidParameterError('kerr_sign must be +1 or -1')
        if self.field_detuning is not None:
            if len(self.field_detuning) != 2 or not all(math.isfinite(d) for d in self.field_detuning):
                raise InvalidParameterError('field_detuning needs two finite values')
            object.__setattr__(self, 'field_detuning', tuple(float(d) for d in self.field_detuning))

    @property
    def power(self) -> float:
        return self.pump_amplitude ** 2

    def detunings(self) -> Tuple[float, float]:
        if self.field_detuning is not None:
            return self.field_detuning
        return (self.detuning, self.detuning)

    def replace(self, **changes) -> 'LLEParams':
        return replace(self, **changes)


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float = 1e-3
    steps: int = 10000
    record_every: int = 100
    blowup_bound: float = 1e6
    method: str = 'strang'

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidParameterError('dt must be positive')
        if self.steps <= 0 or self.record_every <= 0:
            raise InvalidParameterError('steps and record_every must be positive')
        if self.blowup_bound <= 0:
            raise InvalidParameterError('blowup_bound must be positive')
        if self.method != 'strang':
            raise InvalidParameterError(f'unknown method {self.method!r}')

    @property
    def horizon(self) -> float:
        return self.dt * self.steps


@dataclass(frozen=True, eq=False)
class DimerField:
    """Values of both fields on the ring. Holds read-only copies; `evolve` never mutates it."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for name in ('A', 'B'):
            values = np.array(getattr(self, name), dtype=np.complex128)
            values.flags.writeable = False
            object.__setattr__(self, name, values)
        if self.A.shape != self.B.shape or self.A.ndim != 1:
            raise InvalidParameterError('A and B must be 1-d arrays of equal length')

    @classmethod
    def zeros(cls, grid: RingGrid) -> 'DimerField':
        return cls(np.zeros(grid.mode_count, complex), np.zeros(grid.mode_count, complex))

    @property
    def mode_count(self) -> int:
        return self.A.shape[0]

    def stacked(self) -> np.ndarray:
        return np.stack([self.A, self.B])

    def norm(self) -> float:
        """Discrete integral of |A|^2 + |B|^2 over the ring."""
        return float((np.sum(np.abs(self.A) ** 2) + np.sum(np.abs(self.B) ** 2))
                     * 2.0 * np.pi / self.mode_count)


@dataclass
class Trajectory:
    grid: RingGrid
    times: np.ndarray
    snapshots: np.ndarray  # (count, 2, M) complex
    blowup_step: Optional[int] = None

    @property
    def flagged(self) -> bool:
        return self.blowup_step is not None

    def __len__(self):
        return self.snapshots.shape[0]

    def field(self, index: int = -1) -> DimerField:
        snap = self.snapshots[index]
        return DimerField(snap[0].copy(), snap[1].copy())

    @property
    def final(self) -> DimerField:
        return self.field(-1)


# --- linear sub-flow --------------------------------------------------------------

def _sinhc(w: np.ndarray, h: float) -> np.ndarray:
    """sinh(w h)/w with the small-argument limit."""
    wh = w * h
    small = np.abs(wh) < 1e-6
    safe = np.where(small, 1.0, w)
    return np.where(small, h * (1.0 + wh * wh / 6.0), np.sinh(wh) / safe)


@dataclass(frozen=True)
class LinearPropagator:
    """Per-mode exact exponential of [[lA, i a], [i a, lB]] over one step."""

    e11: np.ndarray
    e12: np.ndarray
    e22: np.ndarray
    m11: np.ndarray  # e11 - 1
    m22: np.ndarray  # e22 - 1
    forcing: Tuple[complex, complex]

    def apply(self, modes: np.ndarray) -> np.ndarray:
        a, b = modes[0], modes[1]
        out = np.empty_like(modes)
        out[0] = self.e11 * a + self.e12 * b
        out[1] = self.e12 * a + self.e22 * b
        out[0, 0] += self.forcing[0]
        out[1, 0] += self.forcing[1]
        return out


def linear_symbols(params: LLEParams, grid: RingGrid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    k = grid.modes.astype(float)
    d_a, d_b = params.detunings()
    dispersion = 0.5 * params.dispersion_d2 * k ** 2
    l_a = -params.loss - 1j * d_a - 1j * dispersion
    l_b = -params.loss - 1j * d_b - 1j * dispersion
    return l_a, l_b, params.coupling.values(grid)


def linear_propagator(params: LLEParams, grid: RingGrid, h: float) -> LinearPropagator:
    l_a, l_b, a = linear_symbols(params, grid)
    c = 0.5 * (l_a + l_b)
    d = 0.5 * (l_a - l_b)
    w = np.sqrt(d * d - a * a + 0j)
    sh = _sinhc(w, h)
    half = np.sinh(0.5 * w * h)
    cosh_m1 = 2.0 * half * half
    ech = np.exp(c * h)
    em1 = np.expm1(c * h)
    e11 = ech * (1.0 + cosh_m1 + sh * d)
    e22 = ech * (1.0 + cosh_m1 - sh * d)
    e12 = ech * sh * 1j * a
    m11 = em1 * (1.0 + cosh_m1 + sh * d) + cosh_m1 + sh * d
    m22 = em1 * (1.0 + cosh_m1 - sh * d) + cosh_m1 - sh * d
    forcing = _pump_forcing(params, l_a[0], l_b[0], a[0], e12[0], m11[0], m22[0], h)
    return LinearPropagator(e11, e12, e22, m11, m22, forcing)


def _pump_forcing(params: LLEParams, la: complex, lb: complex, a: float, e12: complex,
                  m11: complex, m22: complex, h: float) -> Tuple[complex, complex]:
    """Exact contribution of the constant pump to the k = 0 mode over one step.

    Equals L0^-1 (exp(h L0) - 1) p; falls back to an augmented-matrix
    exponential when L0 is close to singular.
    """
    f = params.pump_amplitude
    p = (complex(f), complex(f) if params.symmetric_pump else 0j)
    if f == 0:
        return (0j, 0j)
    det = la * lb + a * a
    scale = max(abs(la), abs(lb), abs(a), 1.0)
    if abs(det) > 1e-10 * scale * scale:
        q0 = m11 * p[0] + e12 * p[1]
        q1 = e12 * p[0] + m22 * p[1]
        ia = 1j * a
        return ((lb * q0 - ia * q1) / det, (la * q1 - ia * q0) / det)
    aug = np.zeros((3, 3), dtype=complex)
    aug[0, 0], aug[0, 1], aug[1, 0], aug[1, 1] = la, 1j * a, 1j * a, lb
    aug[0, 2], aug[1, 2] = p
    g = expm(aug * h)
    return (complex(g[0, 2]), complex(g[1, 2]))


# --- nonlinear sub-flow -------------------------------------------------------------

def _kerr_half_step(fields: np.ndarray, params: LLEParams, h: float) -> np.ndarray:
    if not params.kerr:
        return fields
    phase = (params.kerr_sign * 0.5 * h) * (fields.real ** 2 + fields.imag ** 2)
    return fields * np.exp(1j * phase)


def _rms(fields: np.ndarray) -> float:
    return float(np.sqrt(np.max(np.mean(fields.real ** 2 + fields.imag ** 2, axis=1))))


def evolve(initial: DimerField, params: LLEParams, config: EvolutionConfig) -> Trajectory:
    """Strang split-step integration; records every `record_every` steps.

    Raises BlowupError (with the flagged partial trajectory) when the RMS of a
    field exceeds `config.blowup_bound` or stops being finite.
    """
    grid = RingGrid(initial.mode_count)
    h = config.dt
    prop = linear_propagator(params, grid, h)
    fields = initial.stacked()

    snapshots: List[np.ndarray] = [fields.copy()]
    times: List[float] = [0.0]
    for step in range(1, config.steps + 1):
        fields = _kerr_half_step(fields, params, h)
        modes = scipy.fft.fft(fields, axis=1, norm='forward')
        fields = scipy.fft.ifft(prop.apply(modes), axis=1, norm='forward')
        fields = _kerr_half_step(fields, params, h)

        rms = _rms(fields)
        if not math.isfinite(rms) or rms > config.blowup_bound:
            logger.debug('blowup at step %d (rms %.3g)', step, rms)
            snapshots.append(fields.copy())
            times.append(step * h)
            traj = Trajectory(grid, np.asarray(times), np.asarray(snapshots), blowup_step=step)
            raise BlowupError(step, traj)
        if step % config.record_every == 0:
            snapshots.append(fields.copy())
            times.append(step * h)
    return Trajectory(grid, np.asarray(times), np.asarray(snapshots))


# --- flat states -----------------------------------------------------------------

def homogeneous_steady_states(detuning: float, power: float, loss: float = 1.0,
                              kerr_sign: int = 1) -> List[float]:
    """Real non-negative roots rho of rho*(loss^2 + (detuning - s*rho)^2) = power."""
    if power < 0:
        raise InvalidParameterError('power must be >= 0')
    coeffs = [1.0, -2.0 * kerr_sign * detuning, loss * loss + detuning * detuning, -float(power)]
    roots = np.roots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) >= 1e-6 * max(1.0, abs(r)):
            continue
        rho = float(r.real)
        for _ in range(4):
            f = ((rho - 2.0 * kerr_sign * detuning) * rho + coeffs[2]) * rho - power
            df = (3.0 * rho - 4.0 * kerr_sign * detuning) * rho + coeffs[2]
            if abs(df) < 1e-12:
                break
            rho -= f / df
        if rho >= 0 or abs(rho) < 1e-12:
            out.append(max(rho, 0.0))
    return sorted(out)


def flat_state(params: LLEParams, rho: float, detuning: float) -> complex:
    return params.pump_amplitude / (params.loss + 1j * (detuning - params.kerr_sign * rho))


def seeded_initial_field(params: LLEParams, grid: RingGrid, seed: int, noise: float = 1e-4) -> DimerField:
    """Flat state on the largest steady-state root plus seeded relative noise.

    Field B starts on the same flat state only when the pump is symmetric
    (detuning shifted by the k = 0 coupling); otherwise it starts at zero.
    A zero pump gives the exact zero field.
    """
    if params.pump_amplitude == 0:
        return DimerField.zeros(grid)
    d_a, d_b = params.detunings()
    a0 = float(params.coupling.values(grid)[0])
    shift = a0 if params.symmetric_pump else 0.0
    rho = homogeneous_steady_states(d_a - shift, params.power, params.loss, params.kerr_sign)[-1]
    psi_a = flat_state(params, rho, d_a - shift)
    if params.symmetric_pump:
        rho_b = homogeneous_steady_states(d_b - shift, params.power, params.loss, params.kerr_sign)[-1]
        psi_b = flat_state(params, rho_b, d_b - shift)
    else:
        psi_b = 0j
    m = grid.mode_count
    amp = noise * abs(psi_a)
    u = uniform_stream(seed, 'initial', 4 * m)
    noise_a = amp * (u[0:m] + 1j * u[m:2 * m])
    noise_b = amp * (u[2 * m:3 * m] + 1j * u[3 * m:])
    return DimerField(psi_a + noise_a, psi_b + noise_b)
