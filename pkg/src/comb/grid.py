"""Ring grid and momentum-dependent coupling profiles a(k)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import scipy.fft

from src.errors import InvalidParameterError

PROFILE_KINDS = ('constant', 'cosine', 'table')


@dataclass(frozen=True)
class RingGrid:
    """M equispaced points on the ring; mode numbers k in -M/2..M/2-1."""

    mode_count: int

    def __post_init__(self):
        m = self.mode_count
        if isinstance(m, bool) or int(m) != m or m < 16 or (m & (m - 1)):
            raise InvalidParameterError(f'mode_count must be a power of two >= 16, got {m}')

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.mode_count) / self.mode_count

    @property
    def modes(self) -> np.ndarray:
        """Mode numbers in FFT order."""
        return np.rint(scipy.fft.fftfreq(self.mode_count, 1.0 / self.mode_count)).astype(np.int64)

    @property
    def centered_modes(self) -> np.ndarray:
        half = self.mode_count // 2
        return np.arange(-half, half, dtype=np.int64)

    def centered(self, values: np.ndarray) -> np.ndarray:
        """Reorder an FFT-ordered array to ascending mode number."""
        return scipy.fft.fftshift(values, axes=-1)


@dataclass(frozen=True)
class CouplingProfile:
    """Real symbol a(k) of the inter-field coupling.

    `cosine` means a(k) = a0 + a1*cos(2*pi*k*scale/M); `table` lists a(k) for
    k = -M/2..M/2-1 and is interpolated linearly and periodically between
    integer modes.
    """

    kind: str = 'constant'
    a0: float = 0.0
    a1: float = 0.0
    scale: int = 1
    table: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise InvalidParameterError(f'unknown coupling kind {self.kind!r}; expected one of {PROFILE_KINDS}')
        if self.kind == 'table' and not self.table:
            raise InvalidParameterError('table coupling needs values')
        if not all(np.isfinite(v) for v in (self.a0, self.a1, *self.table)):
            raise InvalidParameterError('coupling values must be finite')
        object.__setattr__(self, 'table', tuple(float(v) for v in self.table))

    @classmethod
    def constant(cls, a0: float) -> 'CouplingProfile':
        return cls('constant', a0=float(a0))

    @classmethod
    def cosine(cls, a0: float, a1: float, scale: int = 1) -> 'CouplingProfile':
        return cls('cosine', a0=float(a0), a1=float(a1), scale=int(scale))

    @classmethod
    def from_table(cls, values) -> 'CouplingProfile':
        return cls('table', table=tuple(float(v) for v in values))

    def evaluate(self, k, mode_count: int) -> np.ndarray:
        """Continuous interpolant a(k) for real k."""
        k = np.asarray(k, dtype=float)
        if self.kind == 'constant':
            return np.full_like(k, self.a0)
        if self.kind == 'cosine':
            return self.a0 + self.a1 * np.cos(2.0 * np.pi * k * self.scale / mode_count)
        self._check_table(mode_count)
        half = mode_count // 2
        return np.interp(k, np.arange(-half, half), np.asarray(self.table), period=mode_count)

    def centered_values(self, grid: RingGrid) -> np.ndarray:
        if self.kind == 'table':
            self._check_table(grid.mode_count)
            return np.asarray(self.table, dtype=float)
        return self.evaluate(grid.centered_modes, grid.mode_count)

    def values(self, grid: RingGrid) -> np.ndarray:
        """a(k) in FFT order."""
        return scipy.fft.ifftshift(self.centered_values(grid))

    def mean(self, grid: RingGrid) -> float:
        return float(np.mean(self.centered_values(grid)))

    def with_modulus(self, a: float) -> 'CouplingProfile':
        """Same shape, mean value moved to `a`."""
        a = float(a)
        if self.kind == 'constant':
            return CouplingProfile.constant(a)
        if self.kind == 'cosine':
            return CouplingProfile.cosine(a, self.a1, self.scale)
        shift = a - float(np.mean(self.table))
        return CouplingProfile.from_table(np.asarray(self.table) + shift)

    def _check_table(self, mode_count: int) -> None:
        if len(self.table) != mode_count:
            raise InvalidParameterError(
                f'coupling table has {len(self.table)} values for {mode_count} modes')
