import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.comb.grid import CouplingProfile, RingGrid
from src.comb.lle import LLEParams
from src.comb.rng import MASK64, uniform_stream
from src.errors import InvalidParameterError

logger = logging.getLogger(__name__)

TARGETS = ('detuning', 'coupling')


@dataclass(frozen=True)
class DisorderSpec:
    strength: float
    seed: int
    targets: Tuple[str, ...] = ('coupling',)

    def __post_init__(self):
        if not (self.strength >= 0 and np.isfinite(self.strength)):
            raise InvalidParameterError('disorder strength must be >= 0')
        if not 0 <= int(self.seed) <= MASK64:
            raise InvalidParameterError('disorder seed must be a 64-bit unsigned integer')
        unknown = set(self.targets) - set(TARGETS)
        if unknown:
            raise InvalidParameterError(f'unknown disorder targets {sorted(unknown)}')
        object.__setattr__(self, 'targets', tuple(self.targets))


def apply_disorder(params: LLEParams, spec: DisorderSpec, grid: RingGrid) -> LLEParams:
    """Multiply each targeted quantity by (1 + eta*u), u ~ U[-1, 1).

    Coupling draws are indexed by mode in FFT order, detuning draws by field
    (0 for A, 1 for B). Zero strength returns `params` itself.
    """
    eta = spec.strength
    if eta == 0:
        return params
    changes = {}
    if 'detuning' in spec.targets:
        u = uniform_stream(spec.seed, 'detuning', 2)
        d_a, d_b = params.detunings()
        changes['field_detuning'] = (d_a * (1.0 + eta * u[0]), d_b * (1.0 + eta * u[1]))
    if 'coupling' in spec.targets:
        values = params.coupling.values(grid)
        u = uniform_stream(spec.seed, 'coupling', grid.mode_count)
        changes['coupling'] = CouplingProfile.from_table(grid.centered(values * (1.0 + eta * u)))
    logger.debug('disorder eta=%g seed=%d targets=%s', eta, spec.seed, spec.targets)
    return params.replace(**changes)
