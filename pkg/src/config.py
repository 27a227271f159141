"""Run configuration: one JSON document parsed into frozen dataclasses.

Defaults live on the dataclasses. Keys not declared on a dataclass are
rejected with their dotted path, and `--set a.b=value` overrides are applied
to the raw document before it is validated.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import typing
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from src.algebra.poly import parse_rational
from src.comb.grid import CouplingProfile, RingGrid
from src.comb.lle import EvolutionConfig, LLEParams
from src.comb.rng import MASK64
from src.comb.scans import RunSetup, StabilityCriteria
from src.errors import CombkitError, ConfigError

# Keys that change where or how fast a run happens, never what it computes.
NON_SEMANTIC_KEYS = ('output_dir', 'workers')


@dataclass(frozen=True)
class TongueSection:
    detuning: Tuple[float, ...] = (-2.0, 0.0, 2.0, 4.0, 6.0)
    modulus: Tuple[float, ...] = (6.0, 7.0, 8.0, 9.0, 10.0)


@dataclass(frozen=True)
class EPSSection:
    detuning: Tuple[float, ...] = (0.0, 2.0, 4.0)
    modulus: Tuple[float, ...] = (6.0, 8.0, 10.0)
    bracket: Tuple[float, ...] = (0.0, 16.0)
    iterations: int = 20
    localized_fraction: float = 1e-3

    def __post_init__(self):
        if len(self.bracket) != 2:
            raise ConfigError('eps.bracket needs exactly two values [P_lo, P_hi]')


@dataclass(frozen=True)
class DisorderSection:
    etas: Tuple[float, ...] = (0.0, 0.05, 0.1, 0.15, 0.2, 0.3)
    realizations: int = 15
    targets: Tuple[str, ...] = ('coupling',)


@dataclass(frozen=True)
class PinningSection:
    eta: float = 0.05
    realizations: int = 15
    threshold: float = 1e-3
    window: int = 2
    targets: Tuple[str, ...] = ('coupling',)


@dataclass(frozen=True)
class BeatNoteSection:
    repetition_rate: float = 1.0
    window: str = 'hann'
    record_every: Optional[int] = None


@dataclass(frozen=True)
class TeethSection:
    levels: Tuple[str, ...] = ('9',)

    def __post_init__(self):
        for level in self.levels:
            parse_rational(level)


@dataclass(frozen=True)
class RunConfig:
    master_seed: int = 0
    workers: int = 1
    output_dir: Optional[str] = None
    mode_count: int = 256
    model: LLEParams = LLEParams(detuning=2.0, pump_amplitude=1.5, dispersion_d2=0.02,
                                 coupling=CouplingProfile.cosine(8.0, 2.0))
    evolution: EvolutionConfig = EvolutionConfig(dt=1e-3, steps=200000, record_every=1000)
    stability: StabilityCriteria = StabilityCriteria()
    initial_noise: float = 1e-4
    tongues: TongueSection = TongueSection()
    eps: EPSSection = EPSSection()
    disorder: DisorderSection = DisorderSection()
    pinning: PinningSection = PinningSection()
    beatnote: BeatNoteSection = BeatNoteSection()
    teeth: TeethSection = TeethSection()
    standard_coupling: Optional[CouplingProfile] = None
    compare_standard: bool = True

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ConfigError('master_seed must be a 64-bit unsigned integer')
        if self.workers < 1:
            raise ConfigError('workers must be >= 1')
        if not self.initial_noise >= 0:
            raise ConfigError('initial_noise must be >= 0')
        RingGrid(self.mode_count)

    @property
    def grid(self) -> RingGrid:
        return RingGrid(self.mode_count)

    def setup(self, evolution: Optional[EvolutionConfig] = None) -> RunSetup:
        return RunSetup(self.mode_count, evolution or self.evolution, self.master_seed,
                        self.initial_noise, self.stability)

    def standard_model(self) -> LLEParams:
        """The same resonator with the momentum-independent comparison coupling."""
        profile = self.standard_coupling
        if profile is None:
            profile = CouplingProfile.constant(self.model.coupling.mean(self.grid))
        return self.model.replace(coupling=profile)

    def replace(self, **changes) -> 'RunConfig':
        return dataclasses.replace(self, **changes)


# --- building from JSON ----------------------------------------------------------

def _fail(path: str, message: str):
    raise ConfigError(f'{path or "<root>"}: {message}')


def _axis_values(value: Dict[str, Any], path: str) -> Tuple[float, ...]:
    unknown = set(value) - {'start', 'stop', 'num'}
    if unknown:
        _fail(f'{path}.{sorted(unknown)[0]}', 'unknown key')
    try:
        start, stop, num = float(value['start']), float(value['stop']), int(value['num'])
    except (KeyError, TypeError, ValueError):
        _fail(path, 'axis needs numeric start, stop and num')
    if num < 1:
        _fail(path, 'axis num must be >= 1')
    return tuple(float(v) for v in np.linspace(start, stop, num))


def _convert(tp, value, path: str, current=None):
    origin = typing.get_origin(tp)
    if origin is typing.Union:
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        if value is None:
            return None
        return _convert(args[0], value, path, current)
    if dataclasses.is_dataclass(tp):
        if not isinstance(value, dict):
            _fail(path, f'expected an object, got {type(value).__name__}')
        return _build(tp, value, path, current)
    if origin is tuple:
        item_type = typing.get_args(tp)[0]
        if isinstance(value, dict) and item_type is float:
            return _axis_values(value, path)
        if not isinstance(value, list):
            _fail(path, f'expected a list, got {type(value).__name__}')
        return tuple(_convert(item_type, v, f'{path}[{i}]') for i, v in enumerate(value))
    if tp is bool:
        if not isinstance(value, bool):
            _fail(path, 'expected true or false')
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(path, 'expected an integer')
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            _fail(path, 'expected a number')
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            _fail(path, 'expected a string')
        return value
    _fail(path, f'unsupported field type {tp!r}')


def _build(cls, data: Dict[str, Any], path: str = '', current=None):
    """Construct `cls` from `data`; missing keys keep the values of `current` when given."""
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in names:
            _fail(f'{path}.{key}' if path else key, 'unknown key')
    kwargs = {}
    for key, value in data.items():
        nested = getattr(current, key, None) if current is not None else None
        kwargs[key] = _convert(hints[key], value, f'{path}.{key}' if path else key, nested)
    try:
        if current is not None:
            return dataclasses.replace(current, **kwargs)
        return cls(**kwargs)
    except ConfigError:
        raise
    except CombkitError as exc:
        _fail(path, str(exc))
    except TypeError as exc:
        _fail(path, f'incomplete section ({exc})')


def from_dict(data: Dict[str, Any], source: Optional[str] = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError('config root must be an object', source)
    try:
        return _build(RunConfig, data, current=RunConfig())
    except ConfigError as exc:
        if source:
            raise ConfigError(str(exc), source) from None
        raise


def load_config(path: str, overrides: Sequence[str] = ()) -> RunConfig:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as exc:
        raise ConfigError(f'cannot read config: {exc.strerror}', path) from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f'invalid JSON at line {exc.lineno} column {exc.colno}', path) from None
    return from_dict(apply_overrides(data, overrides), path)


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """Apply `dotted.key=value` strings; values are JSON, falling back to plain strings."""
    data = json.loads(json.dumps(data))
    for item in overrides:
        key, sep, raw = item.partition('=')
        if not sep or not key:
            raise ConfigError(f'override {item!r} is not of the form key=value')
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = data
        parts = key.split('.')
        for part in parts[:-1]:
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            if not isinstance(child, dict):
                raise ConfigError(f'override {key!r}: {part!r} is not an object')
            node = child
        node[parts[-1]] = value
    return data


# --- serialization ----------------------------------------------------------------

def to_dict(config: RunConfig) -> Dict[str, Any]:
    return json.loads(json.dumps(dataclasses.asdict(config)))


def canonical_json(config: RunConfig) -> str:
    data = to_dict(config)
    for key in NON_SEMANTIC_KEYS:
        data.pop(key, None)
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def inputs_hash(config: RunConfig) -> str:
    return hashlib.sha256(canonical_json(config).encode('utf-8')).hexdigest()
