import json

import pytest

from src.comb.grid import CouplingProfile
from src.config import (RunConfig, apply_overrides, canonical_json, from_dict, inputs_hash, load_config,
                        to_dict)
from src.errors import ConfigError
from src.runman import RunManager, get_run_manager


def test_defaults():
    cfg = from_dict({})
    assert cfg == RunConfig()
    assert cfg.mode_count == 256
    assert cfg.disorder.realizations == 15
    standard = cfg.standard_model().coupling
    assert standard.kind == 'constant'
    assert standard.a0 == pytest.approx(8.0)
    assert cfg.replace(standard_coupling=CouplingProfile.constant(5.0)).standard_model().coupling.a0 == 5.0


def test_partial_sections_keep_defaults():
    cfg = from_dict({'model': {'detuning': 3.5}, 'evolution': {'steps': 500}})
    assert cfg.model.detuning == 3.5
    assert cfg.model.pump_amplitude == RunConfig().model.pump_amplitude
    assert cfg.evolution.steps == 500
    assert cfg.evolution.record_every == RunConfig().evolution.record_every


def test_axis_objects_expand_to_grids():
    cfg = from_dict({'tongues': {'detuning': {'start': -1, 'stop': 1, 'num': 5}}})
    assert cfg.tongues.detuning == (-1.0, -0.5, 0.0, 0.5, 1.0)


@pytest.mark.parametrize('data, path', [
    ({'bogus': 1}, 'bogus'),
    ({'model': {'detunning': 1.0}}, 'model.detunning'),
    ({'model': {'coupling': {'kind': 'cosine', 'slope': 2}}}, 'model.coupling.slope'),
    ({'tongues': {'modulus': {'start': 0, 'stop': 1, 'num': 3, 'step': 1}}}, 'tongues.modulus.step'),
])
def test_unknown_keys_report_their_path(data, path):
    with pytest.raises(ConfigError) as info:
        from_dict(data)
    assert path in str(info.value)


@pytest.mark.parametrize('data', [
    {'mode_count': 100},
    {'workers': 0},
    {'evolution': {'dt': -1.0}},
    {'model': {'pump_amplitude': 'strong'}},
    {'eps': {'bracket': [0.0]}},
    {'teeth': {'levels': ['one']}},
    {'master_seed': True},
])
def test_invalid_values_are_config_errors(data):
    with pytest.raises(ConfigError):
        from_dict(data)


def test_overrides_are_json_values():
    data = apply_overrides({'model': {'detuning': 1.0}},
                           ['model.detuning=2.5', 'disorder.etas=[0, 0.1]', 'beatnote.window=boxcar'])
    assert data == {'model': {'detuning': 2.5}, 'disorder': {'etas': [0, 0.1]}, 'beatnote': {'window': 'boxcar'}}
    with pytest.raises(ConfigError):
        apply_overrides({}, ['no-equals-sign'])


def test_echo_round_trips_and_hash_ignores_placement():
    cfg = from_dict({'master_seed': 9, 'model': {'coupling': {'kind': 'table', 'table': [1.0] * 256}}})
    echoed = from_dict(json.loads(json.dumps(to_dict(cfg))))
    assert echoed == cfg
    assert inputs_hash(echoed) == inputs_hash(cfg)
    moved = cfg.replace(workers=4, output_dir='/tmp/elsewhere')
    assert inputs_hash(moved) == inputs_hash(cfg)
    assert 'workers' not in json.loads(canonical_json(moved))
    assert inputs_hash(cfg.replace(master_seed=10)) != inputs_hash(cfg)


def test_load_config_reports_file(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"model": ')
    with pytest.raises(ConfigError) as info:
        load_config(str(bad))
    assert 'bad.json' in str(info.value)


def test_run_manager_finds_shipped_configs():
    manager = get_run_manager()
    assert {'default', 'smoke'} <= set(manager.list_configs())
    assert manager.load('default').mode_count == 256
    assert manager.load('smoke', ['master_seed=3']).master_seed == 3
    with pytest.raises(ConfigError):
        manager.load('no-such-config')


def test_run_manager_output_dirs(tmp_path, monkeypatch):
    manager = RunManager(project_root=str(tmp_path))
    monkeypatch.setenv('COMBKIT_OUTPUT_DIR', str(tmp_path / 'out'))
    assert manager.output_dir(RunConfig(), 'tongues') == str(tmp_path / 'out' / 'tongues')
    explicit = str(tmp_path / 'explicit')
    assert manager.output_dir(RunConfig(output_dir=explicit), 'tongues') == explicit
    assert (tmp_path / 'explicit').is_dir()
