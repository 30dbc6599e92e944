import json

import pytest

from src.config import ENV_CONFIG, ENV_THREADS, PipelineConfig
from src.errors import ConfigError, ParameterError
from src.models.feature_stack import ValueDomain
from src.models.structuring_element import SEShape


def _write(tmp_path, values):
    path = tmp_path / 'pipeline.json'
    path.write_text(json.dumps(values))
    return path


def test_defaults():
    config = PipelineConfig.load(env={})
    assert (config.window, config.step, config.num_classes, config.threads) == (896, 512, 16, 1)
    spec = config.differential_spec()
    assert spec.shape is SEShape.SQUARE and len(spec) == 7
    assert config.domain is ValueDomain.UNIT_FLOAT


def test_env_sets_threads():
    assert PipelineConfig.load(env={ENV_THREADS: '6'}).threads == 6
    with pytest.raises(ConfigError, match=ENV_THREADS):
        PipelineConfig.load(env={ENV_THREADS: 'many'})


def test_flags_override_file(tmp_path):
    path = _write(tmp_path, {'preset': 'evo2', 'shape': 'disk', 'window': 512, 'step': 256})
    config = PipelineConfig.load(path, {'step': 128, 'shape': None}, env={ENV_THREADS: '2'})
    assert (config.window, config.step, config.shape, config.threads) == (512, 128, 'disk', 2)
    assert config.differential_spec().pairs[0] == (29, 5)


def test_config_path_from_env(tmp_path):
    path = _write(tmp_path, {'num_classes': 5})
    assert PipelineConfig.load(env={ENV_CONFIG: str(path)}).num_classes == 5


def test_pairs_win_over_preset(tmp_path):
    path = _write(tmp_path, {'preset': 'evo2', 'pairs': [[9, 3], [5, 3]]})
    assert PipelineConfig.load(path, env={}).differential_spec().pairs == ((9, 3), (5, 3))
    from_flag = PipelineConfig.load(path, {'pairs': '7-3'}, env={})
    assert from_flag.differential_spec().pairs == ((7, 3),)


def test_preset_flag_replaces_pairs_from_file(tmp_path):
    path = _write(tmp_path, {'pairs': '9-3'})
    config = PipelineConfig.load(path, {'preset': 'original'}, env={})
    assert len(config.differential_spec()) == 3


def test_every_violation_is_reported(tmp_path):
    path = _write(tmp_path, {'shape': 'hexagon', 'window': 0, 'threads': 0})
    with pytest.raises(ConfigError) as info:
        PipelineConfig.load(path, env={})
    text = str(info.value)
    assert 'hexagon' in text and 'window' in text and 'threads' in text
    assert len(info.value.violations) == 3
    assert text.count('hexagon') == 1
    assert isinstance(info.value, ParameterError)


def test_type_errors_do_not_hide_range_errors():
    config = PipelineConfig(window='big', step=0, threads=-1, value_domain='wide')
    problems = config.violations()
    assert len(problems) == 4
    assert any(p.startswith('window must be an integer') for p in problems)
    assert 'step must be positive, got 0' in problems
    assert 'threads must be at least 1, got -1' in problems
    assert not any('exceeds' in p for p in problems)


@pytest.mark.parametrize('pairs', [[5, 3], 7, {'outer': 5}, [[5, 3, 1]], [['9', 3]]])
def test_malformed_pairs_are_parameter_errors(pairs):
    config = PipelineConfig(pairs=pairs)
    with pytest.raises(ParameterError):
        config.differential_spec()
    with pytest.raises(ConfigError) as info:
        config.validate()
    assert len(info.value.violations) == 1


def test_step_larger_than_window_rejected():
    with pytest.raises(ConfigError, match='exceeds'):
        PipelineConfig.load(overrides={'window': 100, 'step': 200}, env={})


def test_bad_pairs_rejected():
    with pytest.raises(ConfigError, match='outer'):
        PipelineConfig.load(overrides={'pairs': '3-5'}, env={})


def test_unknown_keys_and_bad_files(tmp_path):
    with pytest.raises(ConfigError, match='colour'):
        PipelineConfig.load(_write(tmp_path, {'colour': 'red'}), env={})
    with pytest.raises(ConfigError, match='not found'):
        PipelineConfig.load(tmp_path / 'missing.json', env={})
    broken = tmp_path / 'broken.json'
    broken.write_text('{')
    with pytest.raises(ConfigError, match='not valid JSON'):
        PipelineConfig.load(broken, env={})


def test_background_must_be_a_class():
    with pytest.raises(ConfigError, match='background_class'):
        PipelineConfig.load(overrides={'num_classes': 3, 'background_class': 3}, env={})


def test_round_trip_through_dict():
    config = PipelineConfig(preset='evo1', shape='disk', hybrid=True)
    assert PipelineConfig.from_dict(config.to_dict()) == config
