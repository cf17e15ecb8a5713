"""
test_init
~~~~~~~~~

Unit tests for :mod:`holoscope.init`.
"""
import configparser
from pathlib import Path

import pytest

import holoscope.constants as c
from holoscope import init
from holoscope.errors import ConfigError
from holoscope.model import JobConfig


# Fixtures.
@pytest.fixture
def config_directory():
    path = Path('_test_config_directory')
    path.mkdir()
    link = path / 'spam.cfg'
    config_path = Path('tests/data/test_load_config.conf')
    link.hardlink_to(config_path)
    yield path
    link.unlink()
    for child in path.iterdir():
        child.unlink()
    path.rmdir()


@pytest.fixture
def default_config():
    """Pulls the default configuration values from the config file."""
    config = configparser.ConfigParser()
    config.read(c.DEFAULT_CONFIG)
    return {k: dict(config[k]) for k in config if k in init.SECTIONS}


@pytest.fixture
def given_config():
    """Pulls the configuration values from the test config file."""
    config = configparser.ConfigParser()
    config.read('tests/data/test_load_config.conf')
    return {k: dict(config[k]) for k in config if k in init.SECTIONS}


@pytest.fixture
def local_config():
    """Moves a config file into the current working directory,
    yields the contents of that config, then cleans up.
    """
    # Create the test config in the CWD.
    path = Path('tests/data/test_load_config.conf')
    link = Path('holoscope.cfg')
    link.hardlink_to(path)

    # Send the contents of the config to the test.
    config = configparser.ConfigParser()
    config.read(link)
    yield {k: dict(config[k]) for k in config if k in init.SECTIONS}

    # Clean up after test.
    if link.exists():
        link.unlink()


@pytest.fixture
def partial_local_config():
    """Moves a partial config file into the current working directory,
    yields the contents of that config, then cleans up.
    """
    # Create the test config in the CWD.
    path = Path('tests/data/test_use_config.cfg')
    link = Path('holoscope.conf')
    link.hardlink_to(path)

    # Send the contents of the config to the test.
    config = configparser.ConfigParser()
    config.read(link)
    yield {k: dict(config[k]) for k in config if k in init.SECTIONS}

    # Clean up after test.
    if link.exists():
        link.unlink()


@pytest.fixture
def not_exist_config():
    path = Path('_test_given_path_does_not_exist.ini')
    yield path
    if path.exists():
        path.unlink()


@pytest.fixture
def empty_directory():
    path = Path('_test_empty_directory')
    path.mkdir()
    yield path
    for child in path.iterdir():
        child.unlink()
    if path.exists():
        path.rmdir()


@pytest.fixture
def low_cap(mocker):
    """Lower the precision cap through the environment."""
    mocker.patch.dict('os.environ', {init.CAP_VARIABLE: '1024'})


# Test get_config.
def test_get_config(default_config):
    """By default, load the configuration from the default configuration
    file stored in `holoscope/data`.
    """
    assert init.get_config() == default_config


def test_get_config_with_given_path(given_config):
    """If given a path to a configuration file,
    :func:`holoscope.init.get_config` should load the
    configuration from that file.
    """
    path = Path('tests/data/test_load_config.conf')
    assert init.get_config(path) == given_config


def test_get_config_with_given_path_does_not_exist(
    default_config, not_exist_config
):
    """If given a path to a configuration file that does not exist,
    that file should be created and populated with the default config.
    """
    assert not not_exist_config.exists()
    assert init.get_config(not_exist_config) == default_config
    assert not_exist_config.exists()
    assert init.get_config(not_exist_config) == default_config


def test_get_config_with_given_path_is_config_directory(
    given_config, config_directory
):
    """If given a path to a directory with a configuration file,
    :func:`holoscope.init.get_config` should read the configuration
    from the configuration file.
    """
    assert init.get_config(config_directory) == given_config


def test_get_config_with_given_path_is_empty_directory(
    default_config, empty_directory
):
    """If given a path to a directory without a configuration file,
    a file with the default local configuration file name is created
    in that directory with the default configuration values.
    """
    assert not [_ for _ in empty_directory.iterdir()]
    assert init.get_config(empty_directory) == default_config

    path = empty_directory / c.LOCAL_CONFIG
    assert path.exists()
    assert init.get_config(path) == default_config


def test_get_config_with_given_str(given_config):
    """If given a str with the path to a configuration file,
    :func:`holoscope.init.get_config` should load the configuration
    from that file.
    """
    path = 'tests/data/test_load_config.conf'
    assert init.get_config(path) == given_config


def test_get_config_with_local(local_config):
    """If there is a configuration file in the current working directory,
    :func:`holoscope.init.get_config` should load the configuration from
    that file.
    """
    assert init.get_config() == local_config


def test_get_config_with_partial_local(partial_local_config, default_config):
    """If the local config doesn't have values for all possible keys,
    the missing keys should have the default values.
    """
    config = default_config
    config['holoscope'].update(partial_local_config['holoscope'])
    assert init.get_config() == config
    assert init.get_config()['holoscope']['dmax'] == '2'
    assert init.get_config()['holoscope']['rmax'] == '3'


# Test make_job_config.
def test_make_job_config_defaults():
    """Without a configuration, the defaults are used."""
    assert init.make_job_config() == JobConfig()


def test_make_job_config_missing_keys():
    """Keys a configuration leaves out take the job defaults."""
    config = {'holoscope': {'dmax': '2'}}
    assert init.make_job_config(config) == JobConfig(dmax=2)
    assert init.make_job_config({}) == JobConfig()


def test_make_job_config_from_file():
    """Values and constants come from the loaded configuration."""
    config = init.get_config('tests/data/test_load_config.conf')
    job = init.make_job_config(config)
    assert job.prec_start == 128
    assert job.prec_cap == 4096
    assert job.windows == (1, 32)
    assert job.holdout == 40
    assert job.format == 'json'
    assert job.constants == (('alpha', '1/3'),)


def test_make_job_config_overrides():
    """Overrides replace configured values; None leaves them alone."""
    job = init.make_job_config(dmax=5, rmax=None, constants={'b': ''})
    assert job.dmax == 5
    assert job.rmax == 3
    assert job.constants == (('b', ''),)


def test_make_job_config_env_cap(low_cap):
    """The environment can only lower the precision cap."""
    assert init.make_job_config().prec_cap == 1024
    assert init.make_job_config(prec_cap=512).prec_cap == 512


def test_make_job_config_bad_precision():
    """A start precision below the minimum is rejected."""
    config = init.get_config('tests/data/test_bad_config.cfg')
    with pytest.raises(ConfigError):
        init.make_job_config(config)


def test_make_job_config_bad_values():
    """Out of range settings are rejected."""
    cases = [
        {'dmax': 17},
        {'rmax': -1},
        {'verify_len': 10},
        {'windows': (0, 64)},
        {'format': 'xml'},
        {'prec_start': 8192, 'prec_cap': 4096},
    ]
    for overrides in cases:
        with pytest.raises(ConfigError):
            init.make_job_config(**overrides)


def test_make_job_config_not_a_number():
    """Configured values must be numbers."""
    config = init.get_default_config()
    config['holoscope']['dmax'] = 'spam'
    with pytest.raises(ConfigError):
        init.make_job_config(config)


# Test parse_windows and effective_cap.
def test_parse_windows():
    """Window lists are comma separated integers."""
    assert init.parse_windows('1, 64,512') == (1, 64, 512)
    with pytest.raises(ConfigError):
        init.parse_windows('1, spam')


def test_effective_cap_bad_variable(mocker):
    """The environment variable must be an integer."""
    mocker.patch.dict('os.environ', {init.CAP_VARIABLE: 'spam'})
    with pytest.raises(ConfigError):
        init.effective_cap()


# Test constants.
def test_constants_paths():
    """The packaged defaults file is where the constants say."""
    assert c.DEFAULT_CONFIG.name == init.DEFAULT_FILE
    assert c.DEFAULT_CONFIG.exists()
    assert c.MAX_PREC == JobConfig().prec_cap
