"""
init
~~~~

Basic initialization functions for :mod:`holoscope`.
"""
import os
from configparser import ConfigParser
from importlib.resources import files
from pathlib import Path
from typing import Union

import holoscope.data
from holoscope.errors import ConfigError
from holoscope.model import JobConfig


# Types.
Section = dict[str, str]
Config = dict[str, Section]


# Common data.
EXTS = ('cfg', 'conf', 'ini',)
SECTIONS = ('holoscope', 'holoscope_constants',)
DEFAULT_FILE = 'defaults.cfg'
LOCAL_FILE = 'holoscope.cfg'
MAX_PREC = 16384
MIN_PREC = 32
MAX_BOUND = 16
MIN_VERIFY = 50
INT_KEYS = (
    'prec_start', 'prec_cap', 'dmax', 'rmax', 'verify_len', 'holdout',
)
CAP_VARIABLE = 'HOLOSCOPE_PREC_CAP'


# Configuration functions.
def get_config(path: Union[Path, str] = '') -> Config:
    """Get the configuration.

    :param path: (Optional.) The path to the configuration file.
        If no path is passed, it will default to using the default
        configuration data from holoscope.constants.
    :return: A :class:`dict` object.
    :rtype: dict

    Usage:

        >>> loc = 'tests/data/test_load_config.conf'
        >>> get_config(loc)['holoscope']['dmax']
        '2'

    Configuration File Format
    =========================
    The file structure of the configuration file is the Windows
    INI-like structure used by Python's configparser module. The
    configuration should have two sections: `holoscope` and
    `holoscope_constants`.

    holoscope
    ---------
    The `holoscope` section can contain the following keys:

    *   `prec_start`: Working precision in bits to start from.
    *   `prec_cap`: Precision in bits never to go beyond.
    *   `dmax`: Largest recurrence order the falsifier tries.
    *   `rmax`: Largest coefficient degree the falsifier tries.
    *   `windows`: Comma separated first indices of sampled windows.
    *   `verify_len`: How many terms a recurrence is checked on.
    *   `holdout`: How many terms past a window validate a guess.
    *   `format`: `text` or `json`.
    *   `timing`: Whether to report the elapsed time.

    holoscope_constants
    -------------------
    Each key declares a constant usable in expressions. The value is
    an expression without `x` that gives the constant's value, or
    empty for a purely symbolic constant.

    Example::

        [holoscope]
        prec_start = 64
        prec_cap = 16384
        dmax = 3
        rmax = 3
        windows = 1, 64, 512
        verify_len = 200
        holdout = 50
        format = text
        timing = no

        [holoscope_constants]
        alpha = 1/3
    """
    # Start the config with the default values.
    config = get_default_config()

    # If there is a local config file, override the default config
    # with the config from the local file.
    cwd = Path.cwd()
    for ext in EXTS:
        for local_path in cwd.glob(f'*.{ext}'):
            new = read_config_file(local_path)
            merge_config(config, new)

    # If there is a given configuration file, override any found
    # config with the values from the given file.
    if path:
        given = Path(path)
        new = read_config_file(given)
        merge_config(config, new)

    # Return the loaded configuration.
    return config


def get_default_config() -> Config:
    """Get the default configuration values.

    :return: The default configuration as a :class:`dict`.
    :rtype: dict
    """
    default_path = get_default_path() / DEFAULT_FILE
    return read_config(default_path)


def merge_config(config: Config, new: Config) -> Config:
    """Override the keys of `config` with the keys of `new` section
    by section, so a partial file only changes what it names.

    :param config: The configuration to update in place.
    :param new: The overriding values.
    :return: The updated configuration.
    :rtype: dict
    """
    for name, section in new.items():
        config.setdefault(name, {}).update(section)
    return config


def read_config(path: Path) -> Config:
    """Read the configuration file at the given path.

    :param path: The path to the configuration file.
    :return: The configuration as a :class:`dict`.
    :rtype: dict
    """
    parser = ConfigParser()
    parser.read(path)
    return {k: dict(parser[k]) for k in parser if k in SECTIONS}


def read_config_dir(path: Path, config: Union[dict, None] = None) -> Config:
    """Read the "INI" formatted configuration files in a directory.

    :param path: The path to the configuration directory.
    :config: Default configuration values.
    :return: The loaded configuration as a :class:`dict`.
    :rtype: dict
    """
    if not config:
        config = {}
    for ext in EXTS:
        for file_path in path.glob(f'*.{ext}'):
            new = read_config_file(file_path)
            merge_config(config, new)
    return config


def read_config_file(path: Path) -> Config:
    """Read an "INI" formatted configuration file.

    :param path: The path to the configuration file.
    :return: The contents of the configuration file as a :class:`dict`.
    :rtype: dict
    """
    # If the file doesn't exist, create it and add the default
    # config.
    if not path.exists():
        config = get_default_config()
        write_config_file(path, config)
        return config

    # If the given path was a directory, either read the config files
    # in the directory or add a new config file there.
    elif path.is_dir():
        config = read_config_dir(path)
        if not config:
            file_path = path / LOCAL_FILE
            return read_config_file(file_path)
        return config

    # Otherwise, read in the config file and return it as a dict.
    return read_config(path)


def write_config_file(path: Path, config: Config) -> Config:
    """Write an "INI" formatted configuration file.

    :param path: The path to the configuration file to write.
    :param config: The values to write into the configuration file.
    :return: The configuration values written into the files.
    :rtype: dict
    """
    parser = ConfigParser()
    parser.read_dict(config)
    with open(path, 'w') as fh:
        parser.write(fh)
    return config


# Job configuration.
def effective_cap(cap: int = MAX_PREC) -> int:
    """Apply the HOLOSCOPE_PREC_CAP environment variable, which can
    only lower the precision cap.

    :param cap: The cap requested by the job.
    :return: The cap in force.
    :rtype: int

    Usage:

        >>> effective_cap(4096)
        4096
    """
    cap = min(cap, MAX_PREC)
    value = os.environ.get(CAP_VARIABLE, '').strip()
    if value:
        try:
            cap = min(cap, int(value))
        except ValueError:
            msg = f'{CAP_VARIABLE} must be an integer, not {value!r}.'
            raise ConfigError(msg)
    return cap


def parse_windows(text: str) -> tuple[int, ...]:
    """Read a comma separated list of window starts.

    :param text: The list, such as `1, 64, 512`.
    :return: The window starts as a :class:`tuple`.
    :rtype: tuple

    Usage:

        >>> parse_windows('1, 64, 512')
        (1, 64, 512)
    """
    try:
        windows = tuple(int(part) for part in text.split(',') if part.strip())
    except ValueError:
        msg = f'Windows must be comma separated integers, not {text!r}.'
        raise ConfigError(msg)
    return windows


def make_job_config(
    config: Union[Config, None] = None,
    **overrides
) -> JobConfig:
    """Build the :class:`JobConfig` for a run from a loaded
    configuration and command line overrides, enforcing its
    invariants.

    :param config: A configuration from :func:`get_config`. The
        default configuration is used when none is given.
    :param overrides: Values that replace the configured ones.
        Overrides set to `None` are ignored.
    :return: The job configuration.
    :rtype: holoscope.model.JobConfig

    Usage:

        >>> make_job_config(dmax=2).dmax
        2
    """
    if config is None:
        config = get_default_config()
    section = config.get('holoscope', {})
    declared = config.get('holoscope_constants', {})
    default = JobConfig()
    try:
        values = {
            key: int(section[key]) if key in section else getattr(default, key)
            for key in INT_KEYS
        }
        values['windows'] = (
            parse_windows(section['windows'])
            if 'windows' in section else default.windows
        )
        values['constants'] = tuple(sorted(declared.items()))
        values['format'] = section.get('format', default.format)
        if 'timing' in section:
            values['timing'] = section['timing'].lower() in (
                'yes', 'true', 'on', '1'
            )
        else:
            values['timing'] = default.timing
    except ValueError as ex:
        msg = f'Configuration value is not a number: {ex}'
        raise ConfigError(msg)

    for key, value in overrides.items():
        if value is None:
            continue
        if key == 'constants':
            merged = dict(values['constants'])
            merged.update(value)
            value = tuple(sorted(merged.items()))
        values[key] = value
    values['prec_cap'] = effective_cap(values['prec_cap'])
    job = JobConfig(**values)
    check_job_config(job)
    return job


def check_job_config(job: JobConfig) -> None:
    """Raise :class:`ConfigError` when the job's settings break the
    configuration invariants.

    :param job: The job configuration to check.
    :return: None.
    :rtype: NoneType
    """
    if not MIN_PREC <= job.prec_start <= job.prec_cap <= MAX_PREC:
        msg = (
            f'Precision must satisfy {MIN_PREC} <= start <= cap <= '
            f'{MAX_PREC}; got start={job.prec_start}, cap={job.prec_cap}.'
        )
        raise ConfigError(msg)
    if not (0 <= job.dmax <= MAX_BOUND and 0 <= job.rmax <= MAX_BOUND):
        msg = f'Order and degree bounds must lie in [0, {MAX_BOUND}].'
        raise ConfigError(msg)
    if job.verify_len < MIN_VERIFY:
        msg = f'The verification length must be at least {MIN_VERIFY}.'
        raise ConfigError(msg)
    if not job.windows or any(start < 1 for start in job.windows):
        msg = 'Window starts must be positive integers.'
        raise ConfigError(msg)
    if job.format not in ('text', 'json'):
        msg = f'Unknown output format {job.format!r}.'
        raise ConfigError(msg)


# Utility functions.
def get_default_path() -> Path:
    """Get the path to the default data files.

    :return: The path to the default data location as a
        :class:`pathlib.Path`.
    :rtype: pathlib.Path
    """
    data_pkg = files(holoscope.data)
    return Path(f'{data_pkg}')
