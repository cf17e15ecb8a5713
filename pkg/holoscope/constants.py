"""
constants
~~~~~~~~~

Common paths and values for holoscope.
"""
from holoscope.init import (
    DEFAULT_FILE,
    LOCAL_FILE,
    MAX_PREC,
    get_default_path
)


# Path roots.
DEFAULT_CONFIG = get_default_path() / DEFAULT_FILE
LOCAL_CONFIG = LOCAL_FILE

# Guard bits carried by intermediate ball computations.
GUARD_BITS = 20

# Define the values that will be imported with an asterisk.
__all__ = [
    # Common paths.
    'DEFAULT_CONFIG',
    'LOCAL_CONFIG',

    # Common data.
    'GUARD_BITS',
    'MAX_PREC',
]
