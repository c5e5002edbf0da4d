"""
Settings Manager - Run settings persistence and precision resolution
"""
import json
import logging
import os
from pathlib import Path

from config import (
    SETTINGS_FILE, DEFAULT_SETTINGS, PRECISION_ENV_VAR, MIN_PRECISION_DIGITS,
    OUTPUT_FORMATS, ERROR_PRECISION_TOO_LOW, ERROR_PRECISION_INVALID,
    ERROR_SETTINGS_INVALID
)
from modules.errors import ConfigurationError

logger = logging.getLogger(__name__)


def validate_precision(value):
    """
    Coerce a precision value to int and enforce the minimum

    Args:
        value: int or string from the CLI, environment or settings file

    Returns:
        int: number of significant decimal digits
    """
    try:
        digits = int(str(value).strip())
    except (TypeError, ValueError):
        raise ConfigurationError(ERROR_PRECISION_INVALID.format(value=value))
    if digits < MIN_PRECISION_DIGITS:
        raise ConfigurationError(
            ERROR_PRECISION_TOO_LOW.format(minimum=MIN_PRECISION_DIGITS, value=digits)
        )
    return digits


class SettingsManager:
    def __init__(self, settings_file=None, environ=None):
        self.settings_file = Path(settings_file) if settings_file else SETTINGS_FILE
        self.environ = os.environ if environ is None else environ
        self.settings = DEFAULT_SETTINGS.copy()
        self.loaded, self.load_message = self.load_settings()

    def load_settings(self):
        """
        Load settings from the JSON file over the defaults

        Returns:
            tuple: (success: bool, message: str)
        """
        try:
            if self.settings_file.exists():
                with open(self.settings_file, 'r', encoding='utf-8') as f:
                    loaded_settings = json.load(f)
                if not isinstance(loaded_settings, dict):
                    raise ValueError("top-level JSON value must be an object")
                self.settings.update(loaded_settings)
                return True, f"Loaded settings from {self.settings_file}"
            return True, "Settings file not found, using defaults"
        except (OSError, ValueError) as e:
            logger.error("Error loading settings from %s: %s", self.settings_file, e)
            return False, str(e)

    def _positive_int(self, key):
        value = self.settings.get(key, DEFAULT_SETTINGS[key])
        try:
            number = int(value)
        except (TypeError, ValueError):
            raise ConfigurationError(ERROR_SETTINGS_INVALID.format(key=key, value=value))
        if number < 1:
            raise ConfigurationError(ERROR_SETTINGS_INVALID.format(key=key, value=value))
        return number

    def get_precision_digits(self, cli_value=None):
        """
        Resolve the working precision

        The command-line flag wins over the environment variable, which wins
        over the settings file.
        """
        if cli_value is not None:
            return validate_precision(cli_value)
        env_value = self.environ.get(PRECISION_ENV_VAR)
        if env_value:
            return validate_precision(env_value)
        return validate_precision(self.settings.get('precision_digits'))

    def get_eps_order(self):
        return self._positive_int('eps_order')

    def get_oracle_terms(self):
        return self._positive_int('oracle_terms')

    def get_oracle_levels(self):
        return self._positive_int('oracle_levels')

    def get_jobs(self):
        """Get the number of worker processes for verify-all"""
        return self._positive_int('jobs')

    def get_coeff_max_order(self):
        return self._positive_int('coeff_max_order')

    def get_integral_tol(self):
        """Get the quadrature tolerance used for residual tables"""
        return str(self.settings.get('integral_tol', DEFAULT_SETTINGS['integral_tol']))

    def get_default_format(self):
        """Get the output encoding"""
        fmt = self.settings.get('default_format', 'csv')
        if fmt not in OUTPUT_FORMATS:
            raise ConfigurationError(ERROR_SETTINGS_INVALID.format(key='default_format', value=fmt))
        return fmt
