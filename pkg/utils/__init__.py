"""Utility modules"""
from .config import ANALYSIS_CONFIG, build_config
from .errors import (InputError, WindowInvariantError, PreconditionError,
                     ConsistencyError, OracleDisagreement, ResolutionError)
from .logging_config import setup_logging

__all__ = ['ANALYSIS_CONFIG', 'build_config', 'InputError', 'WindowInvariantError',
           'PreconditionError', 'ConsistencyError', 'OracleDisagreement',
           'ResolutionError', 'setup_logging']
