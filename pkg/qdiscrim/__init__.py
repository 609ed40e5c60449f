"""
Multiple-copy discrimination of two noisy qubit states: local adaptive measurement, quantum data
gathering and majority voting.
"""
__version__ = "0.1.0"

# This import is needed for pytest to run without import errors
from . import adaptive, curves, helstrom, qdg, sim, states, voting  # noqa: E402,F401
from .errors import *  # noqa: E402,F401,F403
from .states import NoiseModel, SignalEnsemble  # noqa: E402,F401
