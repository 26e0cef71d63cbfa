"""Exact hitting-time distributions, strong stationary times and
geometric-sum approximation bounds for finite ergodic Markov chains."""

try:
    from ._mchit import *  # noqa: F401,F403
    from ._mchit import __doc__  # noqa: F401
except ImportError:  # running against a bare build tree
    from _mchit import *  # noqa: F401,F403

__version__ = "0.1.0"
