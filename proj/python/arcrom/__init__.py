"""Nonlinear structural-dynamics ROMs with ECSW-accelerated tensor identification."""

try:
    from arcrom._arcrom import *  # noqa: F401,F403  (installed layout)
except ImportError:  # pragma: no cover - in-build layout
    from _arcrom import *  # noqa: F401,F403

__version__ = "0.1.0"
