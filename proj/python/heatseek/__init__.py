"""Thermal/RGB fusion for locating objects that may conceal cameras."""

from ._heatseek import *  # noqa: F401,F403
from ._heatseek import HeatseekError, __doc__  # noqa: F401
