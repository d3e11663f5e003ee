"""Single-excitation dynamics and Anderson-localisation diagnostics for
engineered spin chains."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
