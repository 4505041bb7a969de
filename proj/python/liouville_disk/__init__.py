"""Python interface to the liouville-disk C++ core."""

from ._liouville import *  # noqa: F401,F403
from ._liouville import __doc__  # noqa: F401
