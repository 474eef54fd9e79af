from ._minklab import *  # noqa: F401,F403
