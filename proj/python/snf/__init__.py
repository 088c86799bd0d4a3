"""Width-streamable sine-activated neural fields."""

try:
    from snf._snf import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # pragma: no cover - in-tree builds put _snf on sys.path
    from _snf import *  # noqa: F401,F403
