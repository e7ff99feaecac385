"""Continued fractions for the (3, n, infinity) triangle groups.

Every function returns plain Python data decoded from the JSON the C++ core
produces, so results match the command-line tool field for field.
"""

import json as _json

from . import _core
from ._core import PrecisionExhausted, is_admissible, theta

__version__ = _core.__version__

__all__ = [
    "PrecisionExhausted",
    "adler",
    "borel_scan",
    "expand",
    "expand_random",
    "field_info",
    "is_admissible",
    "measure_invariance",
    "orbit_tables",
    "periodic_point",
    "region",
    "theta",
    "transcendence",
    "uniform",
    "verify",
]


def _decoded(fn):
    def wrapper(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


field_info = _decoded(_core.field_info)
verify = _decoded(_core.verify)
orbit_tables = _decoded(_core.orbit_tables)
region = _decoded(_core.region)
expand = _decoded(_core.expand)
expand_random = _decoded(_core.expand_random)
borel_scan = _decoded(_core.borel_scan)
periodic_point = _decoded(_core.periodic_point)
transcendence = _decoded(_core.transcendence)
adler = _decoded(_core.adler)
uniform = _decoded(_core.uniform)
measure_invariance = _decoded(_core.measure_invariance)
