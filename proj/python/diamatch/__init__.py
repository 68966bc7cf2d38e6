"""Maximum-weight red-blue matchings and their diametral disks."""

from ._diamatch import *  # noqa: F401,F403
from ._diamatch import GeometryError, ValidationError, __doc__  # noqa: F401
