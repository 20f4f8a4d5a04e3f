"""Homological algebra over finite categories.

The heavy lifting lives in the compiled extension ``cctlab._core``; this
package re-exports its operations under their public names.
"""

from cctlab._core import (
    hh_table,
    run_check,
    subdivide_category,
    validate_file,
    version,
)

__version__ = version()
__all__ = [
    "hh_table",
    "run_check",
    "subdivide_category",
    "validate_file",
    "version",
]
