"""
milnorlab - Milnor fibration diagnostics for mixed functions f·ḡ of two or three
complex variables: Newton boundaries, monodromy zeta functions, Puiseux
branches and critical curves on the Jacobian curve.
"""
__version__ = "1.0.0"

from .polycore import Polynomial, parse_polynomial  # noqa: E402
from .newton import multiplicity_condition, newton_boundary  # noqa: E402
from .zeta import zeta_mixed_homog3, zeta_mixed_plane, zeta_plane  # noqa: E402
from .puiseux import branches, verify_branch  # noqa: E402
from .critloc import branch_report, fibration_verdict, jacobian  # noqa: E402

__all__ = [
    "Polynomial",
    "parse_polynomial",
    "newton_boundary",
    "multiplicity_condition",
    "zeta_plane",
    "zeta_mixed_plane",
    "zeta_mixed_homog3",
    "branches",
    "verify_branch",
    "jacobian",
    "branch_report",
    "fibration_verdict",
]
