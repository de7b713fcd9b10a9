"""Formal affine Hecke algebras of formal group laws, checked degree by degree.

The layers build on one another: truncated series (``series``), formal group
laws (``fgl``), root data and Weyl groups (``rootdata``), the formal group
algebra with its Demazure and tau operators (``fga``), localized elements and
the twisted algebra with its Demazure and Hecke elements (``localized``,
``hecke``), and statement checks (``verify``) driven from ``cli``.
"""

__version__ = "0.1.0"

from .errors import FormalHeckeError  # noqa: E402
from .fga import FormalGroupAlgebra  # noqa: E402
from .fgl import FormalGroupLaw, normalize, parse_fgl  # noqa: E402
from .hecke import HeckeAlgebra, Twisted  # noqa: E402
from .localized import Localized  # noqa: E402
from .rootdata import RootDatum, parse_datum  # noqa: E402
from .series import TruncSeries  # noqa: E402
from .verify import CheckSpec, Verdict, check_statement, run_suite  # noqa: E402

__all__ = [
    "CheckSpec",
    "FormalGroupAlgebra",
    "FormalGroupLaw",
    "FormalHeckeError",
    "HeckeAlgebra",
    "Localized",
    "RootDatum",
    "TruncSeries",
    "Twisted",
    "Verdict",
    "check_statement",
    "normalize",
    "parse_datum",
    "parse_fgl",
    "run_suite",
]
