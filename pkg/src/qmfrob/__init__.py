"""Exact arithmetic for a rank-2 family of noncongruence cusp forms.

Subpackages:

- cyclo: the coefficient field Q(i, sqrt2, sqrt3), exact.
- qseries: eta quotients and the named forms on the q^(1/24) grid.
- congruence: three- and five-term congruence checks, quartic recovery.
- frobenius: point counting on the elliptic surfaces, trace assembly.
- qmfactor: splitting sets and conjugate-quadratic factorizations.
- isogeny: symbolic verification of the displayed surface maps.
- cli: report-producing command line.
"""

from .cyclo import CycloNum, sqrt_small
from .congruence import CharPoly4, asd_check, scholl_check, recover_charpoly
from .frobenius import assemble_charpoly, count_points, new_trace
from .qmfactor import QuadFactorization, factor_qm, legendre, splitting_set
from .qseries import QSeries, build_f, build_form, eta_expand

__all__ = [
    "CycloNum", "sqrt_small", "CharPoly4", "asd_check", "scholl_check",
    "recover_charpoly", "assemble_charpoly", "count_points", "new_trace",
    "QuadFactorization", "factor_qm", "legendre", "splitting_set",
    "QSeries", "build_f", "build_form", "eta_expand",
]

__version__ = "0.1.0"
