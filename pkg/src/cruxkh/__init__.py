"""Universal Khovanov homology of singular link diagrams and its crux reduction."""

from .diagram import Diagram, load, parse, serialize
from .exactalg import QQ, ZZ, Ring
from .frobenius import FrobeniusParams
from .khovanov import kh_complex, kh_homology, phi_hat
from .crux import crux_complex, cone_xi, long_exact_report, xi
from .jones import jones, kauffman_jones

__version__ = "0.1.0"

__all__ = [
    "Diagram", "load", "parse", "serialize", "QQ", "ZZ", "Ring", "FrobeniusParams",
    "kh_complex", "kh_homology", "phi_hat", "crux_complex", "cone_xi", "long_exact_report",
    "xi", "jones", "kauffman_jones",
]
