"""Exact special values of L-functions of tori and 1-motives over F_q(t)."""

from .errors import (
    FFWeilError,
    NotGeometricallyConnected,
    NotKummerCompatible,
    ParseError,
    ValidationError,
    VerificationFailed,
)
from .exact import Poly, RationalFunctionQ, laurent_lead, pade_reconstruct, smith_normal_form
from .fields import AbelianCover, Place, decomposition, enumerate_places, genus_of_cover, get_field
from .galois import GaloisLattice, FrobModule, group_h1, sha_kernel, standard_lattice
from .jobs import Report, emit, parse_jobspec, run
from .lfunctions import Pushforward, Skyscraper, VirtualSheaf, l_function, l_truncated, zeta_of_cover
from .motives import OneMotive, verify_theorem_main
from .tori import (
    induced_torus,
    norm_one_torus,
    product_torus,
    split_torus,
    tamagawa_modern,
    tamagawa_ono,
    verify_ono,
    verify_torus_theorem,
)
from .weil_etale import chi_w_virtual, verify_theorem_constructible

__version__ = "0.1.0"
