"""Generalized cluster algebras and epsilon-characters at roots of unity.

Modules:

* ``laurent``: exact sparse Laurent polynomials over the integers
* ``seeds``: generalized seeds, mutation, exchange graphs, Laurent checks
* ``typec``: the type C_n algebra via centrally symmetric triangulations
* ``sl2``: epsilon-characters for sl2 and tensor-product decomposition
* ``sl3``: sl3 at l=2, the G2 seed and the rank 2l-2 seeds
* ``verify``: computational checks of the ring isomorphisms
"""

from .laurent import LaurentError, LaurentPoly, VarTable, divide_exact, substitute
from .seeds import (
    ExchangeMatrix,
    GenSeed,
    SeedError,
    check_laurent,
    enumerate_graph,
    mutate,
    mutate_sequence,
    validate,
)
from .typec import Orbit, TypeC, chebyshev_S, crossing, initial_seed

__version__ = "0.1.0"

__all__ = [
    "ExchangeMatrix",
    "GenSeed",
    "LaurentError",
    "LaurentPoly",
    "Orbit",
    "SeedError",
    "TypeC",
    "VarTable",
    "chebyshev_S",
    "check_laurent",
    "crossing",
    "divide_exact",
    "enumerate_graph",
    "initial_seed",
    "mutate",
    "mutate_sequence",
    "substitute",
    "validate",
]
