"""bsort: in-place bitwise MSB radix sort for integer and IEEE-754 words."""
from ._jit import HAS_JIT
from .bitword import SCHEMES, Kind, SchemeError, WordScheme, get_scheme
from .core import (
    PassRecord,
    SortStats,
    binary_quicksort,
    bsort,
    bsort_f,
    bsort_float,
    bsort_signed,
    bsort_unsigned,
    single_pass_partition,
    sort_native,
)

__version__ = "0.1.0"
