"""densitylab: densities of sumsets, product sets and subset sums on finite prefixes."""

from .density import DensityReport, Schedule, density_report, freiman_gap, periodic_density_exact
from .errors import CapacityError, ConstructionError, UndefinedInputError
from .intset import (
    PrefixSet,
    count_prefix,
    from_elements,
    from_mask,
    from_predicate,
    load_prefix_set,
    product_set,
    save_prefix_set,
    subset_sums,
    sumset,
)
from .numtheory import (
    ArithTables,
    build_arith_tables,
    euler_phi,
    is_kth_power_free,
    largest_prime_factor,
    mertens_product,
    omega,
    primes_up_to,
)

__version__ = "0.1.0"

__all__ = [
    "ArithTables",
    "CapacityError",
    "ConstructionError",
    "DensityReport",
    "PrefixSet",
    "Schedule",
    "UndefinedInputError",
    "build_arith_tables",
    "count_prefix",
    "density_report",
    "euler_phi",
    "freiman_gap",
    "from_elements",
    "from_mask",
    "from_predicate",
    "is_kth_power_free",
    "largest_prime_factor",
    "load_prefix_set",
    "mertens_product",
    "omega",
    "periodic_density_exact",
    "primes_up_to",
    "product_set",
    "save_prefix_set",
    "subset_sums",
    "sumset",
]
