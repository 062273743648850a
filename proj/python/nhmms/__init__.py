"""Fractional integrals, commutators and maximal operators on finite metric measure spaces."""

from ._nhmms import (
    FormatError,
    Lambda,
    Space,
    SuiteError,
    check_upper_doubling,
    commutator,
    default_beta0,
    doubling_maximal,
    fractional_integral,
    fractional_maximal,
    generate,
    k_coefficient,
    load_space,
    lp_norm,
    multilinear_fractional_integral,
    rbmo_norm,
    run_suite,
    save_space,
    set_threads,
    sharp_maximal,
    single_commutator,
    threads,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
