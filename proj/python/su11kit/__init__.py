"""su(1,1) coherent states and the pseudoharmonic oscillator."""

from ._core import (
    ConfigError,
    ContractError,
    PhoParams,
    TruncationError,
    bg_state,
    boost_matrix,
    general_cs,
    generators,
    operator,
    pg_state,
    pg_vector,
    pho,
    product_expansion,
    run_command,
    specialfn,
    variance_expansion,
)

__version__ = "0.1.0"
