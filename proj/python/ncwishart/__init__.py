"""Non-central Wishart laws Gamma(p, omega; sigma) and Wishart processes."""

from ._core import (
    Error,
    NumericalFailure,
    RefusalError,
    ValidationError,
    WishartParams,
    char_exponents,
    existence_verdict,
    from_gupta_nagar,
    from_letac,
    gindikin_contains,
    identity_suites,
    riccati_integrate,
    simulate_path,
    transition_params,
)

__all__ = [
    "Error",
    "NumericalFailure",
    "RefusalError",
    "ValidationError",
    "WishartParams",
    "char_exponents",
    "existence_verdict",
    "from_gupta_nagar",
    "from_letac",
    "gindikin_contains",
    "identity_suites",
    "riccati_integrate",
    "simulate_path",
    "transition_params",
]
