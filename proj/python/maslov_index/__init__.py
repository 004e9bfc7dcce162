from ._maslov import (
    DomainError,
    NumericalError,
    Potential,
    ValidationError,
    ac_pulse,
    ac_system,
    appendix_wplus_limit,
    constant,
    crossing_scan,
    load_table,
    morse_index,
    random_scalar_wells,
    shifted,
    sturm_zero_count,
    tabulated,
    unitary_angles,
    wtilde,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "Potential",
    "ValidationError",
    "ac_pulse",
    "ac_system",
    "appendix_wplus_limit",
    "constant",
    "crossing_scan",
    "load_table",
    "morse_index",
    "random_scalar_wells",
    "shifted",
    "sturm_zero_count",
    "tabulated",
    "unitary_angles",
    "wtilde",
]
