"""Factorized Lax pairs of Calogero-Moser and Ruijsenaars-Schneider models."""

from ._core import (
    Error,
    FunctionClass,
    dedekind_eta,
    error_kind,
    evolve,
    factorized_lax_matrix,
    hamiltonian,
    lax_matrix,
    m_matrix,
    r_matrix,
    suite_names,
    theta,
    theta_char,
    verify,
    yang_baxter_residual,
)

__all__ = [
    "Error",
    "FunctionClass",
    "dedekind_eta",
    "error_kind",
    "evolve",
    "factorized_lax_matrix",
    "hamiltonian",
    "lax_matrix",
    "m_matrix",
    "r_matrix",
    "suite_names",
    "theta",
    "theta_char",
    "verify",
    "yang_baxter_residual",
]
