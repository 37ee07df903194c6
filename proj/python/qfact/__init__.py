"""Numerical toolkit for stochastic maps between finite-dimensional
noncommutative probability spaces: GNS standard forms, modular data,
Stinespring dilations, adjoints and duals, and factorization certificates."""

from qfact._core import (
    Channel,
    Space,
    Tolerance,
    certify_jhat,
    dilate,
    factorize_abelian,
    factorize_deterministic,
    gce_factorization,
    make_channel,
    make_space,
    markov_check,
    run_problem,
)

__all__ = [
    "Channel",
    "Space",
    "Tolerance",
    "certify_jhat",
    "dilate",
    "factorize_abelian",
    "factorize_deterministic",
    "gce_factorization",
    "make_channel",
    "make_space",
    "markov_check",
    "run_problem",
]
