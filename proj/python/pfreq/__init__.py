"""Generalized principal frequencies lambda1(Omega; q) for 1 <= q <= 2 on grid domains.

Thin wrapper over the compiled extension; see ``solve``, ``certify`` and ``bounds``.
"""

from ._pfreq import (
    ConvergenceError,
    Domain,
    DomainError,
    ParseError,
    alpha_q,
    bounds,
    certify,
    conjugate_bruteforce,
    conjugate_check,
    conjugate_closed,
    disk,
    domain,
    hidden_functional,
    lambda1_interval,
    pi_2q,
    polygon,
    protter_hersch,
    rectangle,
    solve,
)

__all__ = [
    "ConvergenceError",
    "Domain",
    "DomainError",
    "ParseError",
    "alpha_q",
    "bounds",
    "certify",
    "conjugate_bruteforce",
    "conjugate_check",
    "conjugate_closed",
    "disk",
    "domain",
    "hidden_functional",
    "lambda1_interval",
    "pi_2q",
    "polygon",
    "protter_hersch",
    "rectangle",
    "solve",
]
