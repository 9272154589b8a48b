"""Opers, Miura maps, q-deformations and their verification suites."""

from ._opera import (
    DepthExhausted,
    ParseError,
    canonicalize,
    classical_limit,
    flows,
    miura,
    normalize,
    q_miura,
    qchar,
    run_cli,
    verify,
)

__all__ = [
    "DepthExhausted",
    "ParseError",
    "canonicalize",
    "classical_limit",
    "flows",
    "miura",
    "normalize",
    "q_miura",
    "qchar",
    "run_cli",
    "verify",
]
