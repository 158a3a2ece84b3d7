"""Guessing-based list decoding with blockwise soft output."""

from grandlab._core import (
    brier_decomposition,
    brier_score,
    code_info,
    decode,
    encode,
    run_config,
)

__all__ = [
    "brier_decomposition",
    "brier_score",
    "code_info",
    "decode",
    "encode",
    "run_config",
]

__version__ = "0.1.0"
