"""
Coding ordered trees by offspring counts along the succession line, and back.
"""

from codec.codec_types import (
    CensoredWindowError,
    CodecError,
    CodeSequence,
    FiniteCodeReport,
    RoundtripReport,
)
from codec.codec_utils import (
    compare_with_window,
    decode_sequence_text,
    encode_tree_text,
    finite_code_check,
    phi_R,
    psi_R,
    resolved_code,
    roundtrip_check,
)

__all__ = [
    "CensoredWindowError",
    "CodeSequence",
    "CodecError",
    "FiniteCodeReport",
    "RoundtripReport",
    "compare_with_window",
    "decode_sequence_text",
    "encode_tree_text",
    "finite_code_check",
    "phi_R",
    "psi_R",
    "resolved_code",
    "roundtrip_check",
]
