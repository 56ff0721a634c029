"""Markovski-style stream cipher over n-ary groupoids invertible at one place."""

from .algebra import (
    GroupoidTable,
    NotInvertible,
    Translation,
    affine_groupoid,
    check_invertible_at,
    derive_inverse,
    evaluate,
    inverse_translation,
    is_invertible_at,
    projection_groupoid,
    translation_apply,
    translation_power,
)
from .cipher import (
    CipherKey,
    StreamState,
    SymbolError,
    decrypt,
    encrypt,
    exponent_at,
    step_fixed_args,
)

__version__ = "0.1.0"

__all__ = [
    "CipherKey",
    "GroupoidTable",
    "NotInvertible",
    "StreamState",
    "SymbolError",
    "Translation",
    "affine_groupoid",
    "check_invertible_at",
    "decrypt",
    "derive_inverse",
    "encrypt",
    "evaluate",
    "exponent_at",
    "inverse_translation",
    "is_invertible_at",
    "projection_groupoid",
    "step_fixed_args",
    "translation_apply",
    "translation_power",
]
