"""
Key quantization and the key file format (`value/scale`, e.g. `10610/1`).
"""
import logging
import math
import re
from decimal import Decimal, ROUND_HALF_UP

from src.errors import KeyFormatError, Overflow, ZeroKey
from src.models.records import INT64_MAX, KeyScalar

logger = logging.getLogger(__name__)

KEY_TEXT_RE = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*$")


def derive_key_scalar(lam: float, scale: int = 1000) -> KeyScalar:
    """
    Quantize an eigenvalue into a key: value = round-half-away-from-zero(lam * scale).

    Raises:
        Overflow: the product does not fit in a signed 64-bit integer
        ZeroKey: the value rounds to zero
    """
    if scale <= 0:
        raise KeyFormatError(f"key scale must be positive, got {scale}")
    product = float(lam) * scale
    if not math.isfinite(product):
        raise Overflow(f"eigenvalue {lam} times scale {scale} is not finite")
    value = int(Decimal(product).to_integral_value(rounding=ROUND_HALF_UP))
    if abs(value) > INT64_MAX:
        raise Overflow(f"quantized key {value} exceeds the signed 64-bit range")
    if value == 0:
        raise ZeroKey(f"eigenvalue {lam} rounds to a zero key at scale {scale}")
    logger.debug(f"Quantized eigenvalue {lam} at scale {scale} to {value}")
    return KeyScalar(value=value, scale=scale)


def parse_key_text(text: str) -> KeyScalar:
    match = KEY_TEXT_RE.match(text)
    if not match:
        raise KeyFormatError(f"expected 'value/scale', got '{text.strip()}'")
    value, scale = int(match.group(1)), int(match.group(2))
    if scale == 0:
        raise KeyFormatError("key scale must be positive")
    return KeyScalar(value=value, scale=scale)
