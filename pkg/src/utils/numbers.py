"""
Complex number rendering and parsing in the `re+imi` notation.
"""
import math
import re

_REAL = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^\s*([+-]?{_REAL})(?:([+-]{_REAL})i)?\s*$")

SIGNIFICANT_DIGITS = 15


def _clean(x: float) -> float:
    # collapse -0.0
    return x + 0.0


def format_real(x: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Render a float with `digits` significant digits."""
    return f"{_clean(float(x)):.{digits}g}"


def format_complex(z: complex, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Render z as `re+imi` with `digits` significant digits."""
    z = complex(z)
    re_part = _clean(z.real)
    im_part = _clean(z.imag)
    sign = "-" if im_part < 0 else "+"
    return f"{re_part:.{digits}g}{sign}{abs(im_part):.{digits}g}i"


def parse_complex(text: str) -> complex:
    """
    Parse `re`, `re+imi` or `re-imi`.

    Raises:
        ValueError: text is not in one of the accepted forms
    """
    match = _COMPLEX_RE.match(text)
    if not match:
        raise ValueError(f"not a complex number: {text!r}")
    re_part = float(match.group(1))
    im_part = float(match.group(2)) if match.group(2) else 0.0
    value = complex(re_part, im_part)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"non-finite complex number: {text!r}")
    return value
