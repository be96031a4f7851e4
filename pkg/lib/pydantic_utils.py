from __future__ import annotations

from typing import Annotated, Any

from pydantic import BeforeValidator, PlainSerializer


def parse_complex(value: Any) -> complex:
    """Accept a complex, a real number or an ``[re, im]`` pair."""
    if isinstance(value, complex):
        return value
    if isinstance(value, int | float):
        return complex(value)
    if isinstance(value, list | tuple) and len(value) == 2:  # noqa: PLR2004
        re, im = value
        return complex(float(re), float(im))
    msg = f"Expected a complex number or an [re, im] pair, got {value!r}"
    raise ValueError(msg)


def complex_pair(value: complex) -> list[float]:
    """Serialize a complex number as ``[re, im]``."""
    return [float(value.real), float(value.imag)]


# Complex numbers travel through JSON as [re, im]; Python's float repr is the
# shortest string that round-trips, so dumps are lossless.
ComplexPair = Annotated[
    complex,
    BeforeValidator(parse_complex),
    PlainSerializer(complex_pair, return_type=list[float]),
]

ComplexTriple = tuple[ComplexPair, ComplexPair, ComplexPair]
