from __future__ import annotations

from fractions import Fraction

from .. import linalg


def exact_params(defaults: dict, overrides: dict | None) -> dict[str, Fraction]:
    """Merge parameter overrides into ``defaults``, keeping values rational.

    Decimal strings such as ``"0.1"`` become exact fractions so that the
    constant parts of a residual stay rational.
    """
    params = dict(defaults)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise KeyError(f"unknown parameter {key!r}; expected one of {sorted(params)}")
        params[key] = value
    return {k: linalg.to_fraction(str(v) if isinstance(v, float) else v) for k, v in params.items()}
