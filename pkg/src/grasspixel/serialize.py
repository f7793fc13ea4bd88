"""Fixed-precision number formatting for reproducible text outputs."""

import json
import math

SIGNIFICANT_DIGITS = 9


def num(x):
    """Round ``x`` to 9 significant digits; non-finite values become None."""
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(format(x, f".{SIGNIFICANT_DIGITS}g"))


def fmt(x):
    return format(float(x), f".{SIGNIFICANT_DIGITS}g")


def dump_json(obj, path_or_file):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(text)
