"""Text formatting shared by the TSV writers and reports."""

import math

NA = "NA"


def format_p(neglog10_p: float) -> str:
    """Scientific notation with 3 significant digits, exact even below double range."""
    if neglog10_p <= 300:
        return f"{10.0 ** -neglog10_p:.2e}"
    exponent = math.floor(-neglog10_p)
    mantissa = 10.0 ** (-neglog10_p - exponent)
    text = f"{mantissa:.2f}"
    if text == "10.00":
        text, exponent = "1.00", exponent + 1
    return f"{text}e{exponent:+03d}"


def format_num(x, digits: int = 6) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return NA
    return f"{x:.{digits}g}"
