from typing import Optional


def fmt_float(x: Optional[float], nd: int = 3) -> str:
    if x is None:
        return "—"
    return f"{x:.{nd}f}"


def fmt_pct(x: Optional[float], nd: int = 1) -> str:
    if x is None:
        return "—"
    return f"{100.0 * x:.{nd}f}%"


def fmt_ratio(x: Optional[float]) -> str:
    if x is None:
        return "—"
    return f"x{x:.3f}"


def fmt_int(x: Optional[float]) -> str:
    if x is None:
        return "—"
    return str(int(round(x)))


def fmt_delta(x: Optional[float], nd: int = 3) -> str:
    if x is None:
        return "—"
    sign = "+" if x >= 0 else ""
    return f"{sign}{x:.{nd}f}"
