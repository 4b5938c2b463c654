import os

from .errors import BudgetError

DEFAULT_ENUM_BUDGET = 2 ** 24
DEFAULT_LP_BUDGET = 2 ** 20


def _override():
    raw = os.environ.get("OADIFF_BUDGET")
    if raw is None or raw.strip() == "":
        return None
    value = int(raw)
    if value < 1:
        raise ValueError("OADIFF_BUDGET must be a positive integer")
    return value


def enum_budget() -> int:
    """Maximum number of points a brute-force enumeration may visit."""
    return _override() or DEFAULT_ENUM_BUDGET


def lp_budget() -> int:
    """Maximum number of word variables an LP builder may declare."""
    return _override() or DEFAULT_LP_BUDGET


def check(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise BudgetError(f"{what}: size {size} exceeds budget {limit} "
                          f"(set OADIFF_BUDGET to raise it)")
