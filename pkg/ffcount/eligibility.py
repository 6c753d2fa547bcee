"""
Budget gate for the brute-force oracles.
Checks whether an enumeration is small enough to run under the configured budget.
"""

from config import ENUMERATION_BUDGET


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its budget; the message states the required size."""


def check_enumeration(size: int, budget: int | None = None) -> dict:
    """
    Returns a dict with:
      - eligible (bool)
      - reason (str)
      - required (int): number of items the enumeration would visit
    """
    if budget is None:
        budget = ENUMERATION_BUDGET

    if size <= budget:
        return {"eligible": True, "reason": f"{size} <= budget {budget}", "required": size}

    return {
        "eligible": False,
        "reason": f"enumeration needs {size} items, budget is {budget}",
        "required": size,
    }


def require_enumeration(size: int, budget: int | None = None, what: str = "enumeration") -> None:
    eligibility = check_enumeration(size, budget)
    if not eligibility["eligible"]:
        raise BudgetExceededError(
            f"{what}: {eligibility['reason']} (raise it with --budget {eligibility['required']})"
        )
