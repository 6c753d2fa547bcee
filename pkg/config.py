import os
from dotenv import load_dotenv

load_dotenv()


def _real_value(value: str | None) -> str | None:
    """Returns None if the value is blank or still the placeholder from .env.example."""
    if not value:
        return None
    if "<" in value or "your-" in value:
        return None
    return value


def _int_env(name: str, default: int) -> int:
    value = _real_value(os.getenv(name))
    return int(value) if value is not None else default


# Enumeration budgets
# Every brute-force oracle refuses to run past these; the CLI flags --budget and
# --poly-budget override them per invocation.
ENUMERATION_BUDGET = _int_env("FFCOUNT_BUDGET", 10**7)      # field elements
POLY_BUDGET = _int_env("FFCOUNT_POLY_BUDGET", 10**6)        # candidate polynomials

# Largest q^n the `verify` grid walks by default (pure-Python enumeration speed)
VERIFY_BUDGET = _int_env("FFCOUNT_VERIFY_BUDGET", 3**8)

# Property suites: exhaustive up to EXHAUSTIVE_LIMIT elements, sampled beyond
PROPERTY_SAMPLES = _int_env("FFCOUNT_SAMPLES", 10_000)
RANDOM_SEED = _int_env("FFCOUNT_SEED", 20170101)
EXHAUSTIVE_LIMIT = 3**5

# F_q sizes up to which add/mul/inv tables are precomputed
TABLE_LIMIT = 256

# Relative tolerance for root moduli and DFT rounding; every final artifact is exact
ROOT_TOLERANCE = 1e-6

# JSONL run log for verification checks and errata (blank disables)
METRICS_FILE = _real_value(os.getenv("FFCOUNT_METRICS", "output/verify.jsonl"))

# Top-level tag of every JSON document the CLI emits
SCHEMA = "ffcount/1"

# q values the verification grid covers when --grid is not given
DEFAULT_GRID = (3,)

# q values whose root-multiplicity tables `verify` always derives (no enumeration needed)
COROLLARY_GRID = (3, 5, 7, 9, 11)
