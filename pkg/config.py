"""
Configuration module for the Vahlen/Weyl toolkit.
Centralizes environment variables, resource limits and the fixed type tables.
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# ===========================
# Resource Limits
# ===========================
ENUMERATION_MAX_LEN = int(os.getenv("ENUMERATION_MAX_LEN", "10"))
ENUMERATION_MAX_ELEMENTS = int(os.getenv("ENUMERATION_MAX_ELEMENTS", "200000"))
EXTENSION_RANK_LIMIT = int(os.getenv("EXTENSION_RANK_LIMIT", "10"))  # rank of C++, E8++ is 10
CLIFFORD_DENSE_DIM_LIMIT = int(os.getenv("CLIFFORD_DENSE_DIM_LIMIT", "10"))

# ===========================
# Caching / Workers
# ===========================
CLIFFORD_MEMO_SIZE = int(os.getenv("CLIFFORD_MEMO_SIZE", "500000"))
MAX_WORKERS = int(os.getenv("MAX_WORKERS", "4"))

# ===========================
# Logging
# ===========================
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()

# ===========================
# CLI Exit Codes
# ===========================
EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_MALFORMED = 2
EXIT_UNSUPPORTED = 3
EXIT_RESOURCE = 4

# ===========================
# Finite Types
# ===========================
# (family, smallest rank, largest rank or None)
FINITE_TYPE_RANKS = {
    "A": (1, None),
    "B": (2, None),
    "C": (3, None),
    "D": (4, None),
    "E": (6, 8),
    "F": (4, 4),
    "G": (2, 2),
}

SIMPLY_LACED_HYPERBOLIC = (
    [("A", n) for n in range(1, 8)]
    + [("D", n) for n in range(4, 9)]
    + [("E", n) for n in range(6, 9)]
)

# C_n starts at n = 3, so C2++ appears here as B2++ (C2 and B2 coincide).
HYPERBOLIC_EXTENSIONS = SIMPLY_LACED_HYPERBOLIC + (
    [("B", n) for n in range(2, 9)]
    + [("C", n) for n in range(3, 5)]
    + [("F", 4), ("G", 2)]
)


# ===========================
# Validation
# ===========================
def validate_limits():
    """Check that the configured limits are usable."""
    if ENUMERATION_MAX_LEN < 0 or ENUMERATION_MAX_ELEMENTS < 1:
        return False, "ENUMERATION_MAX_LEN must be >= 0 and ENUMERATION_MAX_ELEMENTS >= 1"
    if EXTENSION_RANK_LIMIT < 3:
        return False, "EXTENSION_RANK_LIMIT must be at least 3"
    if CLIFFORD_DENSE_DIM_LIMIT < 0 or CLIFFORD_MEMO_SIZE < 0:
        return False, "CLIFFORD_DENSE_DIM_LIMIT and CLIFFORD_MEMO_SIZE must be non-negative"
    if MAX_WORKERS < 1:
        return False, "MAX_WORKERS must be at least 1"
    return True, "Limits configuration valid"
