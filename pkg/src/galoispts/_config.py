"""Runtime limits and backend selection.

All values can be overridden through environment variables; they are read once
at import time.
"""

import os


def _env_int(name, default):
    raw = os.environ.get(name)
    return default if raw in (None, "") else int(raw)


# Fields with at most this many elements get log/exp/Zech tables and can be
# fed to the vectorized kernels.
TABLE_CAP = _env_int("GALOISPTS_TABLE_CAP", 1 << 20)

# Largest field over which exhaustive scans (point enumeration, candidate
# scans) are allowed.
SCAN_CAP = _env_int("GALOISPTS_SCAN_CAP", 1 << 20)

# Upper bound on bits per field element (p**n <= 2**ELEMENT_BITS).
ELEMENT_BITS = _env_int("GALOISPTS_ELEMENT_BITS", 64)

# Default bound for breadth-first group closure.
GROUP_CAP = _env_int("GALOISPTS_GROUP_CAP", 10**6)

# GALOISPTS_JIT=0 forces the pure-numpy kernels even when numba is present.
JIT_REQUESTED = os.environ.get("GALOISPTS_JIT", "1").strip().lower() not in ("0", "false", "no", "off")
