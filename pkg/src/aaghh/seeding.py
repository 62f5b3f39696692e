"""Per-task seed derivation.

A task seed is the first 8 bytes (big-endian) of
``sha256("<master>/<part1>/<part2>/...")``.  Tasks therefore get independent
streams that do not depend on execution order or worker count.
"""

import hashlib


def derive_seed(master: int, *path) -> int:
    key = "/".join(str(p) for p in (master, *path))
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")
