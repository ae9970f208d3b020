"""Exact integer helpers."""


def integer_root(x: int, k: int) -> int:
    """Largest ``r >= 0`` with ``r**k <= x``."""
    if x < 0:
        raise ValueError("integer_root of a negative number")
    if k < 1:
        raise ValueError("root order must be positive")
    if x < 2 or k == 1:
        return x
    # start above the root, then Newton steps decrease monotonically
    r = 1 << -(-x.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            return r
        r = nxt


def ceil_root(x: int, k: int) -> int:
    """Smallest ``q >= 0`` with ``q**k >= x``."""
    if x <= 0:
        return 0
    r = integer_root(x, k)
    return r if r**k == x else r + 1
