"""Constants and scalar helpers shared by both kernel backends.

Both backends must produce bit-identical results; anything that influences
output lives here so the implementations cannot drift apart.
"""

# Golomb-Rice coding parameters. The parameter k is re-derived at the start
# of every row as the smallest k with count * 2**k >= sum(|residual|) over
# all previously coded rows. Quotients of Q_LIMIT or more escape to a raw
# 16-bit value (mapped residuals never exceed 2044 for in-range planes).
K_INIT = 3
K_MAX = 12
Q_LIMIT = 24
ESCAPE_BITS = 16

# decode_plane_bits error codes
DECODE_OK = 0
DECODE_TRUNCATED = 1
DECODE_TRAILING = 2
DECODE_RANGE = 3


def mid_range(min_value: int, max_value: int) -> int:
    """Mid-range predictor seed: (min + max + 1) / 2 truncated toward zero."""
    t = min_value + max_value + 1
    return t // 2 if t >= 0 else -((-t) // 2)
