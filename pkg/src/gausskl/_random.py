"""Reproducible standard-normal deviates.

The stream is fixed so that Monte Carlo results can be reproduced from a
seed alone:

1. Raw words come from the Philox-4x64 counter-based generator (10 rounds)
   keyed with ``key = (seed, 0)`` and counter starting at zero, as exposed by
   ``numpy.random.Philox(key=seed).random_raw``. Word ``j`` of the stream is
   a pure function of ``(seed, j)``.
2. ``m`` deviates consume ``2 * ceil(m / 2)`` words ``w_0, w_1, ...``. Pair
   ``t`` uses ``u1 = ((w_{2t} >> 11) + 1) * 2**-53`` in (0, 1] and
   ``u2 = (w_{2t+1} >> 11) * 2**-53`` in [0, 1).
3. Basic Box-Muller: ``z_{2t} = r * cos(2 pi u2)`` and
   ``z_{2t+1} = r * sin(2 pi u2)`` with ``r = sqrt(-2 log u1)``.
   The final odd deviate, if any, is dropped.

A request for ``m`` deviates is always a prefix of a request for more.
"""

import numpy as np

from ._validation import check_count, check_seed

_TWO_M53 = 2.0**-53


def standard_normal(seed, count):
    """Return ``count`` standard-normal deviates for ``seed`` as a 1-D array."""
    seed = check_seed(seed)
    count = check_count(count, 1, "count")
    pairs = (count + 1) // 2
    words = np.random.Philox(key=seed).random_raw(2 * pairs)
    top = (words >> np.uint64(11)).astype(np.float64)
    u1 = (top[0::2] + 1.0) * _TWO_M53
    u2 = top[1::2] * _TWO_M53
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:count]
