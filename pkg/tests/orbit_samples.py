"""Random orbit parameters for property tests, with forced ties and zeros."""

from __future__ import annotations

import numpy as np

from spinbranch.orbits import OrbitParam


def _head(rng, k, allow_zero=True):
    v = np.sort(rng.uniform(0.3, 5.0, size=k))[::-1].round(3)
    for i in range(1, k):
        if rng.random() < 0.25:
            v[i] = v[i - 1]
    if allow_zero and k and rng.random() < 0.3:
        z = rng.integers(1, k + 1)
        v[k - z:] = 0.0
    return [float(x) for x in v]


def random_orbit(rng, family: str, m: int) -> OrbitParam:
    n = (m + 2) // 2
    if family == "elliptic":
        head = _head(rng, n - 1, allow_zero=False)
        last = head[-1] if rng.random() < 0.2 else round(float(rng.uniform(0.05, head[-1])), 3)
        return OrbitParam("elliptic", tuple(head) + ((1 if rng.random() < 0.5 else -1) * last,), m)
    if family == "nonsemisimple":
        head = _head(rng, n - 1)
        if head[0] == 0:
            head[0] = 1.0
        return OrbitParam("nonsemisimple", tuple(head), m, 1 if rng.random() < 0.5 else -1)
    if family != "nonelliptic":
        raise ValueError(family)
    an = 0.0 if rng.random() < 0.15 else round(float(rng.uniform(0.1, 4.0)), 3)
    if m % 2:
        head = _head(rng, n - 1)
    else:
        head = _head(rng, n - 1)
        if head[-1] and rng.random() < 0.5:
            head[-1] = -head[-1]
    if head[0] == 0:
        head[0] = 1.0  # an all-zero head has no depth-one points
    return OrbitParam("nonelliptic", tuple(head) + (an,), m)


def families_for(m: int) -> tuple[str, ...]:
    return ("elliptic", "nonelliptic", "nonsemisimple") if m % 2 else ("nonelliptic",)
