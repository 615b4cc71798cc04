"""Shared generators for the property suites."""

import random
from math import gcd

WALK_SEED = 20240611
WALK_SAMPLES = 10_000


def coprime_steps(max_sum):
    return [(m, n) for s in range(3, max_sum + 1) for m in range(1, s) for n in [s - m]
            if m < n and gcd(m, n) == 1]


def sample_closed_walk(m: int, n: int, k: int, rng: random.Random) -> list[int]:
    """Positions of a closed walk made of ``k*n`` moves ``+m`` and ``k*m``
    moves ``-n`` in random order, starting at 0."""
    moves = [m] * (k * n) + [-n] * (k * m)
    rng.shuffle(moves)
    pos, out = 0, []
    for mv in moves:
        out.append(pos)
        pos += mv
    assert pos == 0
    return out


def differences_realised(positions, max_d: int) -> set[int]:
    seen = set(positions)
    return {d for d in range(1, max_d + 1) if any(x + d in seen for x in seen)}


def oriented_block_walk(m: int, n: int) -> list[int]:
    """The tour of ``Pi(m, n, m + n)`` walked with short moves right and
    long moves left."""
    out, u = [], 0
    for _ in range(m + n):
        out.append(u)
        u = u + m if u < n else u - n
    assert u == 0 and sorted(out) == list(range(m + n))
    return out


def walk_property_failures(max_sum: int = 12, samples: int = WALK_SAMPLES, seed: int = WALK_SEED):
    """Run the sampled check; returns ``(checked, failures, control_ok)``."""
    rng = random.Random(seed)
    checked, failures = 0, []
    control_ok = True
    for m, n in coprime_steps(max_sum):
        want = set(range(1, m + n))
        for _ in range(samples):
            walk = sample_closed_walk(m, n, rng.randint(1, 3), rng)
            got = differences_realised(walk, m + n - 1)
            checked += 1
            if got != want:
                failures.append((m, n, sorted(want - got)))
        block = oriented_block_walk(m, n)
        if m + n in differences_realised(block, m + n):
            control_ok = False
    return checked, failures, control_ok
