import itertools

import pytest


def brute_projective(n, p):
    """Canonical points of P^n(F_p) by filtering all nonzero vectors."""
    out = []
    for v in itertools.product(range(p), repeat=n + 1):
        if any(v) and next(c for c in v if c) == 1:
            out.append(v)
    return out


@pytest.fixture
def projective_points():
    return brute_projective
