import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from monofact.core import build_triple
from monofact.exactreal import RadicalScalar, radical

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rs(table):
    """RadicalScalar from {radicand: coefficient}."""
    return RadicalScalar.from_terms({d: Fraction(c) for d, c in table.items()})


@pytest.fixture
def shear():
    # A = [[1,1],[0,1]], v = (sqrt3 + sqrt2, sqrt2), w = (sqrt3, sqrt2)
    return build_triple([[1, 1], [0, 1]], [rs({3: 1, 2: 1}), radical(1, 2)])


@pytest.fixture
def three_by_three():
    return build_triple([[2, 1, 0], [1, 1, 0], [1, 1, 1]], [radical(1, 5), radical(1, 3), radical(3, 2)])


PRIMES = (2, 3, 5, 7, 11, 13, 17)


def dominated(A, w=None):
    """Valid triple for ``A`` whose w is ``w`` (default sqrt of the first primes)."""
    from monofact.core import mat_vec
    w = w or [radical(1, p) for p in PRIMES[:len(A)]]
    return build_triple(A, list(mat_vec(A, w)))
