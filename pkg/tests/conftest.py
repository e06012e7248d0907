"""Shared fixtures and reference constants for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from binomial_mpjc import codes

# ---------------------------------------------------------------------------
# Reference codewords with explicit radical amplitudes.
# Each entry: (N, S, mu, {fock_index: exact amplitude}).
# ---------------------------------------------------------------------------
SQ = math.sqrt
PRINTED_CODEWORDS = [
    (1, 1, 0, {0: 1 / SQ(2), 4: 1 / SQ(2)}),
    (1, 1, 1, {2: 1.0}),
    (2, 1, 0, {0: 1 / 2, 4: SQ(3) / 2}),
    (2, 1, 1, {2: SQ(3) / 2, 6: 1 / 2}),
    (3, 1, 0, {0: 1 / (2 * SQ(2)), 4: SQ(6) / (2 * SQ(2)), 8: 1 / (2 * SQ(2))}),
    (3, 1, 1, {2: 1 / SQ(2), 6: 1 / SQ(2)}),
    (4, 1, 0, {0: 1 / 4, 4: SQ(10) / 4, 8: SQ(5) / 4}),
    (4, 1, 1, {2: SQ(5) / 4, 6: SQ(10) / 4, 10: 1 / 4}),
    (5, 1, 0, {0: 1 / (4 * SQ(2)), 4: SQ(15) / (4 * SQ(2)),
               8: SQ(15) / (4 * SQ(2)), 12: 1 / (4 * SQ(2))}),
    (5, 1, 1, {2: SQ(6) / (4 * SQ(2)), 6: SQ(20) / (4 * SQ(2)),
               10: SQ(6) / (4 * SQ(2))}),
    (2, 2, 0, {0: 1 / 2, 6: SQ(3) / 2}),
    (2, 2, 1, {3: SQ(3) / 2, 9: 1 / 2}),
]


def codeword(N: int, S: int, mu: int, dim: int | None = None):
    spec = codes.CodewordSpec(N, S, mu)
    return codes.binomial_codeword(spec, dim or spec.min_dim())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20250826)
