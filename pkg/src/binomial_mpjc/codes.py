"""Binomial codeword construction.

Logical codewords with square-root-binomial amplitudes over Fock states
spaced by ``S + 1``, the unnormalized primitive state containing both
parity sectors, and the parity-selective-rotation extraction that recovers
both codewords from the primitive state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import OscillatorState

__all__ = [
    "CodewordSpec",
    "binomial_codeword",
    "primitive_state",
    "rotate_fock",
    "extract_codewords_from_primitive",
]


@dataclass(frozen=True)
class CodewordSpec:
    """Parameters of a binomial codeword.

    ``N`` is the dephasing-order parameter, ``S`` the Fock spacing minus
    one, and ``mu`` the logical label (0 or 1).
    """

    N: int
    S: int
    mu: int

    def __post_init__(self) -> None:
        if self.N < 0:
            raise ValueError("N must be non-negative")
        if self.S < 0:
            raise ValueError("S must be non-negative")
        if self.mu not in (0, 1):
            raise ValueError("mu must be 0 or 1")

    def min_dim(self) -> int:
        """Smallest truncation that holds the codeword (and the primitive)."""
        return (self.S + 1) * (self.N + 1) + 1


def _require_dim(dim: int, N: int, S: int) -> None:
    need = (S + 1) * (N + 1) + 1
    if dim < need:
        raise ValueError(
            f"dim={dim} too small for (N={N}, S={S}); need at least {need}"
        )


def binomial_codeword(spec: CodewordSpec, dim: int) -> OscillatorState:
    """Normalized logical codeword ``|mu>_{N,S}``.

    The amplitude at Fock index ``(S+1)*(2k + mu)`` is
    ``sqrt(C(N+1, 2k+mu) / 2**N)``; all other amplitudes vanish.  Binomial
    coefficients are evaluated in exact integer arithmetic before the
    square root.
    """
    _require_dim(dim, spec.N, spec.S)
    amps = np.zeros(dim, dtype=np.complex128)
    norm_sq = 0
    for j in range(spec.mu, spec.N + 2, 2):
        c = math.comb(spec.N + 1, j)
        amps[(spec.S + 1) * j] = math.sqrt(c)
        norm_sq += c
    # Sum of every other binomial coefficient of order N+1 is 2**N.
    amps /= math.sqrt(float(norm_sq))
    return OscillatorState(amps)


def primitive_state(N: int, S: int, dim: int) -> tuple[OscillatorState, float]:
    """Unnormalized primitive state and its squared norm (exactly 2).

    The amplitude at Fock index ``(S+1)*j`` is ``sqrt(C(N+1, j) / 2**N)``
    for ``j = 0 .. N+1``; the squared norm is ``2**(N+1) / 2**N = 2``.
    The state is returned unnormalized so that the even/odd projections
    below come out with unit norm under their own constants.
    """
    _require_dim(dim, N, S)
    amps = np.zeros(dim, dtype=np.complex128)
    scale = math.sqrt(2.0**N)
    for j in range(N + 2):
        amps[(S + 1) * j] = math.sqrt(math.comb(N + 1, j)) / scale
    return OscillatorState(amps), 2.0


def rotate_fock(state: OscillatorState, angle: float) -> OscillatorState:
    """Number rotation ``exp(i * angle * n)`` applied amplitude-wise."""
    n = np.arange(state.dim)
    return OscillatorState(state.amplitudes * np.exp(1j * angle * n))


def extract_codewords_from_primitive(
    N: int, S: int, dim: int
) -> tuple[OscillatorState, OscillatorState]:
    """Both logical codewords obtained from the primitive state by parity.

    The primitive is supported on Fock indices ``(S+1) * j``; a rotation by
    ``pi / (S+1)`` imprints the phase ``(-1)**j`` on those components, so
    adding/subtracting the rotated primitive projects onto even/odd ``j``,
    which are the mu = 0 and mu = 1 codewords after normalization.  (For
    even ``S`` a plain rotation by pi imprints the same phases; for odd
    ``S`` every support index is even and a pi rotation acts trivially, so
    the spacing-aware angle is the generally valid choice.)
    """
    theta, _ = primitive_state(N, S, dim)
    rotated = rotate_fock(theta, math.pi / (S + 1))
    even = OscillatorState(theta.amplitudes + rotated.amplitudes).normalized()
    odd = OscillatorState(theta.amplitudes - rotated.amplitudes).normalized()
    return even, odd
