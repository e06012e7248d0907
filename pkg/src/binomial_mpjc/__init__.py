"""Binomial bosonic code state synthesis via multiphoton spin-boson dynamics.

Submodules
----------
``hilbert``
    Truncated Fock-space linear algebra: states, density matrices,
    fidelities, partial trace, diagonal phase optimization.
``codes``
    Binomial codewords, primitive states, parity-selective rotations.
``dynamics``
    Closed-form multiphoton Jaynes-Cummings evolution, postselection,
    deterministic reduced density matrices, and a brute-force oracle.
``open_system``
    Lindblad master-equation evolution and fidelity-versus-rate sweeps.
``scan``
    Deterministic parallel grid scans (match counts, optimum tables,
    coefficient zero sets).
``cli``
    Command-line entry point with bit-stable CSV/JSON emission.
"""

from . import codes, dynamics, hilbert, open_system, scan

__all__ = ["codes", "dynamics", "hilbert", "open_system", "scan"]

__version__ = "0.1.0"
