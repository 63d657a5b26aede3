"""Operator library: named isometries and seeded random test instances.

Every constructor returns a validated :class:`Isometry`.  Matrix rows are
indexed by the output basis state and columns by the input basis state,
both big-endian (site 1 is the most significant qubit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import ContractViolationError
from .linalg import as_matrix, dagger

#: Residual above which a matrix no longer counts as an isometry.
ISOMETRY_TOL = 1e-10

_MAX_QUBITS = 10


@dataclass(frozen=True)
class Isometry:
    """An inner-product preserving map from ``m_in`` qubits to ``n_out`` qubits.

    ``matrix`` has shape ``(2**n_out, 2**m_in)`` and satisfies
    ``matrix† @ matrix = identity`` within :data:`ISOMETRY_TOL`; for
    ``m_in == n_out`` it is unitary.
    """

    m_in: int
    n_out: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.m_in < 1 or self.n_out < self.m_in:
            raise ContractViolationError(
                f"need 1 <= m_in <= n_out, got {self.m_in} -> {self.n_out}"
            )
        a = as_matrix(self.matrix, "isometry matrix")
        expected = (2**self.n_out, 2**self.m_in)
        if a.shape != expected:
            raise ContractViolationError(
                f"matrix shape {a.shape} does not match {expected} for "
                f"{self.m_in} -> {self.n_out} qubits"
            )
        residual = float(np.linalg.norm(dagger(a) @ a - np.eye(a.shape[1]), 2))
        if residual > ISOMETRY_TOL:
            raise ContractViolationError(
                f"matrix is not an isometry: residual {residual:.3e}"
            )
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def is_unitary(self) -> bool:
        return self.m_in == self.n_out


def cnot() -> Isometry:
    """Controlled-NOT on two qubits; site 1 controls, site 2 is the target."""
    m = np.zeros((4, 4), dtype=np.complex128)
    for control in (0, 1):
        for target in (0, 1):
            m[2 * control + (target ^ control), 2 * control + target] = 1.0
    return Isometry(2, 2, m)


def ghz_state(n: int, sign: int = +1) -> np.ndarray:
    """The n-qubit state (|0..0> + sign |1..1>) / sqrt(2)."""
    if n < 1:
        raise ContractViolationError("need at least one qubit")
    v = np.zeros(2**n, dtype=np.complex128)
    v[0] = 1.0 / math.sqrt(2.0)
    v[-1] = sign / math.sqrt(2.0)
    return v


def ghz_isometry(n: int) -> Isometry:
    """1 -> n map sending |0>, |1> to the +/- n-qubit GHZ states."""
    if n < 1:
        raise ContractViolationError("need at least one output qubit")
    m = np.stack([ghz_state(n, +1), ghz_state(n, -1)], axis=1)
    return Isometry(1, n, m)


def shor_encoder() -> Isometry:
    """The nine-qubit bit/phase-flip code encoder.

    |0> maps to the threefold tensor power of (|000> + |111>) / sqrt(2) and
    |1> to the threefold tensor power of (|000> - |111>) / sqrt(2).
    """
    plus = ghz_state(3, +1)
    minus = ghz_state(3, -1)
    col0 = np.kron(np.kron(plus, plus), plus)
    col1 = np.kron(np.kron(minus, minus), minus)
    return Isometry(1, 9, np.stack([col0, col1], axis=1))


def dicke_state(n_qubits: int, n_ones: int) -> np.ndarray:
    """Normalized symmetric superposition of all n-qubit strings with
    ``n_ones`` qubits in state |1>."""
    if not 0 <= n_ones <= n_qubits or n_qubits < 1:
        raise ContractViolationError(
            f"invalid excitation count {n_ones} for {n_qubits} qubits"
        )
    v = np.zeros(2**n_qubits, dtype=np.complex128)
    amp = 1.0 / math.sqrt(math.comb(n_qubits, n_ones))
    for ones in combinations(range(n_qubits), n_ones):
        idx = sum(1 << (n_qubits - 1 - q) for q in ones)
        v[idx] = amp
    return v


def gisin_massar_cloner(n_clones: int) -> Isometry:
    """Optimal symmetric 1 -> n qubit cloning isometry.

    Maps one qubit onto ``2 * n_clones - 1`` qubits: the first ``n_clones``
    sites carry the clones, the remaining ``n_clones - 1`` sites the
    complementary (anticlone) register.  On a basis input ``psi`` the image
    is

        sum_j a_j |(n-j) psi, j psi_perp>_sym (x) |(n-1-j) psi_perp, j psi>_sym

    with ``a_j = sqrt(2 (n - j) / (n (n + 1)))`` and ``|...>_sym`` the
    symmetric (Dicke) state with the stated composition.  The conjugation
    implicit in the anticlone register is taken in the computational basis,
    where |0> and |1> are their own conjugates; general inputs follow by
    linearity.
    """
    n = int(n_clones)
    if n < 1:
        raise ContractViolationError("need at least one clone")
    n_out = 2 * n - 1
    alphas = [math.sqrt(2.0 * (n - j) / (n * (n + 1))) for j in range(n)]

    def image(flip: bool) -> np.ndarray:
        # flip=False encodes input |0> (psi=|0>, psi_perp=|1>); True swaps them.
        total = np.zeros(2**n_out, dtype=np.complex128)
        for j, alpha in enumerate(alphas):
            clone_ones = n - j if flip else j
            clones = dicke_state(n, clone_ones)
            if n == 1:
                total += alpha * clones
                continue
            anti_ones = j if flip else n - 1 - j
            total += alpha * np.kron(clones, dicke_state(n - 1, anti_ones))
        return total

    matrix = np.stack([image(False), image(True)], axis=1)
    return Isometry(1, n_out, matrix)


def product_unitary(factors: Sequence[np.ndarray]) -> Isometry:
    """Tensor product of single-qubit unitaries, in site order."""
    factors = list(factors)
    if not factors:
        raise ContractViolationError("need at least one factor")
    if len(factors) > _MAX_QUBITS:
        raise ContractViolationError(f"at most {_MAX_QUBITS} factors supported")
    total = np.eye(1, dtype=np.complex128)
    for k, f in enumerate(factors):
        a = as_matrix(f, f"factor {k}")
        if a.shape != (2, 2):
            raise ContractViolationError(f"factor {k} is not 2x2: shape {a.shape}")
        if np.linalg.norm(dagger(a) @ a - np.eye(2), 2) > ISOMETRY_TOL:
            raise ContractViolationError(f"factor {k} is not unitary")
        total = np.kron(total, a)
    n = len(factors)
    return Isometry(n, n, total)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary drawn from ``rng``.

    QR of a complex Gaussian matrix with the phase gauge fixed by making
    the diagonal of R real positive.
    """
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / math.sqrt(2.0))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def random_isometry(m: int, n: int, seed: int) -> Isometry:
    """Seeded Haar-random isometry: the first ``2**m`` columns of a
    Haar-random ``2**n`` unitary.

    The stream is numpy's PCG64 generator seeded with ``seed``, drawn as a
    complex standard-normal matrix and orthonormalized by QR with a positive
    diagonal-of-R gauge, so a fixed seed reproduces the same matrix.
    """
    if not 1 <= m <= n <= _MAX_QUBITS:
        raise ContractViolationError(
            f"need 1 <= m <= n <= {_MAX_QUBITS}, got m={m}, n={n}"
        )
    u = haar_unitary(2**n, np.random.default_rng(seed))
    return Isometry(m, n, u[:, : 2**m])
