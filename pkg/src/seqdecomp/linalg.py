"""Dense complex linear algebra used by the rest of the package.

Everything operates on plain numpy arrays of ``complex128``.  Composite
qubit indices are big-endian throughout: site 1 is the most significant
bit of a basis-state index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractViolationError, NumericFailureError

#: Relative threshold below which singular values count as numerically zero.
DEFAULT_RANK_TOL = 1e-10

#: Gram residual above which a column set no longer counts as orthonormal.
GRAM_TOL = 1e-10

# Candidate basis vectors whose projection onto the orthogonal complement
# is shorter than this are skipped during unitary completion.
_COMPLETION_DROP_TOL = 1e-8


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce ``m`` to a nonempty, finite, 2-D complex array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise ContractViolationError(
            f"{name} must be a nonempty 2-D array, got shape {np.shape(m)}"
        )
    if not np.isfinite(a).all():
        raise ContractViolationError(f"{name} contains non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.swapaxes(m, -1, -2))


@dataclass(frozen=True)
class SvdResult:
    """Thin factorization ``m = u @ diag(s) @ v_dagger`` with a fixed phase gauge."""

    u: np.ndarray
    s: np.ndarray
    v_dagger: np.ndarray
    numerical_rank: int

    def __post_init__(self):
        for a in (self.u, self.s, self.v_dagger):
            a.setflags(write=False)

    def truncated(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """The factors restricted to the numerically nonzero singular values."""
        r = self.numerical_rank
        return self.u[:, :r], self.s[:r], self.v_dagger[:r, :]


def svd(m, rank_tol: float = DEFAULT_RANK_TOL) -> SvdResult:
    """Thin SVD with deterministic phases and a relative numerical rank.

    Each left singular vector is rephased so that its first entry of
    largest modulus is real and positive; the matching right vector absorbs
    the conjugate phase, leaving the product unchanged.  This removes the
    phase ambiguity of the factorization so that repeated runs produce
    identical factors.  ``numerical_rank`` counts singular values above
    ``rank_tol * s[0]``.
    """
    a = as_matrix(m)
    if rank_tol < 0:
        raise ContractViolationError("rank_tol must be nonnegative")
    try:
        u, s, vd = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericFailureError(f"SVD failed to converge for shape {a.shape}") from exc
    for k in range(u.shape[1]):
        col = u[:, k]
        lead = col[int(np.argmax(np.abs(col)))]
        if abs(lead) > 0.0:
            phase = lead / abs(lead)
            u[:, k] = col / phase
            vd[k, :] *= phase
    rank = int(np.count_nonzero(s > rank_tol * s[0])) if s.size and s[0] > 0 else 0
    return SvdResult(u, s, vd, rank)


def complete_to_unitary(cols) -> np.ndarray:
    """Extend orthonormal columns to a full unitary matrix, deterministically.

    The first ``k`` columns of the result are the input columns exactly as
    given.  The remaining ones are obtained by projecting the standard basis
    vectors, in index order, onto the orthogonal complement of everything
    accepted so far; candidates whose projection falls below 1e-8 in norm
    are skipped.
    """
    q = as_matrix(cols, "cols")
    d, k = q.shape
    if k > d:
        raise ContractViolationError(f"more columns ({k}) than rows ({d})")
    gram_residual = float(np.linalg.norm(dagger(q) @ q - np.eye(k), 2))
    if gram_residual >= GRAM_TOL:
        raise ContractViolationError(
            f"columns are not orthonormal: Gram residual {gram_residual:.3e}"
        )
    w = np.zeros((d, d), dtype=np.complex128)
    w[:, :k] = q
    have = k
    for e in range(d):
        if have == d:
            break
        v = np.zeros(d, dtype=np.complex128)
        v[e] = 1.0
        for _ in range(2):  # second projection pass mops up rounding residue
            v -= w[:, :have] @ (dagger(w[:, :have]) @ v)
        nv = float(np.linalg.norm(v))
        if nv < _COMPLETION_DROP_TOL:
            continue
        w[:, have] = v / nv
        have += 1
    if have != d:
        raise NumericFailureError("unitary completion exhausted the standard basis")
    return w


def regroup(
    m,
    in_shape: Sequence[int],
    out_shape: Sequence[int],
    permutation: Sequence[int],
) -> np.ndarray:
    """Re-index tensor data: split into legs, permute them, and regroup.

    ``m`` is read row-major as a tensor with leg dimensions ``in_shape``,
    its legs are transposed by ``permutation`` (entry ``i`` of the output
    order names an input leg), and the result is read out row-major with
    shape ``out_shape``.  Pure index bookkeeping: applying the inverse
    permutation recovers the input bit for bit.
    """
    a = np.asarray(m, dtype=np.complex128)
    ins = tuple(int(x) for x in in_shape)
    outs = tuple(int(x) for x in out_shape)
    perm = tuple(int(x) for x in permutation)
    if math.prod(ins) != a.size:
        raise ContractViolationError(
            f"in_shape {ins} does not match element count {a.size}"
        )
    if sorted(perm) != list(range(len(ins))):
        raise ContractViolationError(
            f"permutation {perm} is not a bijection on {len(ins)} legs"
        )
    if math.prod(outs) != a.size:
        raise ContractViolationError(
            f"out_shape {outs} does not match element count {a.size}"
        )
    return a.reshape(ins).transpose(perm).reshape(outs)


def reduced_density_matrix(psi, dims: Sequence[int], keep: int) -> np.ndarray:
    """Density matrix of subsystem ``keep`` (0-based) of a pure state."""
    dims = tuple(int(d) for d in dims)
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size != math.prod(dims):
        raise ContractViolationError(
            f"state length {v.size} does not match dims {dims}"
        )
    if not 0 <= keep < len(dims):
        raise ContractViolationError(f"subsystem index {keep} out of range")
    t = np.moveaxis(v.reshape(dims), keep, 0).reshape(dims[keep], -1)
    return t @ dagger(t)
