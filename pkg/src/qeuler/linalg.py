"""Bipartite matrix reorderings, polar decomposition, and unitarity defects.

A square matrix of order n = d*d is read as an operator on a two-party space.
Composite indices are row-major throughout: the pair (a, i) labels row
a*d + i, and likewise for columns. Every reordering below is a permutation of
the entries, so each one preserves the Frobenius norm and is an involution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DimensionError, NumericError

__all__ = [
    "block_dim",
    "reshuffle",
    "partial_transpose",
    "flattenings",
    "PolarFactors",
    "polar_decompose",
    "unitarity_defect",
    "two_unitarity_defect",
    "MultiUnitarityReport",
    "multi_unitarity_check",
]


def block_dim(m) -> int:
    """Side length d of the bipartite blocks of a square matrix of order d*d."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    d = math.isqrt(m.shape[0])
    if d * d != m.shape[0]:
        raise DimensionError(
            f"order {m.shape[0]} is not a perfect square; "
            "bipartite reorderings are undefined"
        )
    return d


def _as_blocks(m):
    d = block_dim(m)
    return np.asarray(m).reshape(d, d, d, d), d


def reshuffle(m, dual: bool = False) -> np.ndarray:
    """Swap the column index of party one with the row index of party two.

    The entry at (a*d + i, b*d + j) lands at (a*d + b, i*d + j). With
    dual=True the mirrored variant is applied instead and the entry lands at
    (j*d + i, b*d + a). Both variants are involutions.
    """
    t, d = _as_blocks(m)
    t = t.transpose(3, 1, 2, 0) if dual else t.transpose(0, 2, 1, 3)
    return t.reshape(d * d, d * d)


def partial_transpose(m, side: str = "second") -> np.ndarray:
    """Transpose the indices of one party while leaving the other untouched.

    side="second" sends the entry at (a*d + i, b*d + j) to (a*d + j, b*d + i);
    side="first" sends it to (b*d + i, a*d + j). Applying one then the other
    equals the ordinary transpose.
    """
    t, d = _as_blocks(m)
    if side == "second":
        t = t.transpose(0, 3, 2, 1)
    elif side == "first":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError("side must be 'first' or 'second'")
    return t.reshape(d * d, d * d)


def flattenings(t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three balanced matrix unfoldings of a four-index tensor.

    For t[i, j, k, l] with all axes of length d, returns (x, y, z) where
    x[(i,j), (k,l)], y[(i,k), (j,l)] and z[(i,l), (k,j)] hold the tensor
    entries under row-major composite indices. y == reshuffle(x) and
    z == partial_transpose(x).
    """
    t = np.asarray(t)
    if t.ndim != 4 or len(set(t.shape)) != 1:
        raise DimensionError(
            f"expected a tensor with four equal axes, got shape {t.shape}"
        )
    d = t.shape[0]
    n = d * d
    x = t.reshape(n, n)
    y = t.transpose(0, 2, 1, 3).reshape(n, n)
    z = t.transpose(0, 3, 2, 1).reshape(n, n)
    return x, y, z


@dataclass(frozen=True)
class PolarFactors:
    """Left polar factors m = positive_part @ unitary_part."""

    positive_part: np.ndarray
    unitary_part: np.ndarray


def polar_decompose(m) -> PolarFactors:
    """Left polar decomposition m = H V with H >= 0 and V unitary.

    Built from the singular value decomposition m = P diag(s) Q*:
    V = P Q* and H = P diag(s) P*. V is the unitary matrix closest to m in
    Frobenius norm.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"polar factors need a square matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError("matrix has non-finite entries")
    try:
        p, s, qh = np.linalg.svd(m)
    except np.linalg.LinAlgError:
        # the fast divide-and-conquer driver sporadically fails to converge
        # on long sweeps; the plain QR-iteration driver does not
        import scipy.linalg

        p, s, qh = scipy.linalg.svd(m, lapack_driver="gesvd")
    v = p @ qh
    h = (p * s) @ p.conj().T
    return PolarFactors(positive_part=h, unitary_part=v)


def _binary_int_or_none(m):
    """An int64 copy of m when every entry is exactly 0 or 1, else None."""
    if np.iscomplexobj(m):
        if m.imag.any():
            return None
        m = m.real
    if m.dtype.kind not in "iuf":
        return None
    if not np.all((m == 0) | (m == 1)):
        return None
    return m.astype(np.int64)


def unitarity_defect(m) -> float:
    """Frobenius distance of m* m from the identity; 0 exactly iff unitary.

    Matrices whose entries are exactly 0 or 1 (permutation candidates) are
    checked in integer arithmetic so the zero is exact, never a rounding
    artifact.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitarity defect needs a square matrix, got {m.shape}")
    n = m.shape[0]
    b = _binary_int_or_none(m)
    if b is not None:
        g = b.T @ b
        np.fill_diagonal(g, g.diagonal() - 1)
        return math.sqrt(int((g * g).sum()))
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise NumericError("matrix has non-finite entries")
    g = m.conj().T @ m
    g = g - np.eye(n)
    return float(np.linalg.norm(g))


def two_unitarity_defect(m) -> float:
    """Worst unitarity defect among m, reshuffle(m) and partial_transpose(m).

    Zero exactly iff m is 2-unitary. The maximum (not the sum) is reported so
    the value reads directly as "the worst of the three conditions".
    """
    m = np.asarray(m)
    block_dim(m)
    return max(
        unitarity_defect(m),
        unitarity_defect(reshuffle(m)),
        unitarity_defect(partial_transpose(m)),
    )


@dataclass(frozen=True)
class MultiUnitarityReport:
    """Per-unfolding unitarity defects of a 2M-index tensor."""

    half_order: int
    dim: int
    tol: float
    defects: tuple  # ((row_axes, defect), ...) in lexicographic row-axes order

    @property
    def max_defect(self) -> float:
        return max(v for _, v in self.defects)

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tol


def multi_unitarity_check(t, dim: int, half_order: int, tol: float = 1e-10):
    """Unitarity of every inequivalent balanced unfolding of a tensor.

    The input (any shape with dim**(2*half_order) entries) is reshaped to
    2*half_order axes of length dim. For each axis subset of size half_order
    that contains axis 0, the unfolding with those axes as rows is tested;
    complementary subsets give transposed unfoldings, so listing only the
    subsets containing axis 0 covers all inequivalent conditions:
    3 for half_order 2, 10 for half_order 3.
    """
    if half_order not in (2, 3):
        raise CapabilityError(
            f"half-order {half_order} not supported; only 2 and 3 are implemented"
        )
    t = np.asarray(t)
    n_axes = 2 * half_order
    if t.size != dim**n_axes:
        raise DimensionError(
            f"tensor has {t.size} entries, expected {dim}**{n_axes} = {dim**n_axes}"
        )
    t = t.reshape((dim,) * n_axes)
    half = dim**half_order
    results = []
    for rows in itertools.combinations(range(n_axes), half_order):
        if rows[0] != 0:
            continue
        cols = tuple(q for q in range(n_axes) if q not in rows)
        mat = t.transpose(rows + cols).reshape(half, half)
        results.append((rows, unitarity_defect(mat)))
    return MultiUnitarityReport(
        half_order=half_order, dim=dim, tol=tol, defects=tuple(results)
    )
