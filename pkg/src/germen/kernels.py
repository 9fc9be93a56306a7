"""Numeric hot loops, with a numba path and a pure-numpy fallback.

Set ``GERMEN_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``)
to force the numpy path. Both paths accumulate sums strictly left to
right so they agree bit for bit; the clustering relies on that for its
order-independence guarantee.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not (
    _flag("GERMEN_DISABLE_NUMBA") or _flag("NUMBA_DISABLE_JIT")
)


# -- sparse row x dense vector ------------------------------------------------


def row_dots_numpy(indptr, indices, data, dense):
    """Dot product of every CSR row with ``dense``.

    Each row is accumulated in ascending column order. Entries whose column
    is zero in ``dense`` add an exact ``0.0`` and leave the sum untouched.
    """
    n_rows = indptr.shape[0] - 1
    out = np.zeros(n_rows, dtype=np.float64)
    if n_rows == 0 or indices.shape[0] == 0:
        return out
    lengths = np.diff(indptr)
    width = int(lengths.max())
    row_of = np.repeat(np.arange(n_rows), lengths)
    pos = np.arange(indices.shape[0]) - indptr[row_of]
    padded = np.zeros((n_rows, width), dtype=np.float64)
    padded[row_of, pos] = data * dense[indices]
    for j in range(width):
        out += padded[:, j]
    return out


def _row_dots_loop(indptr, indices, data, dense):
    n_rows = indptr.shape[0] - 1
    out = np.zeros(n_rows, dtype=np.float64)
    for r in range(n_rows):
        acc = 0.0
        for p in range(indptr[r], indptr[r + 1]):
            acc += data[p] * dense[indices[p]]
        out[r] = acc
    return out


# -- fuzzy itemset supports ---------------------------------------------------


def itemset_supports_numpy(values, candidates):
    """Min-fusion support of each candidate itemset.

    ``values`` is objects x variables, ``candidates`` is an int array of
    shape (n_candidates, k) holding column indices.
    """
    n_obj = values.shape[0]
    out = np.zeros(candidates.shape[0], dtype=np.float64)
    if candidates.shape[0] == 0:
        return out
    mins = values[:, candidates].min(axis=2)
    for o in range(n_obj):
        out += mins[o]
    return out


def _itemset_supports_loop(values, candidates):
    n_obj = values.shape[0]
    n_cand, k = candidates.shape
    out = np.zeros(n_cand, dtype=np.float64)
    for c in range(n_cand):
        acc = 0.0
        for o in range(n_obj):
            m = values[o, candidates[c, 0]]
            for j in range(1, k):
                v = values[o, candidates[c, j]]
                if v < m:
                    m = v
            acc += m
        out[c] = acc
    return out


if HAVE_NUMBA:
    row_dots_numba = njit(cache=True, nogil=True)(_row_dots_loop)
    itemset_supports_numba = njit(cache=True, nogil=True)(_itemset_supports_loop)
else:  # pragma: no cover
    row_dots_numba = row_dots_numpy
    itemset_supports_numba = itemset_supports_numpy

if USE_NUMBA:
    row_dots = row_dots_numba
    itemset_supports = itemset_supports_numba
else:
    row_dots = row_dots_numpy
    itemset_supports = itemset_supports_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
