"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_scalar  # noqa: F401  (re-exported)

from .graph import CoauthorGraph, _from_index_pairs


def check_graph(G) -> CoauthorGraph:
    """Coerce ``G`` to a :class:`CoauthorGraph`.

    Accepts a graph as-is, or a square symmetric adjacency matrix (dense or
    scipy sparse) whose off-diagonal nonzeros become edges; nonzero values are
    rounded to integer weights (minimum 1). Matrix nodes are labelled ``"0"``,
    ``"1"``, ...
    """
    if isinstance(G, CoauthorGraph):
        return G
    if sp.issparse(G):
        A = sp.coo_matrix(G)
    else:
        arr = np.asarray(G)
        if arr.dtype == object or arr.ndim != 2:
            raise TypeError(
                f"expected a CoauthorGraph or a 2-d adjacency matrix, got {type(G).__name__}"
            )
        A = sp.coo_matrix(arr)
    n, n2 = A.shape
    if n != n2:
        raise ValueError(f"adjacency matrix must be square, got shape {A.shape}")
    A = A.tocsr()
    A.eliminate_zeros()
    if (A != A.T).nnz:
        raise ValueError("adjacency matrix must be symmetric")
    U = sp.triu(A, k=1).tocoo()
    w = np.maximum(np.rint(np.abs(U.data)), 1).astype(np.int64)
    return _from_index_pairs(n, U.row.astype(np.int64), U.col.astype(np.int64), w,
                             [str(i) for i in range(n)])


def check_choice(x, name, choices):
    if x not in choices:
        raise ValueError(f"{name} must be one of {sorted(choices)}, got {x!r}")
    return x
