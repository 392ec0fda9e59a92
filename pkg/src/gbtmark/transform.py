"""Graph-based transform over fixed-size audio frames.

The sample graph is a chain: every sample is linked to its immediate
neighbours with weight ``w1`` and to second neighbours with weight
``w2``, which models the strong correlation of nearby audio samples.
Frames are projected onto the orthonormal eigenbasis of the graph
Laplacian, ordered from low to high graph frequency, so the leading
coefficients concentrate most of the frame energy.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericError, ValidationError

# Eigenvalues closer than this are treated as one eigenspace when the
# basis columns are put into a reproducible order.
_EIGENVALUE_TIE = 1e-9


@dataclass(frozen=True)
class GraphConfig:
    """Chain-graph edge weights and frame length."""

    frame_size: int = 10
    w1: float = 1.0
    w2: float = 0.3

    def __post_init__(self):
        if not (isinstance(self.frame_size, (int, np.integer)) and self.frame_size >= 3):
            raise ConfigError(f"frame_size must be an integer >= 3, got {self.frame_size!r}")
        if not self.w1 > 0:
            raise ConfigError(f"w1 must be > 0, got {self.w1!r}")
        if not self.w2 >= 0:
            raise ConfigError(f"w2 must be >= 0, got {self.w2!r}")
        object.__setattr__(self, "frame_size", int(self.frame_size))
        object.__setattr__(self, "w1", float(self.w1))
        object.__setattr__(self, "w2", float(self.w2))


@dataclass(frozen=True, eq=False)
class TransformPlan:
    """Precomputed Laplacian eigenbasis for one frame size.

    ``basis`` holds eigenvectors as columns, sorted by ascending
    eigenvalue and sign-normalized. Immutable after construction, so a
    single plan can serve any number of concurrent frame transforms.
    """

    config: GraphConfig
    laplacian: np.ndarray
    eigenvalues: np.ndarray
    basis: np.ndarray

    @property
    def frame_size(self) -> int:
        return self.config.frame_size


def build_adjacency(config: GraphConfig) -> np.ndarray:
    """Adjacency matrix with w1 on the first off-diagonals, w2 on the second."""
    n = config.frame_size
    adj = np.zeros((n, n))
    first = np.arange(n - 1)
    adj[first, first + 1] = adj[first + 1, first] = config.w1
    second = np.arange(n - 2)
    adj[second, second + 2] = adj[second + 2, second] = config.w2
    return adj


def build_laplacian(adjacency) -> np.ndarray:
    """Combinatorial Laplacian D - A of a weighted adjacency matrix."""
    adj = np.asarray(adjacency, dtype=np.float64)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValidationError(f"adjacency must be square, got shape {adj.shape}")
    if not np.array_equal(adj, adj.T):
        raise ValidationError("adjacency must be symmetric")
    if np.any(adj < 0):
        raise ValidationError("adjacency weights must be nonnegative")
    if np.any(np.diag(adj) != 0):
        raise ValidationError("adjacency must have a zero diagonal")
    return np.diag(adj.sum(axis=1)) - adj


def _normalize_signs(vecs):
    # Make the largest-magnitude entry of each column positive; argmax
    # resolves magnitude ties to the lowest row index.
    lead = np.argmax(np.abs(vecs), axis=0)
    signs = np.where(vecs[lead, np.arange(vecs.shape[1])] < 0, -1.0, 1.0)
    return vecs * signs


def _order_within_ties(vals, vecs):
    # Inside a run of numerically equal eigenvalues the solver's column
    # order is arbitrary; reorder those columns by the row index of
    # their largest-magnitude entry so plans are reproducible.
    n = vals.size
    start = 0
    for stop in range(1, n + 1):
        if stop < n and vals[stop] - vals[stop - 1] <= _EIGENVALUE_TIE:
            continue
        if stop - start > 1:
            cols = np.arange(start, stop)
            lead = np.argmax(np.abs(vecs[:, cols]), axis=0)
            vecs[:, cols] = vecs[:, cols[np.argsort(lead, kind="stable")]]
        start = stop
    return vecs


def make_plan(config: GraphConfig) -> TransformPlan:
    """Eigendecompose the frame-graph Laplacian into an orthonormal basis."""
    lap = build_laplacian(build_adjacency(config))
    try:
        vals, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    vecs = _order_within_ties(vals, _normalize_signs(vecs))
    if np.max(np.abs((vecs * vals) @ vecs.T - lap)) > 1e-9:
        raise NumericError("eigenvectors do not reconstruct the Laplacian")
    for arr in (lap, vals, vecs):
        arr.flags.writeable = False
    return TransformPlan(config=config, laplacian=lap, eigenvalues=vals, basis=vecs)


def forward(plan: TransformPlan, frame) -> np.ndarray:
    """Project a frame onto the graph eigenbasis (coefficients = V^T s)."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.shape != (plan.frame_size,):
        raise ValidationError(
            f"frame must have {plan.frame_size} samples, got shape {frame.shape}")
    return plan.basis.T @ frame


def inverse(plan: TransformPlan, coeffs) -> np.ndarray:
    """Rebuild a frame from its transform coefficients (s = V c)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != (plan.frame_size,):
        raise ValidationError(
            f"expected {plan.frame_size} coefficients, got shape {coeffs.shape}")
    return plan.basis @ coeffs
