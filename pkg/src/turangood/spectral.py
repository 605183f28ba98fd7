"""Walk counts and the path-count bound via the adjacency spectral radius."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counting import count_copies
from .families import path
from .graph import Graph, GraphError, iter_bits

DEFAULT_TOL = 1e-10
MAX_ITER = 1_000_000


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralEstimate:
    mu: float
    iterations: int
    residual: float


def walk_count(g: Graph, edges: int) -> int:
    """Number of walks with ``edges`` edges, i.e. ``1^T A^edges 1``, in exact integers."""
    if edges < 0:
        raise ValueError("walk length must be non-negative")
    nbrs = [list(iter_bits(m)) for m in g.adj]
    w = [1] * g.n
    for _ in range(edges):
        w = [sum(w[u] for u in nb) for nb in nbrs]
    return sum(w)


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for e in g.edges():
        a[e.u, e.v] = a[e.v, e.u] = 1.0
    return a


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> SpectralEstimate:
    """Largest adjacency eigenvalue by power iteration from the all-ones vector.

    Iterates with ``A + I`` so that ``-mu`` (present for bipartite graphs) can
    never tie with the top eigenvalue; the Rayleigh quotient of ``A`` is the
    estimate, and ``residual`` is ``||Ax - mu x||`` for the unit iterate.
    """
    if g.n == 0:
        raise GraphError("spectral radius of the empty graph is undefined")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = adjacency_matrix(g)
    if not a.any():
        return SpectralEstimate(0.0, 0, 0.0)
    x = np.ones(g.n) / np.sqrt(g.n)
    prev = float(x @ a @ x)
    for it in range(1, max_iter + 1):
        y = a @ x + x
        x = y / np.linalg.norm(y)
        ax = a @ x
        mu = float(x @ ax)
        if abs(mu - prev) < tol:
            return SpectralEstimate(mu, it, float(np.linalg.norm(ax - mu * x)))
        prev = mu
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


def path_spectral_bound(g: Graph, l: int, tol: float = DEFAULT_TOL) -> float:
    """``n * mu^(l-1) / 2``, an upper bound on the number of ``l``-vertex paths."""
    if l < 3:
        raise ValueError("path length must be at least 3 vertices")
    if g.n == 0 or g.num_edges == 0:
        return 0.0
    mu = spectral_radius(g, tol).mu
    return g.n * mu ** (l - 1) / 2


@dataclass(frozen=True)
class PathBoundCheck:
    paths: int
    half_walks: float
    bound: float
    holds: bool


def check_path_bound(g: Graph, l: int, rel_slack: float = 1e-6, tol: float = DEFAULT_TOL) -> PathBoundCheck:
    """Check ``N(P_l, G) <= walks(l-1) / 2 <= n mu^(l-1) / 2`` up to relative slack."""
    bound = path_spectral_bound(g, l, tol)
    paths = count_copies(path(l), g) if l <= g.n else 0
    walks = walk_count(g, l - 1)
    holds = 2 * paths <= walks and walks <= 2 * bound * (1 + rel_slack) + 1e-9
    return PathBoundCheck(paths, walks / 2, bound, holds)
