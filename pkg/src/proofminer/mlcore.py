"""Self-contained numerics: standardization, PCA, k-means, diagonal-covariance
EM, farthest-first traversal and silhouette scoring.

Everything is a deterministic function of (data, k, seed); seeds drive a
dedicated numpy Generator and no global state is touched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp


class TooFewPoints(ValueError):
    pass


class KTooLarge(ValueError):
    pass


class SingleCluster(ValueError):
    pass


class DegenerateComponent(RuntimeError):
    pass


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray  # n x d, float64
    labels: tuple[str, ...]

    def __post_init__(self):
        points = self.points
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise ValueError("dataset needs an n x d matrix with n, d >= 1")
        if not np.all(np.isfinite(points)):
            raise ValueError("dataset contains non-finite entries")
        if len(self.labels) != points.shape[0]:
            raise ValueError("one label per point required")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray


def standardize(data: Dataset) -> tuple[Dataset, Standardizer]:
    """Per-feature z-scores; zero-variance features map to all-zeros."""
    if data.n < 2:
        raise TooFewPoints("standardization needs at least 2 points")
    mean = data.points.mean(axis=0)
    std = data.points.std(axis=0)
    safe = np.where(std == 0.0, 1.0, std)
    scaled = (data.points - mean) / safe
    scaled[:, std == 0.0] = 0.0
    return Dataset(scaled, data.labels), Standardizer(mean, std)


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # d x r, orthonormal columns
    explained_variance: np.ndarray  # r, descending
    explained_variance_ratio: np.ndarray  # r, descending, sums to <= 1


def pca_fit_transform(
    data: Dataset, variance_target: float
) -> tuple[Dataset, PcaModel]:
    """Project onto the smallest leading component set whose cumulative
    explained variance reaches the target."""
    if not 0.0 < variance_target <= 1.0:
        raise ValueError("variance target must lie in (0, 1]")
    X = data.points
    mean = X.mean(axis=0)
    centered = X - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    denom = max(data.n - 1, 1)
    variances = (svals**2) / denom
    total = variances.sum()
    if total <= 0.0:
        ratios = np.zeros_like(variances)
        r = 1
    else:
        ratios = variances / total
        cumulative = np.cumsum(ratios)
        r = int(np.searchsorted(cumulative, variance_target - 1e-12) + 1)
        r = min(r, len(svals))
    components = vt[:r].T.copy()
    # deterministic orientation: largest-magnitude coefficient positive
    for j in range(components.shape[1]):
        col = components[:, j]
        pivot = np.argmax(np.abs(col))
        if col[pivot] < 0:
            components[:, j] = -col
    projected = centered @ components
    model = PcaModel(mean, components, variances[:r], ratios[:r])
    return Dataset(projected, data.labels), model


def pca_reconstruct(model: PcaModel, projected: np.ndarray) -> np.ndarray:
    return projected @ model.components.T + model.mean


def _pairwise_sq(points, centers):
    return ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


@dataclass(frozen=True)
class KMeansResult:
    assignment: np.ndarray
    centroids: np.ndarray
    inertia: float
    inertia_history: tuple[float, ...]


def kmeans(data: Dataset, k: int, seed: int, max_iter: int = 300) -> KMeansResult:
    """Lloyd's iterations from k distinct seeded points, run to an assignment
    fixpoint. Empty clusters are re-seeded at the point farthest from its
    own centroid, which keeps the objective non-increasing."""
    X = data.points
    n = data.n
    if k > n:
        raise KTooLarge(f"k={k} exceeds {n} points")
    if k < 1:
        raise ValueError("k must be positive")
    rng = np.random.default_rng(seed)
    centroids = X[rng.choice(n, size=k, replace=False)].copy()
    assignment = np.full(n, -1, dtype=int)
    history = []
    for _ in range(max_iter):
        sq = _pairwise_sq(X, centroids)
        new_assignment = np.argmin(sq, axis=1)
        for j in range(k):
            if not np.any(new_assignment == j):
                own = sq[np.arange(n), new_assignment]
                runaway = int(np.argmax(own))
                centroids[j] = X[runaway]
                sq = _pairwise_sq(X, centroids)
                new_assignment = np.argmin(sq, axis=1)
        converged = np.array_equal(new_assignment, assignment)
        assignment = new_assignment
        for j in range(k):
            members = X[assignment == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
        inertia = float(
            ((X - centroids[assignment]) ** 2).sum()
        )
        history.append(inertia)
        if converged:
            break
    return KMeansResult(assignment, centroids, history[-1], tuple(history))


@dataclass(frozen=True)
class GmmResult:
    assignment: np.ndarray
    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray  # k x d, diagonal
    log_likelihood: float
    loglik_history: tuple[float, ...]


VARIANCE_FLOOR = 1e-6


def gmm_em(
    data: Dataset, k: int, seed: int, max_iter: int = 200, tol: float = 1e-7
) -> GmmResult:
    """Diagonal-covariance EM with hard assignment by maximum responsibility.
    A collapsing component is re-seeded once at the point the model explains
    worst; a second collapse raises."""
    X = data.points
    n, d = X.shape
    if k > n:
        raise KTooLarge(f"k={k} exceeds {n} points")
    rng = np.random.default_rng(seed)
    means = X[rng.choice(n, size=k, replace=False)].copy()
    base_var = X.var(axis=0) + VARIANCE_FLOOR
    variances = np.tile(base_var, (k, 1))
    weights = np.full(k, 1.0 / k)
    reseeded = np.zeros(k, dtype=bool)
    history = []
    log_resp = None
    for _ in range(max_iter):
        log_prob = _gmm_log_prob(X, weights, means, variances)
        norm = logsumexp(log_prob, axis=1)
        loglik = float(norm.sum())
        log_resp = log_prob - norm[:, None]
        history.append(loglik)
        if len(history) > 1 and abs(history[-1] - history[-2]) < tol:
            break
        resp = np.exp(log_resp)
        counts = resp.sum(axis=0)
        for j in range(k):
            if counts[j] < 1e-10:
                if reseeded[j]:
                    raise DegenerateComponent(f"component {j} collapsed twice")
                reseeded[j] = True
                worst = int(np.argmin(norm))
                means[j] = X[worst]
                variances[j] = base_var
                weights[j] = 1.0 / k
                weights = weights / weights.sum()
                resp = None
                break
        if resp is None:
            continue
        weights = counts / n
        means = (resp.T @ X) / counts[:, None]
        second = (resp.T @ (X**2)) / counts[:, None]
        variances = np.maximum(second - means**2, VARIANCE_FLOOR)
    assignment = np.argmax(log_resp, axis=1)
    return GmmResult(
        assignment, weights, means, variances, history[-1], tuple(history)
    )


def _gmm_log_prob(X, weights, means, variances):
    n, d = X.shape
    k = means.shape[0]
    out = np.empty((n, k))
    for j in range(k):
        diff = X - means[j]
        out[:, j] = (
            -0.5 * (d * np.log(2 * np.pi) + np.log(variances[j]).sum())
            - 0.5 * (diff**2 / variances[j]).sum(axis=1)
            + np.log(weights[j])
        )
    return out


@dataclass(frozen=True)
class FarthestFirstResult:
    assignment: np.ndarray
    center_indices: tuple[int, ...]
    centers: np.ndarray


def farthest_first(data: Dataset, k: int, seed: int) -> FarthestFirstResult:
    """Hochbaum-Shmoys traversal: seeded first center, then greedy max-min."""
    X = data.points
    n = data.n
    if k > n:
        raise KTooLarge(f"k={k} exceeds {n} points")
    rng = np.random.default_rng(seed)
    first = int(rng.integers(n))
    chosen = [first]
    min_sq = ((X - X[first]) ** 2).sum(axis=1)
    while len(chosen) < k:
        nxt = int(np.argmax(min_sq))
        chosen.append(nxt)
        min_sq = np.minimum(min_sq, ((X - X[nxt]) ** 2).sum(axis=1))
    centers = X[chosen]
    assignment = np.argmin(_pairwise_sq(X, centers), axis=1)
    return FarthestFirstResult(assignment, tuple(chosen), centers)


@dataclass(frozen=True)
class SilhouetteResult:
    scores: np.ndarray
    cluster_means: np.ndarray


def silhouette(data: Dataset, assignment: np.ndarray) -> SilhouetteResult:
    """Standard silhouette with Euclidean distance; singletons score 0."""
    X = data.points
    n = data.n
    labels = np.asarray(assignment)
    ids = np.unique(labels)
    if len(ids) < 2:
        raise SingleCluster("silhouette needs at least two clusters")
    dist = np.sqrt(np.maximum(_pairwise_sq(X, X), 0.0))
    scores = np.zeros(n)
    for i in range(n):
        own = labels[i]
        own_mask = labels == own
        own_size = own_mask.sum()
        if own_size <= 1:
            scores[i] = 0.0
            continue
        a = dist[i, own_mask].sum() / (own_size - 1)
        b = np.inf
        for other in ids:
            if other == own:
                continue
            b = min(b, dist[i, labels == other].mean())
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    means = np.array([scores[labels == cid].mean() for cid in ids])
    return SilhouetteResult(scores, means)
