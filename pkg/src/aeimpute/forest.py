"""Random forest regression: bagged CART trees with random feature subsets.

Each tree grows on a bootstrap resample of the training rows (same size,
with replacement).  At every node a random subset of ``mtry`` predictor
columns is considered and the best split maximizes the reduction in the
target's summed squared error; candidate thresholds are the midpoints
between consecutive distinct sorted values.  Forest predictions average the
per-tree leaf means, and for a 0/1-coded target that average doubles as a
class score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seeding import derive_seed


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    mtry: int | None = None  # default resolves to floor(sqrt(d)) at fit time
    min_leaf: int = 5
    seed: int = 0
    bootstrap: bool = True  # test hook: False grows each tree on the full sample

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.mtry is not None and self.mtry < 1:
            raise ValueError("mtry must be >= 1")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")


@dataclass(frozen=True)
class CartTree:
    """Array-arena binary regression tree.

    ``feature[i] == -1`` marks node i as a leaf with prediction ``value[i]``;
    internal nodes route a row left when row[feature] < threshold.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict_row(self, row: np.ndarray) -> float:
        i = 0
        while self.feature[i] >= 0:
            i = self.left[i] if row[self.feature[i]] < self.threshold[i] else self.right[i]
        return float(self.value[i])


@dataclass(frozen=True)
class Forest:
    trees: tuple[CartTree, ...]
    config: ForestConfig
    target_column: int
    predictor_columns: tuple[int, ...]
    binary_target: bool

    def predict(self, known_row) -> float:
        """Mean of per-tree predictions for a vector of predictor values."""
        row = np.asarray(known_row, dtype=float)
        if row.shape != (len(self.predictor_columns),):
            raise ValueError(
                f"expected {len(self.predictor_columns)} predictor values, got shape {row.shape}"
            )
        return float(np.mean([t.predict_row(row) for t in self.trees]))

    def classify(self, known_row, threshold: float = 0.5) -> tuple[int, float]:
        """Class label (score >= threshold -> 1) plus the score itself."""
        if not self.binary_target:
            raise ValueError(
                "classify requires a forest fitted with binary_target=True"
            )
        score = self.predict(known_row)
        return (1 if score >= threshold else 0), score


def _node_sse(cum_s: float, cum_q: float, count: int) -> float:
    return cum_q - (cum_s * cum_s) / count


# Gains within this fraction of the node SSE count as tied; different
# features can induce the same partition, whose mathematically equal gains
# round differently, so exact comparison would break the tie rule.
_TIE_RTOL = 1e-9


def _best_split(x_cols: np.ndarray, y: np.ndarray, features: np.ndarray, min_leaf: int):
    """Best (feature, threshold, left_mask) by SSE reduction, or None.

    Ties (up to a relative tolerance of the node SSE) break toward the lower
    column index then the lower threshold: features are scanned in ascending
    order, and a candidate replaces the incumbent only when its gain exceeds
    the incumbent's by more than the tolerance.
    """
    n = y.size
    total_s = y.sum()
    total_q = float(y @ y)
    parent_sse = _node_sse(total_s, total_q, n)
    tol = _TIE_RTOL * parent_sse

    best_gain = 0.0
    best: tuple[int, float, np.ndarray] | None = None
    for f in np.sort(features):
        xs = x_cols[:, f]
        order = np.argsort(xs, kind="stable")
        sx = xs[order]
        sy = y[order]
        boundaries = np.flatnonzero(sx[:-1] < sx[1:])  # split after these positions
        if boundaries.size == 0:
            continue
        sizes_ok = (boundaries + 1 >= min_leaf) & (n - boundaries - 1 >= min_leaf)
        boundaries = boundaries[sizes_ok]
        if boundaries.size == 0:
            continue
        cs = np.cumsum(sy)
        cq = np.cumsum(sy * sy)
        left_n = boundaries + 1
        left_sse = cq[boundaries] - cs[boundaries] ** 2 / left_n
        right_sse = (total_q - cq[boundaries]) - (total_s - cs[boundaries]) ** 2 / (n - left_n)
        gains = parent_sse - left_sse - right_sse
        # Lowest threshold among candidates tied with the feature maximum.
        j = int(np.flatnonzero(gains >= gains.max() - tol)[0])
        if gains[j] > best_gain + tol:
            lo, hi = sx[boundaries[j]], sx[boundaries[j] + 1]
            thr = 0.5 * (lo + hi)
            if not lo < thr:  # midpoint rounded onto the left value
                thr = hi
            best_gain = float(gains[j])
            best = (int(f), float(thr), xs < thr)
    return best


def _grow_tree(
    x: np.ndarray, y: np.ndarray, rng: np.random.Generator, mtry: int, min_leaf: int
) -> CartTree:
    """Depth-first growth (left child first); rng feeds the per-node feature draw."""
    d = x.shape[1]
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []

    # Stack entries: (sample indices, parent node id, is_left_child).
    stack: list[tuple[np.ndarray, int, bool]] = [(np.arange(x.shape[0]), -1, False)]
    while stack:
        idx, parent, is_left = stack.pop()
        node_id = len(feature)
        if parent >= 0:
            (left if is_left else right)[parent] = node_id

        ys = y[idx]
        constant = bool((ys == ys[0]).all())
        split = None
        if idx.size >= 2 * min_leaf and not constant:
            chosen = rng.choice(d, size=mtry, replace=False)
            split = _best_split(x[idx], ys, chosen, min_leaf)

        if split is None:
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            # A constant node's mean is its value exactly, bit for bit.
            value.append(float(ys[0]) if constant else float(ys.mean()))
        else:
            f, thr, left_mask = split
            feature.append(f)
            threshold.append(thr)
            left.append(-1)
            right.append(-1)
            value.append(float(ys.mean()))
            # Push right first so the left child is grown (and draws) first.
            stack.append((idx[~left_mask], node_id, False))
            stack.append((idx[left_mask], node_id, True))

    return CartTree(
        feature=np.array(feature, dtype=int),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=int),
        right=np.array(right, dtype=int),
        value=np.array(value, dtype=float),
    )


def fit(train_rows, target_column: int, cfg: ForestConfig | None = None,
        binary_target: bool = False) -> Forest:
    """Grow a forest predicting ``target_column`` from every other column.

    ``binary_target=True`` validates at fit time that the target holds only
    0/1 codes, enabling :meth:`Forest.classify` later.  Per-tree generators
    are derived from (seed, tree index), so trees are independent of growth
    order and the fit is reproducible.
    """
    cfg = cfg or ForestConfig()
    rows = np.asarray(train_rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] < 2:
        raise ValueError("train_rows must be a 2-D matrix with >= 2 columns")
    n, width = rows.shape
    if not 0 <= target_column < width:
        raise ValueError(f"target column {target_column} out of range [0, {width})")
    if n < 2 * cfg.min_leaf:
        raise ValueError(
            f"need at least {2 * cfg.min_leaf} rows for min_leaf={cfg.min_leaf}, got {n}"
        )

    predictors = tuple(c for c in range(width) if c != target_column)
    d = len(predictors)
    mtry = cfg.mtry if cfg.mtry is not None else max(1, int(math.isqrt(d)))
    if mtry > d:
        raise ValueError(f"mtry={mtry} exceeds the {d} available predictors")

    x = rows[:, predictors]
    y = rows[:, target_column]
    if binary_target and not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("binary_target=True but target codes are not all 0/1")

    trees = []
    for t in range(cfg.n_trees):
        rng = np.random.default_rng(derive_seed(cfg.seed, "tree", t))
        if cfg.bootstrap:
            sample = rng.integers(0, n, size=n)
            trees.append(_grow_tree(x[sample], y[sample], rng, mtry, cfg.min_leaf))
        else:
            trees.append(_grow_tree(x, y, rng, mtry, cfg.min_leaf))

    return Forest(
        trees=tuple(trees),
        config=cfg,
        target_column=target_column,
        predictor_columns=predictors,
        binary_target=binary_target,
    )
