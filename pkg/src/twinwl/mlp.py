"""Dense 2-layer classifier with moment-based optimization and k-fold CV.

Everything is plain numpy and deterministic under a fixed seed: weight
initialization, batch shuffling, validation split and fold assignment all
derive from one seeded generator.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np


class ShapeMismatchError(ValueError):
    pass


class LabelOutOfRangeError(ValueError):
    pass


class DegenerateDataError(ValueError):
    pass


class TooFewSamplesError(ValueError):
    pass


@dataclass
class MlpParams:
    w1: np.ndarray  # input -> hidden
    b1: np.ndarray
    w2: np.ndarray  # hidden -> classes
    b2: np.ndarray

    def copy(self):
        return MlpParams(self.w1.copy(), self.b1.copy(),
                         self.w2.copy(), self.b2.copy())


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 15
    seed: int = 0
    validation_fraction: float = 0.10
    hidden: int = 64


ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def init_params(rng, n_in, hidden, n_classes) -> MlpParams:
    def lin(fan_in, fan_out):
        lim = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-lim, lim, size=(fan_in, fan_out))
    return MlpParams(w1=lin(n_in, hidden), b1=np.zeros(hidden),
                     w2=lin(hidden, n_classes), b2=np.zeros(n_classes))


def mlp_forward(p: MlpParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != p.w1.shape[0]:
        raise ShapeMismatchError(
            f"input of shape {x.shape} into layer expecting "
            f"{p.w1.shape[0]} columns")
    return np.maximum(x @ p.w1 + p.b1, 0.0) @ p.w2 + p.b2


def _softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def mlp_backward(p: MlpParams, x: np.ndarray, y: np.ndarray):
    """Exact gradients of mean cross-entropy over the batch.

    Returns (gradients as MlpParams, scalar loss).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if x.shape[0] != y.shape[0]:
        raise ShapeMismatchError(
            f"{x.shape[0]} feature rows for {y.shape[0]} labels")
    n_classes = p.w2.shape[1]
    if y.min(initial=0) < 0 or y.max(initial=0) >= n_classes:
        raise LabelOutOfRangeError(
            f"labels must lie in [0,{n_classes})")
    m = x.shape[0]
    pre1 = x @ p.w1 + p.b1
    hidden = np.maximum(pre1, 0.0)
    logits = hidden @ p.w2 + p.b2
    probs = _softmax(logits)
    loss = float(-np.log(probs[np.arange(m), y] + 1e-300).mean())
    dlogits = probs
    dlogits[np.arange(m), y] -= 1.0
    dlogits /= m
    gw2 = hidden.T @ dlogits
    gb2 = dlogits.sum(axis=0)
    dhidden = dlogits @ p.w2.T
    dpre1 = dhidden * (pre1 > 0)
    gw1 = x.T @ dpre1
    gb1 = dpre1.sum(axis=0)
    return MlpParams(gw1, gb1, gw2, gb2), loss


@dataclass
class AdamState:
    m: MlpParams
    v: MlpParams
    t: int = 0


def adam_step(p: MlpParams, g: MlpParams, state: AdamState, lr: float):
    state.t += 1
    for name in ("w1", "b1", "w2", "b2"):
        grad = getattr(g, name)
        m = getattr(state.m, name)
        v = getattr(state.v, name)
        m[...] = ADAM_BETA1 * m + (1 - ADAM_BETA1) * grad
        v[...] = ADAM_BETA2 * v + (1 - ADAM_BETA2) * grad * grad
        m_hat = m / (1 - ADAM_BETA1 ** state.t)
        v_hat = v / (1 - ADAM_BETA2 ** state.t)
        getattr(p, name)[...] -= lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


@dataclass
class Standardizer:
    """Per-dimension standardization fit on training data only."""

    mean: np.ndarray
    std: np.ndarray

    @staticmethod
    def fit(x: np.ndarray) -> "Standardizer":
        x = np.asarray(x, dtype=float)
        std = x.std(axis=0)
        std[std < 1e-12] = 1.0
        return Standardizer(mean=x.mean(axis=0), std=std)

    def apply(self, x):
        return (np.asarray(x, dtype=float) - self.mean) / self.std


@dataclass
class TrainedModel:
    params: MlpParams
    standardizer: Standardizer
    history: list  # (epoch, train loss, val accuracy)
    best_epoch: int

    def predict(self, x) -> np.ndarray:
        logits = mlp_forward(self.params, self.standardizer.apply(x))
        return logits.argmax(axis=1)

    def accuracy(self, x, y) -> float:
        y = np.asarray(y, dtype=int)
        return float((self.predict(x) == y).mean())


def _stratified_split(labels, fraction, rng):
    """Index split keeping class ratios; returns (main, held_out)."""
    labels = np.asarray(labels, dtype=int)
    held = []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(len(idx))]
        k = max(1, int(round(fraction * len(idx)))) if len(idx) > 1 else 0
        held.extend(idx[:k])
    held = np.sort(np.asarray(held, dtype=int))
    main = np.setdiff1d(np.arange(len(labels)), held)
    return main, held


def train_classifier(features, labels, cfg: TrainConfig) -> TrainedModel:
    """Train with minibatch moment-based updates and early stopping.

    A stratified validation slice is held out of the given data; the model
    with the best validation accuracy (ties broken by lower validation
    loss) is restored at the end.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=int)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise ShapeMismatchError(
            f"features {x.shape} do not match {y.shape[0]} labels")
    classes = np.unique(y)
    if len(classes) < 2:
        raise DegenerateDataError("training data contains a single class")
    n_classes = int(y.max()) + 1

    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = _stratified_split(y, cfg.validation_fraction, rng)
    std = Standardizer.fit(x[train_idx])
    xt, yt = std.apply(x[train_idx]), y[train_idx]
    xv, yv = std.apply(x[val_idx]), y[val_idx]

    params = init_params(rng, x.shape[1], cfg.hidden, n_classes)
    zeros = lambda: MlpParams(np.zeros_like(params.w1),
                              np.zeros_like(params.b1),
                              np.zeros_like(params.w2),
                              np.zeros_like(params.b2))
    state = AdamState(m=zeros(), v=zeros())

    def val_metrics(p):
        if len(val_idx) == 0:
            return 0.0, 0.0
        logits = mlp_forward(p, xv)
        acc = float((logits.argmax(axis=1) == yv).mean())
        probs = _softmax(logits)
        loss = float(-np.log(probs[np.arange(len(yv)), yv] + 1e-300).mean())
        return acc, loss

    best = params.copy()
    best_acc, best_loss = val_metrics(params)
    best_epoch = 0
    since_best = 0
    history = []
    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(len(train_idx))
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(order), cfg.batch_size):
            sel = order[start:start + cfg.batch_size]
            grads, loss = mlp_backward(params, xt[sel], yt[sel])
            adam_step(params, grads, state, cfg.learning_rate)
            epoch_loss += loss
            batches += 1
        acc, vloss = val_metrics(params)
        history.append((epoch, epoch_loss / max(batches, 1), acc))
        if acc > best_acc or (acc == best_acc and vloss < best_loss):
            best, best_acc, best_loss = params.copy(), acc, vloss
            best_epoch = epoch
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.patience:
                break
    return TrainedModel(params=best, standardizer=std, history=history,
                        best_epoch=best_epoch)


@dataclass
class CvReport:
    fold_accuracies: list
    fold_epochs: list

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_accuracies))

    @property
    def std(self) -> float:
        return float(np.std(self.fold_accuracies))

    def as_dict(self):
        return {"folds": len(self.fold_accuracies),
                "fold_accuracies": [round(a, 6) for a in self.fold_accuracies],
                "fold_epochs": self.fold_epochs,
                "mean_accuracy": round(self.mean, 6),
                "std_accuracy": round(self.std, 6)}


def stratified_folds(labels, folds, rng):
    """Disjoint stratified cover of all indices, dealt round-robin."""
    labels = np.asarray(labels, dtype=int)
    assignment = np.zeros(len(labels), dtype=int)
    offset = 0
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        idx = idx[rng.permutation(len(idx))]
        for i, sample in enumerate(idx):
            assignment[sample] = (offset + i) % folds
        offset += len(idx)
    return [np.flatnonzero(assignment == f) for f in range(folds)]


def kfold_cv(features, labels, folds, cfg: TrainConfig,
             seed: Optional[int] = None) -> CvReport:
    """Stratified k-fold test protocol over a fixed feature matrix.

    Each training split keeps its own held-out slice for early stopping
    (inside train_classifier); the reported accuracy is on the untouched
    test fold.
    """
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=int)
    if len(y) < folds:
        raise TooFewSamplesError(f"{len(y)} samples for {folds} folds")
    seed = cfg.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    fold_sets = stratified_folds(y, folds, rng)
    accs, epochs = [], []
    for f, test_idx in enumerate(fold_sets):
        train_idx = np.setdiff1d(np.arange(len(y)), test_idx)
        model = train_classifier(x[train_idx], y[train_idx],
                                 replace(cfg, seed=seed + 1000 + f))
        accs.append(model.accuracy(x[test_idx], y[test_idx])
                    if len(test_idx) else 0.0)
        epochs.append(model.best_epoch)
    return CvReport(fold_accuracies=accs, fold_epochs=epochs)
