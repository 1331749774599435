"""From-scratch learners behind one train/predict contract.

Three algorithms, chosen for their track record on text classification:

* "nb"     multinomial Naive Bayes with Laplace smoothing. Real-valued
           feature masses are treated as fractional counts, which is
           sound because the feature module guarantees nonnegativity.
* "maxent" multinomial logistic regression, L2-regularized, trained by
           full-batch gradient descent with backtracking line search.
* "svm"    one-vs-rest linear SVM trained by Pegasos-style stochastic
           subgradient steps; shuffling is driven only by the seed.

Training is deterministic given (data order, hyperparams, seed), and a
trained Model is immutable, so predictions may run concurrently.

Model files are canonical JSON prefixed by a `SARKAS-MODEL <version>`
header line; two saves of the same model are byte-identical.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelFormatError, SarkasError, TrainingError
from .features import FeatureSpace, FeatureVector

FORMAT_VERSION = 1
MAGIC = "SARKAS-MODEL"

ALGORITHMS = ("nb", "maxent", "svm")

DEFAULT_HYPERPARAMS = {
    "nb": {"alpha": 1.0},
    "maxent": {"lam": 1e-3, "max_iter": 500, "tol": 1e-8},
    # lam 1e-2 over-regularizes score-mode masses (all well under 1) and
    # strands zero-feature documents on the wrong side of the bias
    "svm": {"lam": 1e-3, "epochs": 50},
}


def to_dense(vec):
    """FeatureVector -> dense float row."""
    x = np.zeros(vec.space.dim)
    for idx, value in vec.values.items():
        if not 0 <= idx < vec.space.dim:
            raise SarkasError(f"feature index {idx} outside space of dim "
                              f"{vec.space.dim}")
        x[idx] = value
    return x


def to_matrix(vectors, space):
    X = np.zeros((len(vectors), space.dim))
    for row, vec in enumerate(vectors):
        if vec.space != space:
            raise SarkasError("vector built against a different feature space")
        for idx, value in vec.values.items():
            if not 0 <= idx < space.dim:
                raise SarkasError(f"feature index {idx} outside space of dim "
                                  f"{space.dim}")
            X[row, idx] = value
    return X


@dataclass
class Dataset:
    """Parallel vectors/labels over one shared feature space."""

    vectors: list
    labels: list  # indices into classes
    classes: tuple

    def __post_init__(self):
        if len(self.vectors) != len(self.labels):
            raise SarkasError(
                f"{len(self.vectors)} vectors but {len(self.labels)} labels")
        for lab in self.labels:
            if not 0 <= lab < len(self.classes):
                raise SarkasError(f"label {lab} outside class set "
                                  f"{self.classes}")

    @property
    def space(self):
        return self.vectors[0].space

    def matrix(self):
        return to_matrix(self.vectors, self.space)


@dataclass
class Model:
    algorithm: str
    classes: tuple
    feature_space: FeatureSpace
    params: dict  # name -> np.ndarray
    hyperparams: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION


def _resolve_hyperparams(algorithm, hyperparams):
    merged = dict(DEFAULT_HYPERPARAMS[algorithm])
    for key, value in (hyperparams or {}).items():
        if key not in merged:
            raise SarkasError(
                f"unknown hyperparameter {key!r} for algorithm {algorithm!r}")
        merged[key] = value
    return merged


def _softmax(scores):
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def maxent_objective(X, Y, W, b, lam):
    """L2-regularized mean negative log-likelihood and its gradients.

    Y is one-hot (n, k). The bias is not regularized. Exposed at module
    level so the gradient can be checked against finite differences.
    """
    n = X.shape[0]
    scores = X @ W + b
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_z[:, None]
    objective = -(log_probs * Y).sum() / n + 0.5 * lam * (W * W).sum()
    probs = np.exp(log_probs)
    grad_w = X.T @ (probs - Y) / n + lam * W
    grad_b = (probs - Y).sum(axis=0) / n
    return objective, grad_w, grad_b


def _train_maxent(X, y, k, lam, max_iter, tol, history=None):
    n, d = X.shape
    Y = np.zeros((n, k))
    Y[np.arange(n), y] = 1.0
    W = np.zeros((d, k))
    b = np.zeros(k)
    objective, grad_w, grad_b = maxent_objective(X, Y, W, b, lam)
    if history is not None:
        history.append(objective)
    step = 1.0
    for _ in range(max_iter):
        grad_sq = (grad_w * grad_w).sum() + (grad_b * grad_b).sum()
        if grad_sq == 0.0:
            break
        # backtracking line search on the Armijo condition
        step = min(step * 2.0, 1e6)
        accepted = False
        for _ in range(60):
            new_w = W - step * grad_w
            new_b = b - step * grad_b
            new_obj, new_gw, new_gb = maxent_objective(X, Y, new_w, new_b, lam)
            if new_obj <= objective - 1e-4 * step * grad_sq:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        W, b = new_w, new_b
        change = abs(objective - new_obj) / max(1.0, abs(objective))
        objective, grad_w, grad_b = new_obj, new_gw, new_gb
        if history is not None:
            history.append(objective)
        if change < tol:
            break
    return W, b


def _train_svm(X, y, k, lam, epochs, rng):
    # The bias rides along as a constant column, and the returned vector
    # averages the final quarter of the iterates: the plain last iterate
    # keeps oscillating around the optimum and strands documents whose
    # features are all zero on the wrong side of the bias.
    n, d = X.shape
    augmented = np.hstack([X, np.ones((n, 1))])
    weights = np.zeros((k, d))
    biases = np.zeros(k)
    total_steps = epochs * n
    tail_start = max(1, int(total_steps * 0.75))
    for c in range(k):
        target = np.where(y == c, 1.0, -1.0)
        w = np.zeros(d + 1)
        tail_sum = np.zeros(d + 1)
        tail_count = 0
        t = 1
        for _ in range(epochs):
            for i in rng.permutation(n):
                eta = 1.0 / (lam * t)
                margin = target[i] * (augmented[i] @ w)
                w *= 1.0 - eta * lam
                if margin < 1.0:
                    w += eta * target[i] * augmented[i]
                if t > tail_start:
                    tail_sum += w
                    tail_count += 1
                t += 1
        averaged = tail_sum / tail_count if tail_count else w
        weights[c] = averaged[:d]
        biases[c] = averaged[d]
    return weights, biases


def train(data, algorithm, hyperparams=None, seed=0):
    """Train one model; deterministic given (data order, hyperparams, seed)."""
    if algorithm not in ALGORITHMS:
        raise SarkasError(f"unknown algorithm {algorithm!r}")
    if not data.vectors:
        raise TrainingError("empty dataset")
    hp = _resolve_hyperparams(algorithm, hyperparams)
    X = data.matrix()
    if not np.isfinite(X).all():
        raise TrainingError("non-finite feature value in training data")
    y = np.asarray(data.labels, dtype=int)
    k = len(data.classes)
    if len(set(data.labels)) < 2:
        raise TrainingError(
            "training data contains a single class; need at least two")

    if algorithm == "nb":
        alpha = float(hp["alpha"])
        if alpha <= 0:
            raise TrainingError("NB smoothing alpha must be positive")
        if (X < 0).any():
            raise TrainingError("NB requires nonnegative feature masses")
        counts = np.array([(y == c).sum() for c in range(k)], dtype=float)
        priors = counts / counts.sum()
        sums = np.zeros((k, X.shape[1]))
        for c in range(k):
            sums[c] = X[y == c].sum(axis=0)
        theta = (sums + alpha) / (sums.sum(axis=1, keepdims=True)
                                  + alpha * X.shape[1])
        params = {"priors": priors, "theta": theta}
    elif algorithm == "maxent":
        W, b = _train_maxent(X, y, k, float(hp["lam"]), int(hp["max_iter"]),
                             float(hp["tol"]))
        params = {"weights": W, "bias": b}
    else:
        rng = np.random.default_rng(seed)
        W, b = _train_svm(X, y, k, float(hp["lam"]), int(hp["epochs"]), rng)
        params = {"weights": W, "bias": b}
    return Model(algorithm=algorithm, classes=tuple(data.classes),
                 feature_space=data.space, params=params, hyperparams=hp)


def _check_space(model, vec):
    if vec.space != model.feature_space:
        raise SarkasError("input vector space does not match the model's "
                          "feature space")


def decision_scores(model, vec):
    """Raw per-class scores: log-joint for NB, logits/margins otherwise."""
    _check_space(model, vec)
    x = to_dense(vec)
    if model.algorithm == "nb":
        # a class absent from training has prior 0; log(0) = -inf is the
        # right score for it
        with np.errstate(divide="ignore"):
            return (np.log(model.params["priors"])
                    + x @ np.log(model.params["theta"]).T)
    if model.algorithm == "maxent":
        return x @ model.params["weights"] + model.params["bias"]
    return model.params["weights"] @ x + model.params["bias"]


def predict(model, vec):
    """Argmax class; exact score ties go to the lowest class index."""
    scores = decision_scores(model, vec)
    return model.classes[int(np.argmax(scores))]


def predict_dist(model, vec):
    """Per-class distribution summing to one.

    NB yields the smoothed posterior, maxent the softmax probabilities;
    for the SVM this is a softmax over raw margins and is not calibrated.
    """
    scores = decision_scores(model, vec)
    probs = _softmax(scores)
    return {cls: float(p) for cls, p in zip(model.classes, probs)}


_PARAM_KEYS = {"nb": ("priors", "theta"), "maxent": ("weights", "bias"),
               "svm": ("weights", "bias")}


def model_to_json(model):
    payload = {
        "format_version": model.format_version,
        "algorithm": model.algorithm,
        "classes": list(model.classes),
        "feature_space": model.feature_space.to_dict(),
        "hyperparams": model.hyperparams,
        "params": {name: arr.tolist() for name, arr in model.params.items()},
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def save_model(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{MAGIC} {model.format_version}\n")
        fh.write(model_to_json(model) + "\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        body = fh.read()
    parts = header.split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise ModelFormatError(f"{path}: missing {MAGIC} header")
    try:
        version = int(parts[1])
    except ValueError:
        raise ModelFormatError(f"{path}: bad version field {parts[1]!r}")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: format version {version}, expected {FORMAT_VERSION}")
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: corrupt model body ({exc.msg})")
    algorithm = payload["algorithm"]
    if algorithm not in ALGORITHMS:
        raise ModelFormatError(f"{path}: unknown algorithm {algorithm!r}")
    params = {}
    for name in _PARAM_KEYS[algorithm]:
        if name not in payload["params"]:
            raise ModelFormatError(f"{path}: missing parameter block {name!r}")
        params[name] = np.asarray(payload["params"][name], dtype=float)
    return Model(
        algorithm=algorithm,
        classes=tuple(payload["classes"]),
        feature_space=FeatureSpace.from_dict(payload["feature_space"]),
        params=params,
        hyperparams=payload.get("hyperparams", {}),
        format_version=version,
    )
