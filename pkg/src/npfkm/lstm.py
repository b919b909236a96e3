"""A small deterministic single-layer LSTM for next-step prediction.

The network reads one scalar per step and projects the final hidden state
to one scalar. Gate pre-activations are stacked in the order
input, forget, candidate, output, so every gate-indexed array has length
``4 * hidden_units``.

Training uses plain full-batch gradient descent with analytic
backpropagation through time, entirely in float64. Given the same seed,
hyperparameters and data the resulting weights are bit-for-bit identical.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_finite
from .exceptions import DivergedTraining

__all__ = [
    "LstmHyperparams",
    "LstmModel",
    "init_model",
    "train",
    "predict_next",
    "loss_and_gradients",
    "gradient_check",
    "dump_weights",
]

PARAM_NAMES = ("W", "U", "b", "V", "c")
FORGET_BIAS = 1.0
WINDOW = 3


@dataclass(frozen=True)
class LstmHyperparams:
    hidden_layers: int = 1
    hidden_units: int = 10
    epochs: int = 50
    learning_rate: float = 0.005
    activation: str = "tanh"
    seed: int = 140

    def __post_init__(self):
        if self.hidden_layers != 1:
            raise ValueError("only a single hidden layer is supported")
        if self.hidden_units < 1 or self.epochs < 1:
            raise ValueError("hidden_units and epochs must be positive")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.activation != "tanh":
            raise ValueError(f"unsupported activation {self.activation!r}")


@dataclass(frozen=True, eq=False)
class LstmModel:
    """Trained weights.

    W : (4H,) input-to-gate weights
    U : (4H, H) hidden-to-gate weights
    b : (4H,) gate biases
    V : (H,) hidden-to-output weights
    c : () output bias
    """

    W: np.ndarray
    U: np.ndarray
    b: np.ndarray
    V: np.ndarray
    c: np.ndarray
    hyperparams: LstmHyperparams = field(default_factory=LstmHyperparams)
    loss_history: tuple = ()

    def __post_init__(self):
        for name in PARAM_NAMES:
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        H = self.V.shape[0]
        if self.W.shape != (4 * H,) or self.U.shape != (4 * H, H) or self.b.shape != (4 * H,):
            raise ValueError("inconsistent LSTM weight shapes")
        if self.c.shape != ():
            raise ValueError("output bias must be a scalar")

    @property
    def hidden_units(self):
        return self.V.shape[0]

    def params(self):
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def flat_weights(self):
        return np.concatenate([getattr(self, n).ravel() for n in PARAM_NAMES])

    @classmethod
    def zeros(cls, hidden_units=10, hyperparams=None):
        H = hidden_units
        return cls(
            W=np.zeros(4 * H), U=np.zeros((4 * H, H)), b=np.zeros(4 * H),
            V=np.zeros(H), c=np.zeros(()),
            hyperparams=hyperparams or LstmHyperparams(hidden_units=H),
        )


def _sigmoid(x):
    with np.errstate(over="ignore"):  # exp overflow correctly saturates to 0
        return 1.0 / (1.0 + np.exp(-x))


def _glorot(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_model(hp, seed=None):
    """Glorot-uniform weights; zero biases except the forget gate, which starts at 1.

    The input and recurrent kernels are each initialised as one stacked
    ``4H``-wide matrix, the way common deep-learning frameworks do it.
    """
    H = hp.hidden_units
    rng = np.random.default_rng(hp.seed if seed is None else seed)
    W = _glorot(rng, 4 * H, 1, 4 * H)
    U = _glorot(rng, (4 * H, H), H, 4 * H)
    b = np.zeros(4 * H)
    b[H:2 * H] = FORGET_BIAS
    V = _glorot(rng, H, H, 1)
    return LstmModel(W=W, U=U, b=b, V=V, c=np.zeros(()), hyperparams=hp)


def _forward(p, xs):
    H = p["V"].shape[0]
    h = np.zeros(H)
    cell = np.zeros(H)
    cache = []
    ys = np.empty(len(xs))
    for s, x in enumerate(xs):
        z = p["W"] * x + p["U"] @ h + p["b"]
        i = _sigmoid(z[:H])
        f = _sigmoid(z[H:2 * H])
        g = np.tanh(z[2 * H:3 * H])
        o = _sigmoid(z[3 * H:])
        cell_prev, h_prev = cell, h
        cell = f * cell_prev + i * g
        tc = np.tanh(cell)
        h = o * tc
        ys[s] = p["V"] @ h + p["c"]
        cache.append((x, h_prev, cell_prev, i, f, g, o, tc, h))
    return ys, cache


def loss_and_gradients(params, xs, targets, step_weights):
    """Weighted squared error ``sum_s w_s (y_s - t_s)^2`` and its gradients.

    ``params`` is a mapping with the keys of :data:`PARAM_NAMES`. Steps with
    zero weight are unsupervised but still carry state forward.
    """
    p = params
    H = p["V"].shape[0]
    ys, cache = _forward(p, xs)
    resid = ys - np.asarray(targets, dtype=np.float64)
    w = np.asarray(step_weights, dtype=np.float64)
    loss = float(np.sum(w * resid**2))

    grads = {name: np.zeros_like(p[name]) for name in PARAM_NAMES}
    dh_next = np.zeros(H)
    dc_next = np.zeros(H)
    for s in range(len(xs) - 1, -1, -1):
        x, h_prev, cell_prev, i, f, g, o, tc, h = cache[s]
        dy = 2.0 * w[s] * resid[s]
        grads["V"] += dy * h
        grads["c"] += dy
        dh = dy * p["V"] + dh_next
        do = dh * tc
        dc = dh * o * (1.0 - tc * tc) + dc_next
        di = dc * g
        dg = dc * i
        df = dc * cell_prev
        dc_next = dc * f
        dz = np.concatenate([
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            dg * (1.0 - g * g),
            do * o * (1.0 - o),
        ])
        grads["W"] += dz * x
        grads["U"] += np.outer(dz, h_prev)
        grads["b"] += dz
        dh_next = p["U"].T @ dz
    return loss, grads


def _check_window(window):
    arr = np.asarray(window, dtype=np.float64)
    if arr.shape != (WINDOW,):
        raise ValueError(f"window must hold exactly {WINDOW} values, got shape {arr.shape}")
    return check_finite(arr, "window")


def train(window, hp=None):
    """Fit a fresh model to a 3-point window.

    The window ``(a, b, c)`` is framed as a teacher-forced next-step task:
    inputs ``(a, b)`` with targets ``(b, c)``, loss averaged over both steps.
    """
    hp = hp or LstmHyperparams()
    win = _check_window(window)
    xs, targets = win[:-1], win[1:]
    weights = np.full(len(xs), 1.0 / len(xs))

    p = {k: v.copy() for k, v in init_model(hp).params().items()}
    history = []
    for epoch in range(hp.epochs):
        loss, grads = loss_and_gradients(p, xs, targets, weights)
        history.append(loss)
        for name in PARAM_NAMES:
            p[name] -= hp.learning_rate * grads[name]
            if not np.all(np.isfinite(p[name])):
                raise DivergedTraining(
                    f"weight {name} became non-finite at epoch {epoch + 1}; "
                    f"learning rate {hp.learning_rate} is unstable for window {win.tolist()}"
                )
    return LstmModel(**p, hyperparams=hp, loss_history=tuple(history))


def predict_next(model, window):
    """Run the cell over the window from a zero state and return the last output."""
    win = _check_window(window)
    ys, _ = _forward(model.params(), win)
    return float(ys[-1])


def _unflatten_batch(theta, H):
    """Split rows of a (B, P) parameter matrix into batched W, U, b, V, c."""
    B = theta.shape[0]
    sizes = [4 * H, 4 * H * H, 4 * H, H, 1]
    parts = np.split(theta, np.cumsum(sizes)[:-1], axis=1)
    return (parts[0], parts[1].reshape(B, 4 * H, H), parts[2], parts[3], parts[4][:, 0])


def _batched_losses(theta, H, xs, targets, step_weights):
    W, U, b, V, c = _unflatten_batch(theta, H)
    h = np.zeros((theta.shape[0], H))
    cell = np.zeros_like(h)
    loss = np.zeros(theta.shape[0])
    for s, x in enumerate(xs):
        z = W * x + np.einsum("bij,bj->bi", U, h) + b
        i = _sigmoid(z[:, :H])
        f = _sigmoid(z[:, H:2 * H])
        g = np.tanh(z[:, 2 * H:3 * H])
        o = _sigmoid(z[:, 3 * H:])
        cell = f * cell + i * g
        h = o * np.tanh(cell)
        y = np.sum(V * h, axis=1) + c
        loss += step_weights[s] * (y - targets[s]) ** 2
    return loss


def gradient_check(model, window, target, step=1e-5):
    """Largest relative error between analytic and central-difference gradients.

    The loss is ``(predict_next(model, window) - target)^2``. Relative error
    per weight is ``|a - n| / max(|a| + |n|, 1e-6)``; the floor keeps
    finite-difference roundoff on near-zero gradients from dominating.
    All ``2P`` perturbed forward passes run as one batch.
    """
    win = _check_window(window)
    targets = np.zeros(WINDOW)
    targets[-1] = target
    weights = np.zeros(WINDOW)
    weights[-1] = 1.0

    _, grads = loss_and_gradients(model.params(), win, targets, weights)
    analytic = np.concatenate([grads[n].ravel() for n in PARAM_NAMES])

    theta = model.flat_weights()
    P = theta.size
    shift = step * np.eye(P)
    perturbed = np.concatenate([theta + shift, theta - shift])
    losses = _batched_losses(perturbed, model.hidden_units, win, targets, weights)
    numeric = (losses[:P] - losses[P:]) / (2.0 * step)

    denom = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-6)
    return float(np.max(np.abs(analytic - numeric) / denom))


def dump_weights(model, path):
    """Write every weight, one per line, in W, U, b, V, c order."""
    with open(path, "w", encoding="utf-8") as fh:
        for v in model.flat_weights():
            fh.write(f"{v:.17g}\n")
