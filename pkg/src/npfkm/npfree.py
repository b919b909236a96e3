"""NP-Free: streaming conversion of a raw series into an RMSE series.

A fresh LSTM is trained on each of the first three 3-point windows to
predict the next value. From t = 5 on, the RMSE between the last three
observations and their predictions is emitted at every step. From t = 7
on, the emitted RMSE is checked against an adaptive threshold, the mean
plus three standard deviations of recent RMSE values, and the model is
retrained whenever the current one stops predicting well.
"""

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import lstm
from ._parallel import ordered_map
from ._validation import check_finite, check_series, check_series_matrix
from .exceptions import InsufficientHistory, NonFiniteInput, SeriesTooShort

__all__ = [
    "FIRST_EMISSION",
    "MIN_LENGTH",
    "RmseSeries",
    "NpFreeState",
    "rmse_window",
    "threshold",
    "step",
    "convert",
    "write_rmse_csv",
    "NPFreeTransformer",
]

FIRST_EMISSION = 5
FIRST_THRESHOLD = 7
MIN_LENGTH = FIRST_EMISSION + 1
DEFAULT_W = 150


@dataclass(frozen=True)
class RmseSeries:
    values: np.ndarray
    source_index: int = 0

    def __len__(self):
        return len(self.values)

    @property
    def time_points(self):
        return np.arange(FIRST_EMISSION, FIRST_EMISSION + len(self.values))


def rmse_window(observed, predicted):
    """Root-mean-square error over an aligned triple of observations and predictions."""
    obs = np.asarray(observed, dtype=np.float64)
    pred = np.asarray(predicted, dtype=np.float64)
    if obs.shape != (3,) or pred.shape != (3,):
        raise ValueError("rmse_window expects two triples")
    check_finite(obs, "observed")
    check_finite(pred, "predicted")
    d = obs - pred
    return math.sqrt((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / 3.0)


def threshold(rmse_history, t, w):
    """Adaptive RMSE threshold at time point ``t``.

    ``rmse_history[0]`` is RMSE_5, so RMSE_5 ... RMSE_t occupy the first
    ``t - 4`` entries. While ``t < w + 4`` all of them are used, afterwards
    only the latest ``w``. Returns mean + 3 * population std of that set.
    """
    if t < FIRST_THRESHOLD:
        raise InsufficientHistory(f"threshold is defined from t={FIRST_THRESHOLD}, got t={t}")
    if w < 1:
        raise ValueError("w must be positive")
    count = t - 4
    if len(rmse_history) < count:
        raise InsufficientHistory(
            f"t={t} needs {count} RMSE values (RMSE_5..RMSE_{t}), got {len(rmse_history)}"
        )
    hist = np.asarray(rmse_history[:count], dtype=np.float64)
    recent = hist if t < w + 4 else hist[count - w:]
    mu = recent.mean()
    sigma = math.sqrt(np.mean((recent - mu) ** 2))
    return float(mu + 3.0 * sigma)


@dataclass
class NpFreeState:
    """Mutable state of one NP-Free conversion.

    ``t`` is the time point the next call to :meth:`step` will process.
    ``predicted`` maps a time point to its latest prediction and
    ``rmse_history[j]`` holds the final RMSE for time point ``j + 5``.
    """

    w: int = DEFAULT_W
    hp: lstm.LstmHyperparams = field(default_factory=lstm.LstmHyperparams)
    t: int = 0
    flag: bool = True
    model: Optional[lstm.LstmModel] = None
    observed: list = field(default_factory=list)
    predicted: dict = field(default_factory=dict)
    rmse_history: list = field(default_factory=list)
    flag_trace: list = field(default_factory=list)
    n_trainings: int = 0

    def __post_init__(self):
        if self.w < 1:
            raise ValueError("w must be positive")

    def _train_predict(self, window, target_t):
        model = lstm.train(window, self.hp)
        self.n_trainings += 1
        self.predicted[target_t] = lstm.predict_next(model, window)
        return model

    def _rmse(self, t):
        obs = self.observed[t - 2:t + 1]
        pred = [self.predicted[z] for z in range(t - 2, t + 1)]
        return rmse_window(obs, pred)

    def step(self, c_t):
        """Consume one observation; return the emitted RMSE or ``None``."""
        c_t = float(c_t)
        if not math.isfinite(c_t):
            raise NonFiniteInput(f"non-finite observation at t={self.t}")
        t = self.t
        self.observed.append(c_t)
        obs = self.observed
        emitted = None

        if t < 2:
            pass
        elif t < FIRST_EMISSION:
            self.model = self._train_predict(obs[t - 2:t + 1], t + 1)
        elif t < FIRST_THRESHOLD:
            emitted = self._rmse(t)
            self.rmse_history.append(emitted)
            self.model = self._train_predict(obs[t - 2:t + 1], t + 1)
        elif self.flag:
            window = obs[t - 3:t]
            if t != FIRST_THRESHOLD:
                self.predicted[t] = lstm.predict_next(self.model, window)
            self.rmse_history.append(self._rmse(t))
            if self.rmse_history[-1] > threshold(self.rmse_history, t, self.w):
                # the retrained model replaces m whether or not it passes; if it
                # fails, the flag drops and m is retrained again before reuse
                self.model = self._train_predict(window, t)
                self.rmse_history[-1] = self._rmse(t)
                if self.rmse_history[-1] > threshold(self.rmse_history, t, self.w):
                    self.flag = False
            emitted = self.rmse_history[-1]
        else:
            window = obs[t - 3:t]
            candidate = self._train_predict(window, t)
            self.rmse_history.append(self._rmse(t))
            if self.rmse_history[-1] <= threshold(self.rmse_history, t, self.w):
                self.model = candidate
                self.flag = True
            emitted = self.rmse_history[-1]

        self.flag_trace.append(self.flag)
        self.t += 1
        return emitted


def step(state, c_t):
    return state.step(c_t)


def convert(series, hp=None, w=DEFAULT_W, source_index=0):
    """Convert a raw series of length L into its RMSE series of length L - 5."""
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("series must be one-dimensional")
    if x.shape[0] < MIN_LENGTH:
        raise SeriesTooShort(
            f"NP-Free needs at least {MIN_LENGTH} points, got {x.shape[0]}"
        )
    check_series(x)
    state = NpFreeState(w=w, hp=hp or lstm.LstmHyperparams())
    out = [r for r in (state.step(v) for v in x) if r is not None]
    return RmseSeries(values=np.array(out), source_index=source_index)


def write_rmse_csv(path, rmse_series):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,rmse\n")
        for t, r in zip(rmse_series.time_points, rmse_series.values):
            fh.write(f"{t},{r:.9g}\n")


def _convert_row(args, hp, w):
    index, row = args
    return convert(row, hp=hp, w=w, source_index=index).values


class NPFreeTransformer(TransformerMixin, BaseEstimator):
    """Scikit-learn transformer mapping each raw series to its RMSE series.

    Parameters
    ----------
    w : int, default=150
        Maximum number of past RMSE values that feed the threshold.
    hidden_units, epochs, learning_rate, seed
        LSTM settings, one hidden layer with tanh activation.
    n_jobs : int or None
        Worker processes for converting rows; ``None`` reads
        ``$NPFKM_THREADS`` and falls back to 1. Output does not depend on it.

    The transform is stateless: ``fit`` only checks the input and records
    the series length. ``transform`` returns an array of shape
    ``(n_series, length - 5)``.
    """

    def __init__(self, w=DEFAULT_W, hidden_units=10, epochs=50, learning_rate=0.005,
                 seed=140, n_jobs=None):
        self.w = w
        self.hidden_units = hidden_units
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self.n_jobs = n_jobs

    def _hyperparams(self):
        return lstm.LstmHyperparams(
            hidden_units=self.hidden_units, epochs=self.epochs,
            learning_rate=self.learning_rate, seed=self.seed,
        )

    def fit(self, X, y=None):
        X = check_series_matrix(X)
        if X.shape[1] < MIN_LENGTH:
            raise SeriesTooShort(f"NP-Free needs at least {MIN_LENGTH} points, got {X.shape[1]}")
        self._hyperparams()
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_series_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} time points, expected {self.n_features_in_}")
        work = partial(_convert_row, hp=self._hyperparams(), w=self.w)
        rows = ordered_map(work, list(enumerate(X)), self.n_jobs)
        return np.vstack(rows)
