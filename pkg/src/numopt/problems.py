"""Ready-made objectives and data helpers.

Conventions: predictors X are d x n (one sample per column), responses y are
length n, parameters phi are a length-d vector or d x 1 column.  Gradients
come back in phi's shape.  Data arrays keep float32 or float64 as given, so
single-precision problems stay single precision end to end.
"""

from __future__ import annotations

import csv

import numpy as np

from .core import Diagnostic

__all__ = [
    "LinearRegression",
    "SeparableLinearRegression",
    "LogisticRegression",
    "Rosenbrock",
    "generate_noisy_linear",
    "load_csv",
]


def _as_float_array(values, name):
    a = np.asarray(values)
    if a.dtype not in (np.float32, np.float64):
        a = a.astype(np.float64)
    if a.size == 0:
        raise Diagnostic(f"{name} must be non-empty")
    return a


def _check_xy(predictors, responses, owner):
    X = _as_float_array(predictors, f"{owner} predictors")
    y = _as_float_array(responses, f"{owner} responses").ravel()
    if X.ndim != 2:
        raise Diagnostic(f"{owner} predictors must be a d x n matrix, got shape {X.shape}")
    if y.shape[0] != X.shape[1]:
        raise Diagnostic(
            f"{owner}: {X.shape[1]} predictor columns but {y.shape[0]} responses"
        )
    return X, y


def _flat_parameters(phi, d, owner):
    phi = np.asarray(phi)
    if phi.size != d:
        raise Diagnostic(
            f"{owner} expects {d} parameters, got shape {phi.shape}"
        )
    return phi.ravel()


def _check_window(first, count, n, owner):
    if not (0 <= first and count >= 1 and first + count <= n):
        raise Diagnostic(
            f"{owner}: window [{first}, {first + count}) outside [0, {n})"
        )


class LinearRegression:
    """Least squares f(phi) = ||X.T phi - y||^2 with gradient 2 X (X.T phi - y).

    Deliberately provides only ``evaluate`` and ``gradient``; that pair is
    enough for every gradient-based optimizer here, and the annealer needs
    just the first.
    """

    def __init__(self, predictors, responses):
        self.X, self.y = _check_xy(predictors, responses, "LinearRegression")

    def evaluate(self, phi):
        phi = _flat_parameters(phi, self.X.shape[0], "LinearRegression")
        residual = self.X.T @ phi - self.y
        return float(residual @ residual)

    def gradient(self, phi):
        flat = _flat_parameters(phi, self.X.shape[0], "LinearRegression")
        residual = self.X.T @ flat - self.y
        return (2.0 * (self.X @ residual)).reshape(np.shape(phi))


class SeparableLinearRegression:
    """The same least-squares objective exposed only part-wise.

    Part i is (x_i.T phi - y_i)^2 for column i.  Window calls slice columns
    [first, first+count); the full window [0, n) reproduces
    ``LinearRegression.evaluate`` exactly, so the inferred full objective is
    bit-identical to the direct one.
    """

    def __init__(self, predictors, responses):
        self.X, self.y = _check_xy(predictors, responses, "SeparableLinearRegression")

    @property
    def num_parts(self):
        return self.X.shape[1]

    def evaluate_parts(self, phi, first, count):
        _check_window(first, count, self.num_parts, "SeparableLinearRegression")
        phi = _flat_parameters(phi, self.X.shape[0], "SeparableLinearRegression")
        window = slice(first, first + count)
        residual = self.X[:, window].T @ phi - self.y[window]
        return float(residual @ residual)

    def gradient_parts(self, phi, first, count):
        _check_window(first, count, self.num_parts, "SeparableLinearRegression")
        flat = _flat_parameters(phi, self.X.shape[0], "SeparableLinearRegression")
        window = slice(first, first + count)
        residual = self.X[:, window].T @ flat - self.y[window]
        return (2.0 * (self.X[:, window] @ residual)).reshape(np.shape(phi))


def _softplus(z):
    # log(1 + exp(z)) without overflow for large |z|.
    out = np.empty_like(z)
    positive = z > 0
    out[positive] = z[positive] + np.log1p(np.exp(-z[positive]))
    out[~positive] = np.log1p(np.exp(z[~positive]))
    return out


def _sigmoid(z):
    out = np.empty_like(z)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    exp_z = np.exp(z[~positive])
    out[~positive] = exp_z / (1.0 + exp_z)
    return out


class LogisticRegression:
    """Negative log-likelihood for {0,1} labels, no intercept.

    f(phi) = sum_i [softplus(x_i.T phi) - y_i * x_i.T phi], gradient
    X (sigmoid(X.T phi) - y).  Computed with the sign-branched softplus so
    values stay finite out to |x_i.T phi| around 700.  Also separable per
    column.  ``ridge`` adds an optional penalty ridge * ||phi||^2 (part
    windows carry a count/n share of it); off by default.
    """

    def __init__(self, predictors, responses, ridge=0.0):
        self.X, self.y = _check_xy(predictors, responses, "LogisticRegression")
        labels = np.unique(self.y)
        if not np.all(np.isin(labels, (0.0, 1.0))):
            raise Diagnostic(
                f"LogisticRegression labels must all be 0 or 1, got values {labels[:5]}"
            )
        if ridge < 0:
            raise Diagnostic(f"ridge must be >= 0, got {ridge}")
        self.ridge = ridge

    @property
    def num_parts(self):
        return self.X.shape[1]

    def evaluate(self, phi):
        flat = _flat_parameters(phi, self.X.shape[0], "LogisticRegression")
        z = self.X.T @ flat
        value = float(np.sum(_softplus(z) - self.y * z))
        if self.ridge:
            value += self.ridge * float(flat @ flat)
        return value

    def gradient(self, phi):
        flat = _flat_parameters(phi, self.X.shape[0], "LogisticRegression")
        z = self.X.T @ flat
        g = self.X @ (_sigmoid(z) - self.y)
        if self.ridge:
            g = g + 2.0 * self.ridge * flat
        return g.reshape(np.shape(phi))

    def evaluate_parts(self, phi, first, count):
        _check_window(first, count, self.num_parts, "LogisticRegression")
        flat = _flat_parameters(phi, self.X.shape[0], "LogisticRegression")
        window = slice(first, first + count)
        z = self.X[:, window].T @ flat
        value = float(np.sum(_softplus(z) - self.y[window] * z))
        if self.ridge:
            value += self.ridge * float(flat @ flat) * (count / self.num_parts)
        return value

    def gradient_parts(self, phi, first, count):
        _check_window(first, count, self.num_parts, "LogisticRegression")
        flat = _flat_parameters(phi, self.X.shape[0], "LogisticRegression")
        window = slice(first, first + count)
        z = self.X[:, window].T @ flat
        g = self.X[:, window] @ (_sigmoid(z) - self.y[window])
        if self.ridge:
            g = g + 2.0 * self.ridge * flat * (count / self.num_parts)
        return g.reshape(np.shape(phi))


class Rosenbrock:
    """The banana-valley test function (1-a)^2 + 100(b-a^2)^2 on 2-D points.

    Global minimum 0 at (1, 1); the curved narrow valley makes it a standard
    stress test for line searches and curvature models.
    """

    def _point(self, x):
        x = np.asarray(x)
        if x.size != 2:
            raise Diagnostic(f"Rosenbrock is 2-D, got shape {x.shape}")
        return float(x.flat[0]), float(x.flat[1])

    def evaluate(self, x):
        a, b = self._point(x)
        return (1.0 - a) ** 2 + 100.0 * (b - a * a) ** 2

    def gradient(self, x):
        a, b = self._point(x)
        x = np.asarray(x)
        ga = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a)
        gb = 200.0 * (b - a * a)
        return np.array([ga, gb], dtype=x.dtype).reshape(x.shape)


def generate_noisy_linear(d, n, noise_scale=10.0, seed=0):
    """Random linear data with Gaussian noise: (X, y, phi_true).

    X and phi_true have entries uniform on (-1, 1) and
    y = X.T phi_true + noise_scale * standard normal draws, so the linear
    signal is O(1) per sample and noise_scale sets how badly it is buried.
    phi_true comes back as a d x 1 column.  Same seed, same data.
    """
    if d < 1 or n < 1:
        raise Diagnostic(f"d and n must be >= 1, got d={d}, n={n}")
    if noise_scale < 0:
        raise Diagnostic(f"noise_scale must be >= 0, got {noise_scale}")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(d, n))
    phi_true = rng.uniform(-1.0, 1.0, size=(d, 1))
    y = X.T @ phi_true.ravel() + noise_scale * rng.standard_normal(n)
    return X, y, phi_true


def load_csv(path):
    """Read a numeric CSV into (X, y): one sample per row, last column is y.

    A single leading non-numeric row is skipped as a header; any other
    non-numeric cell is a Diagnostic.  Returns X as d x n (samples become
    columns) and y as an n-vector, both float64.
    """
    rows = []
    with open(path, newline="") as handle:
        for line_number, row in enumerate(csv.reader(handle), start=1):
            if not row:
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                if line_number == 1:
                    continue
                raise Diagnostic(
                    f"{path}: line {line_number} is not numeric: {','.join(row)!r}"
                ) from None
    if not rows:
        raise Diagnostic(f"{path}: no data rows")
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise Diagnostic(f"{path}: rows have inconsistent column counts {sorted(widths)}")
    if widths.pop() < 2:
        raise Diagnostic(f"{path}: need at least one predictor column plus the response")
    data = np.array(rows, dtype=np.float64)
    return data[:, :-1].T.copy(), data[:, -1].copy()
