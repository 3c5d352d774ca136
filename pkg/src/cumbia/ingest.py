"""Loading, preprocessing, selection statistics, and the synthetic benchmark.

The preprocessing mirrors a common expression-data pipeline: drop variables
with missing values, drop variables with nonpositive values, log2-transform
what remains, then z-score each variable across samples. t_statistic and
f_statistic rank variables for selection; synth_block generates the seeded
planted-block benchmark used throughout the tests.
"""

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CumbiaWarning, InputError, ParameterError
from .matrix_core import DataMatrix, require_finite


@dataclass
class PreprocessReport:
    dropped_missing: int = 0
    dropped_negative: int = 0
    zscored: bool = False
    log2: bool = False


@dataclass
class GroupLabels:
    """Per-sample group assignment for selection statistics."""

    assignment: list

    def __post_init__(self):
        self.assignment = [str(g) for g in self.assignment]

    def mask(self, group):
        return np.array([g == group for g in self.assignment], dtype=bool)

    def groups(self):
        seen = []
        for g in self.assignment:
            if g not in seen:
                seen.append(g)
        return seen


def load_table(path, delimiter=",", orientation="samples-rows",
               missing_token="NA"):
    """Read a labeled delimited table into a DataMatrix.

    Expected layout: header row of variable labels, label column of sample
    labels (roles swap under orientation="variables-rows", after which the
    matrix is transposed into rows-are-samples form). Cells equal to the
    missing token, or empty, become NaN for downstream filtering.
    """
    if orientation not in ("samples-rows", "variables-rows"):
        raise ParameterError(
            f"orientation must be samples-rows or variables-rows, "
            f"not {orientation!r}"
        )
    try:
        handle = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with handle:
        rows = list(csv.reader(handle, delimiter=delimiter))
    rows = [row for row in rows if row]
    if len(rows) < 2:
        raise InputError(f"{path}: need a header row and at least one data row")
    header = [cell.strip() for cell in rows[0]]
    width = len(header)
    if width < 2:
        raise InputError(f"{path}: need a label column and at least one value column")
    column_labels = header[1:]
    row_labels = []
    cells = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise InputError(
                f"{path}: line {lineno}: expected {width} fields, got {len(row)}"
            )
        row_labels.append(row[0].strip())
        parsed = []
        for col, cell in enumerate(row[1:], start=1):
            cell = cell.strip()
            if cell == missing_token or cell == "":
                parsed.append(math.nan)
                continue
            try:
                parsed.append(float(cell))
            except ValueError:
                raise InputError(
                    f"{path}: line {lineno}, column {header[col]!r}: "
                    f"cell {cell!r} is not numeric"
                ) from None
        cells.append(parsed)
    values = np.array(cells, dtype=np.float64)
    if orientation == "variables-rows":
        values = values.T.copy()
        row_labels, column_labels = column_labels, row_labels
    return DataMatrix(values=values, sample_labels=row_labels,
                      variable_labels=column_labels)


def filter_and_log2(X):
    """Drop variables with missing values, then with values <= 0; log2 the rest."""
    values = X.values
    missing = np.isnan(values).any(axis=0)
    kept = values[:, ~missing]
    kept_labels = [l for l, m in zip(X.variable_labels, missing) if not m]
    nonpositive = (kept <= 0).any(axis=0)
    final = kept[:, ~nonpositive]
    final_labels = [l for l, m in zip(kept_labels, nonpositive) if not m]
    if final.shape[1] == 0:
        raise InputError("no variables survive filtering")
    report = PreprocessReport(
        dropped_missing=int(missing.sum()),
        dropped_negative=int(nonpositive.sum()),
        zscored=False,
        log2=True,
    )
    out = DataMatrix(values=np.log2(final), sample_labels=list(X.sample_labels),
                     variable_labels=final_labels)
    return out, report


def zscore_variables(X, zero_variance_policy="error"):
    """Standardize every variable to mean 0, standard deviation 1 (ddof=1)."""
    if zero_variance_policy not in ("error", "drop"):
        raise ParameterError(
            f"zero_variance_policy must be error or drop, "
            f"not {zero_variance_policy!r}"
        )
    if X.n_samples < 2:
        raise ParameterError("z-scoring needs at least 2 samples")
    require_finite(X.values)
    means = X.values.mean(axis=0)
    sds = X.values.std(axis=0, ddof=1)
    constant = sds == 0.0
    if constant.any():
        names = [l for l, c in zip(X.variable_labels, constant) if c]
        if zero_variance_policy == "error":
            raise InputError(
                f"zero-variance variable(s): {', '.join(names[:5])}"
                + ("..." if len(names) > 5 else "")
            )
        warnings.warn(
            f"dropped {len(names)} zero-variance variable(s)",
            CumbiaWarning,
            stacklevel=2,
        )
    keep = ~constant
    values = (X.values[:, keep] - means[keep]) / sds[keep]
    labels = [l for l, k in zip(X.variable_labels, keep) if k]
    if values.shape[1] == 0:
        raise InputError("no variables survive zero-variance filtering")
    return DataMatrix(values=values, sample_labels=list(X.sample_labels),
                      variable_labels=labels)


def t_statistic(X, groups, target_group):
    """Pooled-variance two-sample t per variable: target group vs the rest.

    Zero pooled variance degenerates to +/-Inf by the sign of the mean
    difference, or 0 when the means are equal too.
    """
    require_finite(X.values)
    if len(groups.assignment) != X.n_samples:
        raise ParameterError("group assignment length must equal sample count")
    mask = groups.mask(target_group)
    n_a = int(mask.sum())
    n_b = X.n_samples - n_a
    if n_a < 2 or n_b < 2:
        raise ParameterError(
            f"need >= 2 samples on each side, got {n_a} vs {n_b}"
        )
    A = X.values[mask]
    B = X.values[~mask]
    diff = A.mean(axis=0) - B.mean(axis=0)
    pooled = ((n_a - 1) * A.var(axis=0, ddof=1)
              + (n_b - 1) * B.var(axis=0, ddof=1)) / (n_a + n_b - 2)
    scale = np.sqrt(pooled * (1.0 / n_a + 1.0 / n_b))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = diff / scale
    degenerate = scale == 0.0
    t[degenerate & (diff > 0.0)] = np.inf
    t[degenerate & (diff < 0.0)] = -np.inf
    t[degenerate & (diff == 0.0)] = 0.0
    return t


def f_statistic(X, groups):
    """One-way ANOVA F per variable: between-group over within-group mean square.

    Zero within-group variance gives +Inf when group means differ and 0
    when they do not.
    """
    require_finite(X.values)
    if len(groups.assignment) != X.n_samples:
        raise ParameterError("group assignment length must equal sample count")
    names = groups.groups()
    g = len(names)
    N = X.n_samples
    if g < 2:
        raise ParameterError("F-statistic needs at least 2 groups")
    if N <= g:
        raise ParameterError(f"need more samples ({N}) than groups ({g})")
    grand = X.values.mean(axis=0)
    ss_between = np.zeros(X.n_variables)
    ss_within = np.zeros(X.n_variables)
    for name in names:
        block = X.values[groups.mask(name)]
        m = block.mean(axis=0)
        ss_between += block.shape[0] * (m - grand) ** 2
        ss_within += ((block - m) ** 2).sum(axis=0)
    ms_between = ss_between / (g - 1)
    ms_within = ss_within / (N - g)
    with np.errstate(divide="ignore", invalid="ignore"):
        F = ms_between / ms_within
    degenerate = ms_within == 0.0
    F[degenerate] = np.inf
    F[degenerate & (ms_between == 0.0)] = 0.0
    return F


def synth_block(N=60, p=1500, n_planted=6, p_planted=25, shift=2.0, seed=0):
    """Seeded Gaussian matrix with a mean-shifted top-left block.

    Entries are Normal(0, 1) except the n_planted x p_planted corner, which
    is Normal(shift, 1). Returns the matrix and per-sample group labels
    ("planted" / "background").
    """
    if N < 1 or p < 1:
        raise ParameterError("matrix dimensions must be positive")
    if not 0 <= n_planted <= N or not 0 <= p_planted <= p:
        raise ParameterError(
            f"planted block {n_planted}x{p_planted} exceeds matrix {N}x{p}"
        )
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((N, p))
    values[:n_planted, :p_planted] += shift
    X = DataMatrix(values=values)
    labels = GroupLabels(
        assignment=["planted"] * n_planted + ["background"] * (N - n_planted)
    )
    return X, labels
