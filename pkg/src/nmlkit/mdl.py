"""NML code lengths, MDL model selection and asymptotic sweeps.

Code lengths are in nats. For a luckiness weight ``w`` the code length of a
data sequence is

    -log p(x; mu_hat) - log w(mu_hat) + log LPC

which is ``+inf`` when an indicator weight vanishes at the MLE.
"""

import csv
from dataclasses import dataclass, field
import math

import numpy as np

from .closed_form import log_lpc_asymptotic, spec_lpc
from .errors import ConfigError, DataError, EmptySelection
from .models import log_density, mle


@dataclass(frozen=True)
class Dataset:
    """A sequence of scalar observations."""

    values: np.ndarray
    source: str = "<memory>"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size < 1:
            raise DataError("dataset is empty")
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise DataError(f"non-finite value in {self.source}", int(bad[0]))
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return int(self.values.size)

    @classmethod
    def from_csv(cls, path):
        """Read one real per line; a non-numeric first line is a header."""
        values = []
        try:
            fh = open(path, newline="", encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc.strerror}") from None
        with fh:
            for lineno, row in enumerate(csv.reader(fh)):
                if not row or not row[0].strip():
                    continue
                if len(row) != 1:
                    raise DataError(f"{path}: expected one value per line, got {len(row)}", lineno)
                try:
                    values.append(float(row[0]))
                except ValueError:
                    if lineno == 0 and not values:
                        continue
                    raise DataError(f"{path}: cannot parse {row[0]!r} as a number", lineno) from None
        return cls(np.array(values), str(path))

    def summary(self):
        v = self.values
        return {"source": self.source, "n": self.n, "mean": float(v.mean()),
                "min": float(v.min()), "max": float(v.max())}


@dataclass
class CodeLength:
    """Three-term NML code length with its parts."""

    model_id: str
    fixed_params: dict
    mu_hat: float
    log_max_likelihood: float
    log_luckiness_at_mle: float
    log_lpc: float
    nml_code_length: float
    method: str
    flag: str | None = None
    rank: int | None = None

    def __float__(self):
        return self.nml_code_length

    def as_row(self):
        return {
            "rank": self.rank,
            "model": self.model_id,
            "params": ";".join(f"{k}={v:g}" for k, v in self.fixed_params.items()),
            "mu_hat": self.mu_hat,
            "log_max_likelihood": self.log_max_likelihood,
            "log_luckiness_at_mle": self.log_luckiness_at_mle,
            "log_lpc": self.log_lpc,
            "nml_code_length": self.nml_code_length,
            "method": self.method,
            "flag": self.flag or "",
        }


def nml_code_length(spec, data, method="auto", cfg=None):
    """NML code length of ``data`` under ``spec``, in nats.

    ``method="auto"`` uses the closed form when the row has one and
    Fourier inversion otherwise.

    Raises
    ------
    DataError
        A value outside the model's data domain, with its record index.
    """
    model = spec.model()
    x = model.check_data(data.values)
    fit = mle(model, x)
    mu_hat = float(fit)
    pc = spec_lpc(spec, data.n, method, cfg)
    weight = float(spec.luckiness(np.array([mu_hat]))[0]) if not fit.boundary else 0.0
    if weight > 0:
        log_lik = float(np.sum(log_density(model, x, mu_hat)))
        log_w = math.log(weight)
        length = -log_lik - log_w + pc.log_value
        flag = None
    else:
        log_lik = float(np.sum(log_density(model, x, mu_hat))) if not fit.boundary else math.nan
        log_w = -math.inf
        length = math.inf
        flag = "mle-outside-window"
    return CodeLength(spec.model_id, dict(model.fixed_params), mu_hat, log_lik, log_w,
                      pc.log_value, length, pc.method, flag)


@dataclass
class SelectionReport:
    """Per-candidate code lengths ranked ascending (rank 1 is selected)."""

    entries: list
    dataset: dict
    config: dict = field(default_factory=dict)

    @property
    def best(self):
        return self.entries[0]

    def rows(self):
        return [e.as_row() for e in self.entries]


def select_model(candidates, data, cfg=None, method="auto"):
    """Rank candidate ModelSpecs by NML code length on ``data``.

    Infinite code lengths rank last; ties keep candidate order.

    Raises
    ------
    EmptySelection
        When every candidate has infinite code length.
    """
    if len(candidates) < 2:
        raise ConfigError("model selection needs at least two candidates")
    entries = [nml_code_length(spec, data, method, cfg) for spec in candidates]
    if all(math.isinf(e.nml_code_length) for e in entries):
        raise EmptySelection("every candidate has infinite code length",
                             {e.model_id: e.flag for e in entries})
    order = sorted(range(len(entries)), key=lambda i: (entries[i].nml_code_length, i))
    ranked = []
    for rank, i in enumerate(order, start=1):
        entries[i].rank = rank
        ranked.append(entries[i])
    config = {"method": method, "candidates": [c.to_dict() for c in candidates]}
    return SelectionReport(ranked, data.summary(), config)


def sweep_asymptotic(spec, n_list, cfg=None):
    """Exact and asymptotic log LPC with their gap, one row per ``n``."""
    rows = []
    model = spec.model()
    for n in n_list:
        exact = spec_lpc(spec, int(n), "auto", cfg)
        asym = log_lpc_asymptotic(model, spec.luckiness, int(n), cfg)
        rows.append({"n": int(n), "log_lpc_exact": exact.log_value, "exact_method": exact.method,
                     "log_lpc_asymptotic": asym.log_value, "gap": exact.log_value - asym.log_value})
    return rows
