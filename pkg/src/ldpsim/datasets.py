"""Dataset ingestion, frequency utilities, priors, and the utility metric.

CSV ingestion builds per-column value dictionaries in first-appearance
order, so the same file always produces the same integer encoding.  Two
deterministic synthetic fixtures ship with the package (census-style column
layouts at desk scale); real datasets load from user-supplied CSVs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError
from .multidim import MultiDomain, _categorical
from .oracles import AttributeDomain

FIXTURES = {
    "adult_style_5000": "adult_style_5000.csv",
    "adult_style_100": "adult_style_100.csv",
    "acs_style_1000": "acs_style_1000.csv",
}


@dataclass
class Dataset:
    """Integer-encoded categorical table plus its domain metadata."""

    multidomain: MultiDomain
    rows: np.ndarray
    ids: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def d(self) -> int:
        return self.multidomain.d

    @property
    def ks(self) -> tuple[int, ...]:
        return self.multidomain.ks

    def subsample(self, n: int, rng: np.random.Generator) -> "Dataset":
        """Uniform row subsample without replacement (domains unchanged)."""
        if n > self.n:
            raise ParameterError(f"cannot subsample {n} of {self.n} rows")
        idx = np.sort(rng.choice(self.n, size=n, replace=False))
        ids = None if self.ids is None else self.ids[idx]
        return Dataset(self.multidomain, self.rows[idx], ids)

    def select(self, attrs: Sequence[int]) -> "Dataset":
        """Column projection onto the given attribute indices."""
        attrs = list(attrs)
        md = MultiDomain(tuple(self.multidomain.domains[a] for a in attrs))
        return Dataset(md, self.rows[:, attrs], self.ids)


def load_dataset(path: str | Path, columns: Sequence[str] | None = None,
                 id_column: str | None = None) -> Dataset:
    """Read a UTF-8 CSV with header into an integer-encoded dataset.

    ``columns`` selects and orders the categorical attributes (default: all
    non-id columns in header order).  Value dictionaries are built in
    first-appearance order, so ingestion is deterministic.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError(f"{path} is empty") from None
        if columns is None:
            columns = [c for c in header if c != id_column]
        missing = [c for c in columns if c not in header]
        if missing:
            raise DomainError(f"columns {missing} not in header of {path}")
        col_idx = [header.index(c) for c in columns]
        id_idx = header.index(id_column) if id_column is not None else None

        dicts: list[dict] = [{} for _ in columns]
        encoded: list[list[int]] = []
        ids: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DomainError(f"{path}:{line_no}: ragged row ({len(row)} fields)")
            rec = []
            for j, ci in enumerate(col_idx):
                label = row[ci]
                d = dicts[j]
                if label not in d:
                    d[label] = len(d)
                rec.append(d[label])
            encoded.append(rec)
            if id_idx is not None:
                ids.append(row[id_idx])
    if not encoded:
        raise DomainError(f"{path} has no data rows")
    empty = [c for c, d in zip(columns, dicts) if len(d) == 0]
    if empty:
        raise DomainError(f"columns {empty} are empty")
    domains = tuple(
        AttributeDomain(name, tuple(d.keys())) for name, d in zip(columns, dicts)
    )
    return Dataset(
        MultiDomain(domains),
        np.asarray(encoded, dtype=np.int64),
        np.asarray(ids) if ids else None,
    )


def load_fixture(name: str) -> Dataset:
    """Load one of the bundled deterministic fixtures by short name."""
    if name not in FIXTURES:
        raise ParameterError(f"unknown fixture {name!r}; available: {sorted(FIXTURES)}")
    ref = resources.files("ldpsim.data").joinpath(FIXTURES[name])
    with resources.as_file(ref) as path:
        return load_dataset(path, id_column="id")


def true_frequencies(dataset: Dataset) -> list[np.ndarray]:
    """Exact empirical distribution per attribute."""
    out = []
    for a, k in enumerate(dataset.ks):
        counts = np.bincount(dataset.rows[:, a], minlength=k)
        out.append(counts / counts.sum())
    return out


def perturb_frequencies(freqs: np.ndarray, scale: float,
                        rng: np.random.Generator) -> np.ndarray:
    """Raw Laplace-noised frequency vector (before clipping/normalization)."""
    freqs = np.asarray(freqs, dtype=np.float64)
    return freqs + rng.laplace(0.0, scale, size=freqs.shape)


def laplace_prior(
    true_freqs: Sequence[np.ndarray],
    total_epsilon: float,
    n: int,
    rng: np.random.Generator,
) -> tuple[list[np.ndarray], list[bool]]:
    """Noisy priors: per-attribute Laplace mechanism on the true frequencies.

    The budget splits evenly over the d attributes and a normalized
    histogram has sensitivity 2/n, so each frequency takes Laplace noise of
    scale 2 / (n * (total_epsilon / d)); clipped at 0 and renormalized.
    Returns (priors, fallback flags); a prior that clips to all-zero falls
    back to uniform and its flag is set.
    """
    if total_epsilon <= 0:
        raise ParameterError("total_epsilon must be > 0")
    if n < 1:
        raise ParameterError("n must be >= 1")
    d = len(true_freqs)
    scale = 2.0 / (n * (total_epsilon / d))
    priors, fallback = [], []
    for f in true_freqs:
        noisy = np.clip(perturb_frequencies(f, scale, rng), 0.0, None)
        total = noisy.sum()
        if total <= 0:
            priors.append(np.full(len(f), 1.0 / len(f)))
            fallback.append(True)
        else:
            priors.append(noisy / total)
            fallback.append(False)
    return priors, fallback


def synthesize_profiles(
    freqs: Sequence[np.ndarray], count: int, rng: np.random.Generator,
    md: MultiDomain | None = None,
) -> Dataset:
    """Draw independent categorical rows from per-attribute distributions."""
    freqs = [np.asarray(f, dtype=np.float64) for f in freqs]
    for f in freqs:
        if (f < 0).any() or abs(f.sum() - 1.0) > 1e-9:
            raise ParameterError("synthesize_profiles needs valid distributions")
    if count < 0:
        raise ParameterError("count must be >= 0")
    if md is None:
        md = MultiDomain.from_ks([len(f) for f in freqs])
    if count == 0:
        rows = np.empty((0, len(freqs)), dtype=np.int64)
    else:
        rows = np.column_stack([_categorical(f, count, rng) for f in freqs])
    return Dataset(md, rows)


def mse_avg(true_tables: Sequence[np.ndarray], est_tables: Sequence[np.ndarray]) -> float:
    """Mean over attributes of the per-attribute mean squared frequency error."""
    if len(true_tables) != len(est_tables):
        raise ParameterError("table lists differ in length")
    total = 0.0
    for t, e in zip(true_tables, est_tables):
        t = np.asarray(t, dtype=np.float64)
        e = np.asarray(e, dtype=np.float64)
        if t.shape != e.shape:
            raise ParameterError(f"shape mismatch {t.shape} vs {e.shape}")
        total += float(np.mean((t - e) ** 2))
    return total / len(true_tables)


# ---------------------------------------------------------------------------
# Synthetic generators
# ---------------------------------------------------------------------------

def zipf_marginal(k: int, exponent: float) -> np.ndarray:
    """Zipf-shaped probability vector over k values."""
    w = 1.0 / np.arange(1, k + 1, dtype=np.float64) ** exponent
    return w / w.sum()


def zipf_dataset(n: int, ks: Sequence[int], exponent: float,
                 rng: np.random.Generator, shuffle_values: bool = True) -> Dataset:
    """Synthetic dataset with independent Zipf-like marginals per attribute.

    ``shuffle_values`` permutes which value index gets which mass so the
    heavy value is not always index 0.
    """
    md = MultiDomain.from_ks(ks)
    cols = []
    for k in ks:
        pv = zipf_marginal(k, exponent)
        if shuffle_values:
            pv = pv[rng.permutation(k)]
        cols.append(_categorical(pv, n, rng))
    return Dataset(md, np.column_stack(cols))


def uniform_dataset(n: int, ks: Sequence[int], rng: np.random.Generator) -> Dataset:
    """Synthetic dataset with independent uniform marginals per attribute."""
    md = MultiDomain.from_ks(ks)
    rows = np.column_stack([rng.integers(0, k, size=n) for k in ks])
    return Dataset(md, rows)
