"""Multidimensional collection: budget splitting, sampling, and fake data.

Four families of solutions for collecting d categorical attributes per user:

* ``spl``    -- split the budget: every attribute randomized at epsilon/d.
* ``smp``    -- sample one attribute, spend the whole budget on it, and tell
                the server which one (optionally memoizing repeats).
* ``rs_fd``  -- sample one attribute secretly, randomize it at the amplified
                budget eps' = ln(d(e^eps - 1) + 1), and emit uniform fake
                data for every other attribute.
* ``rs_rfd`` -- same, but fake data is drawn from per-attribute prior
                distributions, which both hides the sampled slot better and
                lets the estimator reclaim the fake mass.

The rs_fd variants are ``grr`` (plain values, uniform fakes), ``ue_z``
(unary encoding on all-zero fake vectors) and ``ue_r`` (unary encoding on
uniform one-hot fakes); rs_rfd supports ``grr`` and ``ue_r`` only.  UE
variants take a ``flavor`` of ``sue`` or ``oue``.

Estimators here are raw and unbiased: the rs_fd ones invert the uniform
fake mass, the rs_rfd ones invert the prior mass, and the rs_rfd estimator
variance has the closed form  d^2 gamma (1-gamma) / (n (p-q)^2)  with gamma
the per-report support probability read off the sampling probability tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterError, SamplingExhaustedError
from .oracles import (
    AttributeDomain,
    ProtocolParams,
    SanitizedReport,
    ValueReport,
    BitsReport,
    protocol_params,
    randomize,
    randomize_batch,
)

RS_FD_VARIANTS = ("grr", "ue_z", "ue_r")
RS_RFD_VARIANTS = ("grr", "ue_r")
UE_FLAVORS = ("sue", "oue")


@dataclass(frozen=True)
class MultiDomain:
    """An ordered collection of categorical attribute domains."""

    domains: tuple[AttributeDomain, ...]

    def __post_init__(self):
        if len(self.domains) < 1:
            raise DomainError("MultiDomain needs at least one attribute")

    @property
    def d(self) -> int:
        return len(self.domains)

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(dom.k for dom in self.domains)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(dom.name for dom in self.domains)

    @classmethod
    def from_ks(cls, ks: Sequence[int], names: Sequence[str] | None = None) -> "MultiDomain":
        if names is None:
            names = [f"a{i}" for i in range(len(ks))]
        return cls(
            tuple(
                AttributeDomain(name, tuple(f"{name}_v{v}" for v in range(k)))
                for name, k in zip(names, ks)
            )
        )


@dataclass(frozen=True)
class SmpReport:
    """Sampling-solution output: the sampled attribute index is disclosed."""

    sampled_index: int
    report: SanitizedReport


@dataclass(frozen=True)
class FullVector:
    """Full d-length output of spl / rs_fd / rs_rfd; never discloses the sampled slot."""

    solution: str
    reports: tuple
    variant: str | None = None
    flavor: str | None = None


SurveyTuple = SmpReport | FullVector


@dataclass
class SmpUserState:
    """Per-user sampling state carried across surveys.

    ``used`` drives without-replacement sampling; ``memo`` caches reports
    keyed by (attribute, protocol, epsilon) so a repeated attribute under
    with-replacement sampling re-sends the identical report.
    """

    used: set = field(default_factory=set)
    memo: dict = field(default_factory=dict)


def amplified_epsilon(epsilon: float, d: int) -> float:
    """Budget amplification from sampling 1 of d attributes: ln(d(e^eps - 1) + 1)."""
    if epsilon <= 0:
        raise ParameterError("epsilon must be > 0")
    if d < 1:
        raise ParameterError("d must be >= 1")
    return math.log(d * (math.exp(epsilon) - 1.0) + 1.0)


def rs_params(variant: str, flavor: str | None, epsilon: float, d: int, k: int) -> ProtocolParams:
    """Randomizer parameters for the sampled slot of rs_fd / rs_rfd."""
    eps_amp = amplified_epsilon(epsilon, d)
    if variant == "grr":
        return protocol_params("grr", eps_amp, k)
    if variant in ("ue_z", "ue_r"):
        if flavor not in UE_FLAVORS:
            raise ParameterError(f"UE variant needs flavor in {UE_FLAVORS}, got {flavor!r}")
        return protocol_params(flavor, eps_amp, k)
    raise ParameterError(f"unknown variant {variant!r}")


def validate_priors(priors: Sequence[np.ndarray], md: MultiDomain) -> list[np.ndarray]:
    """Check one non-negative unit-sum vector per attribute."""
    if len(priors) != md.d:
        raise ParameterError(f"expected {md.d} prior vectors, got {len(priors)}")
    out = []
    for dom, vec in zip(md.domains, priors):
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (dom.k,):
            raise ParameterError(f"prior for {dom.name!r} has shape {vec.shape}, expected ({dom.k},)")
        if (vec < 0).any() or abs(vec.sum() - 1.0) > 1e-9:
            raise ParameterError(f"prior for {dom.name!r} is not a distribution")
        out.append(vec)
    return out


def uniform_priors(md: MultiDomain) -> list[np.ndarray]:
    return [np.full(k, 1.0 / k) for k in md.ks]


def _categorical(pvec: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vector of categorical draws from one probability vector."""
    cum = np.cumsum(pvec)
    cum[-1] = 1.0  # guard float round-off at the top edge
    idx = np.searchsorted(cum, rng.random(size), side="right")
    return np.minimum(idx, len(pvec) - 1).astype(np.int64)


# ---------------------------------------------------------------------------
# SPL and SMP
# ---------------------------------------------------------------------------

def spl_sanitize(
    values: Sequence[int],
    md: MultiDomain,
    protocol: str,
    epsilon: float,
    rng: np.random.Generator,
) -> FullVector:
    """Randomize every attribute at epsilon / d."""
    if len(values) != md.d:
        raise DomainError(f"expected {md.d} values, got {len(values)}")
    eps_split = epsilon / md.d
    reports = tuple(
        randomize(int(values[a]), protocol_params(protocol, eps_split, dom.k), rng)
        for a, dom in enumerate(md.domains)
    )
    return FullVector(solution="spl", reports=reports, flavor=protocol)


def smp_sanitize(
    values: Sequence[int],
    md: MultiDomain,
    protocol: str,
    epsilon: float,
    rng: np.random.Generator,
    sampling_mode: str,
    state: SmpUserState,
    attrs: Sequence[int] | None = None,
) -> SmpReport:
    """Sample one attribute and spend the full budget on it.

    ``without_replacement`` keeps a per-user record of reported attributes
    and raises :class:`SamplingExhaustedError` once none remain;
    ``with_replacement`` memoizes, so re-sampling an attribute returns the
    previously sent report unchanged.  ``attrs`` restricts the draw to a
    survey's attribute subset (default: all attributes).
    """
    if sampling_mode not in ("without_replacement", "with_replacement"):
        raise ParameterError(f"unknown sampling_mode {sampling_mode!r}")
    if len(values) != md.d:
        raise DomainError(f"expected {md.d} values, got {len(values)}")
    pool = list(range(md.d)) if attrs is None else sorted(int(a) for a in attrs)

    if sampling_mode == "without_replacement":
        avail = [a for a in pool if a not in state.used]
        if not avail:
            raise SamplingExhaustedError("all attributes in the pool already sampled")
        j = avail[rng.integers(len(avail))]
        state.used.add(j)
        params = protocol_params(protocol, epsilon, md.domains[j].k)
        return SmpReport(j, randomize(int(values[j]), params, rng))

    j = pool[rng.integers(len(pool))]
    key = (j, protocol, epsilon)
    if key not in state.memo:
        params = protocol_params(protocol, epsilon, md.domains[j].k)
        state.memo[key] = randomize(int(values[j]), params, rng)
    state.used.add(j)
    return SmpReport(j, state.memo[key])


# ---------------------------------------------------------------------------
# RS+FD / RS+RFD sanitizers (batch core, scalar wrappers)
# ---------------------------------------------------------------------------

@dataclass
class TupleBatch:
    """Column-oriented batch of full-vector survey tuples.

    ``columns[a]`` holds attribute a's reports for all n users: an int
    vector for the grr variant, a (n, k_a) uint8 matrix for ue variants.
    The sampled attribute indices are intentionally NOT stored here; the
    simulator keeps them separately when it needs ground truth.
    """

    solution: str
    variant: str
    flavor: str | None
    md: MultiDomain
    epsilon: float
    columns: list

    def __len__(self) -> int:
        first = self.columns[0]
        return len(first)


def _rs_sanitize_batch(
    rows: np.ndarray,
    md: MultiDomain,
    variant: str,
    flavor: str | None,
    epsilon: float,
    rng: np.random.Generator,
    fake_priors: list[np.ndarray] | None,
    solution: str,
) -> tuple[TupleBatch, np.ndarray]:
    """Shared client-side pipeline for rs_fd and rs_rfd.

    ``fake_priors`` is None only for the ue_z variant (zero-vector fakes);
    rs_fd's uniform fakes are the uniform-prior special case so that both
    solutions consume the random stream identically at equal seeds.
    """
    rows = np.asarray(rows, dtype=np.int64)
    n, d = rows.shape
    if d != md.d:
        raise DomainError(f"rows have {d} columns, domain has {md.d}")
    sampled = rng.integers(0, d, size=n)
    columns = []
    for a, dom in enumerate(md.domains):
        k = dom.k
        params = rs_params(variant, flavor, epsilon, d, k)
        mask = sampled == a
        m = int(mask.sum())
        if variant == "grr":
            col = np.empty(n, dtype=np.int64)
            col[mask] = randomize_batch(rows[mask, a], params, rng).data
            col[~mask] = _categorical(fake_priors[a], n - m, rng)
        else:
            col = np.empty((n, k), dtype=np.uint8)
            col[mask] = randomize_batch(rows[mask, a], params, rng).data
            if variant == "ue_z":
                col[~mask] = (rng.random((n - m, k)) < params.q).astype(np.uint8)
            else:  # ue_r: unary-encode a categorical fake draw
                fake_vals = _categorical(fake_priors[a], n - m, rng)
                col[~mask] = randomize_batch(fake_vals, params, rng).data
        columns.append(col)
    batch = TupleBatch(solution, variant, flavor, md, epsilon, columns)
    return batch, sampled


def rsfd_sanitize_batch(
    rows: np.ndarray,
    md: MultiDomain,
    variant: str,
    flavor: str | None,
    epsilon: float,
    rng: np.random.Generator,
) -> tuple[TupleBatch, np.ndarray]:
    """rs_fd client side for n users; returns (batch, sampled indices)."""
    if variant not in RS_FD_VARIANTS:
        raise ParameterError(f"rs_fd variant must be one of {RS_FD_VARIANTS}")
    priors = None if variant == "ue_z" else uniform_priors(md)
    return _rs_sanitize_batch(rows, md, variant, flavor, epsilon, rng, priors, "rs_fd")


def rsrfd_sanitize_batch(
    rows: np.ndarray,
    md: MultiDomain,
    priors: Sequence[np.ndarray],
    variant: str,
    flavor: str | None,
    epsilon: float,
    rng: np.random.Generator,
) -> tuple[TupleBatch, np.ndarray]:
    """rs_rfd client side: fakes drawn from per-attribute priors."""
    if variant not in RS_RFD_VARIANTS:
        raise ParameterError(f"rs_rfd variant must be one of {RS_RFD_VARIANTS}")
    priors = validate_priors(priors, md)
    return _rs_sanitize_batch(rows, md, variant, flavor, epsilon, rng, priors, "rs_rfd")


def _wrap_tuple(batch: TupleBatch) -> FullVector:
    reports = []
    for col in batch.columns:
        if batch.variant == "grr":
            reports.append(ValueReport(int(col[0])))
        else:
            reports.append(BitsReport(tuple(int(b) for b in col[0])))
    return FullVector(
        solution=batch.solution, reports=tuple(reports),
        variant=batch.variant, flavor=batch.flavor,
    )


def rsfd_sanitize(
    values: Sequence[int],
    md: MultiDomain,
    variant: str,
    flavor: str | None,
    epsilon: float,
    rng: np.random.Generator,
) -> tuple[FullVector, int]:
    """Single-user rs_fd; returns the tuple and (simulator-only) sampled index."""
    batch, sampled = rsfd_sanitize_batch(
        np.asarray([values], dtype=np.int64), md, variant, flavor, epsilon, rng
    )
    return _wrap_tuple(batch), int(sampled[0])


def rsrfd_sanitize(
    values: Sequence[int],
    md: MultiDomain,
    priors: Sequence[np.ndarray],
    variant: str,
    flavor: str | None,
    epsilon: float,
    rng: np.random.Generator,
) -> tuple[FullVector, int]:
    """Single-user rs_rfd; returns the tuple and (simulator-only) sampled index."""
    batch, sampled = rsrfd_sanitize_batch(
        np.asarray([values], dtype=np.int64), md, priors, variant, flavor, epsilon, rng
    )
    return _wrap_tuple(batch), int(sampled[0])


def tuples_to_batch(
    tuples: Sequence[FullVector], md: MultiDomain, epsilon: float
) -> TupleBatch:
    """Pack full-vector tuples into a column batch for estimation."""
    if not tuples:
        raise ParameterError("empty tuple list")
    first = tuples[0]
    if first.solution not in ("rs_fd", "rs_rfd"):
        raise ParameterError(f"column batching covers fake-data tuples, not {first.solution!r}")
    for t in tuples:
        if (t.solution, t.variant, t.flavor) != (first.solution, first.variant, first.flavor):
            raise ParameterError("mixed solutions/variants in one batch")
    columns = []
    for a, dom in enumerate(md.domains):
        if first.variant == "grr":
            columns.append(np.asarray([t.reports[a].index for t in tuples], dtype=np.int64))
        else:
            columns.append(np.asarray([t.reports[a].bits for t in tuples], dtype=np.uint8))
    return TupleBatch(first.solution, first.variant, first.flavor, md, epsilon, columns)


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------

def _batch_counts(batch: TupleBatch) -> list[np.ndarray]:
    counts = []
    for a, dom in enumerate(batch.md.domains):
        col = batch.columns[a]
        if batch.variant == "grr":
            counts.append(np.bincount(col, minlength=dom.k).astype(np.int64))
        else:
            counts.append(col.sum(axis=0, dtype=np.int64))
    return counts


def rsfd_estimate_from_counts(
    counts: Sequence[np.ndarray],
    md: MultiDomain,
    variant: str,
    flavor: str | None,
    epsilon: float,
    n: int,
) -> list[np.ndarray]:
    """Debias rs_fd support counts (uniform fake mass) per attribute."""
    d = md.d
    out = []
    for a, dom in enumerate(md.domains):
        k = dom.k
        params = rs_params(variant, flavor, epsilon, d, k)
        p, q = params.p, params.q
        c = np.asarray(counts[a], dtype=np.float64)
        if variant == "grr":
            est = (c * d * k - n * (d - 1 + q * k)) / (n * k * (p - q))
        elif variant == "ue_z":
            est = d * (c - n * q) / (n * (p - q))
        else:  # ue_r
            est = (c * d * k - n * (q * k + (p - q) * (d - 1) + q * k * (d - 1))) / (
                n * k * (p - q)
            )
        out.append(est)
    return out


def rsfd_estimate(
    data: TupleBatch | Sequence[FullVector],
    md: MultiDomain,
    variant: str,
    flavor: str | None,
    epsilon: float,
) -> list[np.ndarray]:
    """Raw unbiased per-attribute frequency estimates for rs_fd tuples."""
    if not isinstance(data, TupleBatch):
        data = tuples_to_batch(data, md, epsilon)
    return rsfd_estimate_from_counts(
        _batch_counts(data), md, variant, flavor, epsilon, len(data)
    )


def rsrfd_estimate_from_counts(
    counts: Sequence[np.ndarray],
    md: MultiDomain,
    priors: Sequence[np.ndarray],
    variant: str,
    flavor: str | None,
    epsilon: float,
    n: int,
) -> list[np.ndarray]:
    """Debias rs_rfd support counts (prior fake mass) per attribute."""
    d = md.d
    priors = validate_priors(priors, md)
    out = []
    for a, dom in enumerate(md.domains):
        k = dom.k
        params = rs_params(variant, flavor, epsilon, d, k)
        p, q = params.p, params.q
        c = np.asarray(counts[a], dtype=np.float64)
        tilde = priors[a]
        if variant == "grr":
            est = (d * c - n * (q + (d - 1) * tilde)) / (n * (p - q))
        else:  # ue_r
            est = (d * c - n * (q + (p - q) * (d - 1) * tilde + q * (d - 1))) / (n * (p - q))
        out.append(est)
    return out


def rsrfd_estimate(
    data: TupleBatch | Sequence[FullVector],
    md: MultiDomain,
    priors: Sequence[np.ndarray],
    variant: str,
    flavor: str | None,
    epsilon: float,
) -> list[np.ndarray]:
    """Raw unbiased per-attribute frequency estimates for rs_rfd tuples."""
    if not isinstance(data, TupleBatch):
        data = tuples_to_batch(data, md, epsilon)
    return rsrfd_estimate_from_counts(
        _batch_counts(data), md, priors, variant, flavor, epsilon, len(data)
    )


def rsrfd_variance(
    f_v: float,
    prior_v: float,
    p: float,
    q: float,
    d: int,
    n: int,
    variant: str = "grr",
) -> float:
    """Closed-form variance of the rs_rfd estimator for one value.

    gamma is the probability that one report supports the value, read off
    the sampling probability tree:

      grr :  gamma = (q + f (p-q) + (d-1) f_tilde) / d
      ue_r:  gamma = (f (p-q) + q + (d-1)(f_tilde (p-q) + q)) / d
    """
    if variant == "grr":
        gamma = (q + f_v * (p - q) + (d - 1) * prior_v) / d
    elif variant == "ue_r":
        gamma = (f_v * (p - q) + q + (d - 1) * (prior_v * (p - q) + q)) / d
    else:
        raise ParameterError(f"variance defined for grr/ue_r, got {variant!r}")
    if not (0.0 <= gamma <= 1.0):
        raise ParameterError(f"inconsistent parameters: gamma={gamma} outside [0, 1]")
    return d * d * gamma * (1.0 - gamma) / (n * (p - q) ** 2)
