"""Single-attribute LDP frequency oracles.

Implements five randomizers over a categorical domain of size ``k`` --
generalized randomized response (GRR), local hashing with the optimal bucket
count (OLH), subset selection (SS), symmetric unary encoding (SUE, the basic
one-time RAPPOR parameterization) and optimized unary encoding (OUE) --
together with the shared unbiased frequency estimator

    f_hat(v) = (C(v) - n * q_eff) / (n * (p_eff - q_eff)),

where ``C(v)`` counts the sanitized reports that support value ``v``.

Every randomizer has two surfaces: a per-report API returning typed report
objects, and a vectorized batch API used by the Monte-Carlo harness.  The
scalar API is a thin wrapper over the batch one, so both follow the same law
by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, NonIdentifiableError, ParameterError
from .rng import draw_hash_seeds, hash_bucket

PROTOCOLS = ("grr", "olh", "ss", "sue", "oue")


@dataclass(frozen=True)
class AttributeDomain:
    """A named categorical attribute with labelled values indexed 0..k-1."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise DomainError(f"attribute {self.name!r} has an empty domain")
        if len(set(self.values)) != len(self.values):
            raise DomainError(f"attribute {self.name!r} has duplicate value labels")

    @property
    def k(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ProtocolParams:
    """Calibrated randomization probabilities for one protocol at (epsilon, k).

    ``p`` and ``q`` are the estimation-side pair used in the shared
    estimator.  For OLH that means ``p`` is the in-bucket keep probability
    p' and ``q`` collapses to 1/g; the bucket count g (or the subset size
    omega for SS) is carried in ``aux``.
    """

    protocol: str
    epsilon: float
    k: int
    p: float
    q: float
    aux: int | None = None

    def __post_init__(self):
        if not (0.0 < self.q < self.p <= 1.0):
            raise ParameterError(
                f"invalid probability pair p={self.p}, q={self.q} for {self.protocol}"
            )


@dataclass(frozen=True)
class ValueReport:
    """GRR output: a single (possibly flipped) value index."""

    index: int


@dataclass(frozen=True)
class HashedReport:
    """OLH output: the per-report hash seed and the perturbed bucket."""

    seed: int
    bucket: int


@dataclass(frozen=True)
class SubsetReport:
    """SS output: a sorted tuple of distinct value indices."""

    members: tuple[int, ...]


@dataclass(frozen=True)
class BitsReport:
    """SUE/OUE output: a length-k bit vector."""

    bits: tuple[int, ...]


SanitizedReport = Union[ValueReport, HashedReport, SubsetReport, BitsReport]

_REPORT_TYPES = {
    "grr": ValueReport,
    "olh": HashedReport,
    "ss": SubsetReport,
    "sue": BitsReport,
    "oue": BitsReport,
}


def protocol_params(protocol: str, epsilon: float, k: int) -> ProtocolParams:
    """Calibrate (p, q, aux) for one protocol at privacy budget epsilon.

    GRR:  p = e^eps / (e^eps + k - 1),      q = 1 / (e^eps + k - 1)
    OLH:  g = max(2, round(e^eps) + 1),     p = e^eps / (e^eps + g - 1),  q = 1/g
    SS:   omega = clip(round(k / (e^eps + 1)), 1, k - 1),
          p = omega e^eps / (omega e^eps + k - omega),
          q = (omega e^eps (omega-1) + (k-omega) omega)
              / ((k-1)(omega e^eps + k - omega))
    SUE:  p = e^(eps/2) / (e^(eps/2) + 1),  q = 1 / (e^(eps/2) + 1)
    OUE:  p = 1/2,                          q = 1 / (e^eps + 1)
    """
    protocol = protocol.lower()
    if protocol not in PROTOCOLS:
        raise ParameterError(f"unknown protocol {protocol!r}")
    if epsilon <= 0:
        raise ParameterError("epsilon must be > 0")
    if k < 2:
        raise DomainError(f"domain size k={k} is degenerate; randomization needs k >= 2")

    ee = math.exp(epsilon)
    if protocol == "grr":
        return ProtocolParams("grr", epsilon, k, ee / (ee + k - 1), 1.0 / (ee + k - 1))
    if protocol == "olh":
        g = max(2, round(ee) + 1)
        return ProtocolParams("olh", epsilon, k, ee / (ee + g - 1), 1.0 / g, aux=g)
    if protocol == "ss":
        omega = min(max(1, round(k / (ee + 1.0))), k - 1)
        p = omega * ee / (omega * ee + k - omega)
        q = (omega * ee * (omega - 1) + (k - omega) * omega) / (
            (k - 1) * (omega * ee + k - omega)
        )
        return ProtocolParams("ss", epsilon, k, p, q, aux=omega)
    if protocol == "sue":
        eh = math.exp(epsilon / 2.0)
        return ProtocolParams("sue", epsilon, k, eh / (eh + 1.0), 1.0 / (eh + 1.0))
    # oue
    return ProtocolParams("oue", epsilon, k, 0.5, 1.0 / (ee + 1.0))


# ---------------------------------------------------------------------------
# Batch randomization (the workhorse; the scalar API wraps this)
# ---------------------------------------------------------------------------

class ReportBatch:
    """Column-oriented container of n sanitized reports for one protocol.

    ``data`` layout by protocol:
      grr      -> int array (n,)
      olh      -> (uint64 seeds (n,), int buckets (n,))
      ss       -> int array (n, omega), rows sorted
      sue/oue  -> uint8 array (n, k)
    """

    def __init__(self, params: ProtocolParams, data):
        self.params = params
        self.data = data

    def __len__(self) -> int:
        if self.params.protocol == "olh":
            return len(self.data[0])
        return len(self.data)

    def reports(self) -> list[SanitizedReport]:
        """Materialize per-report objects (slow path, for the scalar API)."""
        proto = self.params.protocol
        if proto == "grr":
            return [ValueReport(int(v)) for v in self.data]
        if proto == "olh":
            seeds, buckets = self.data
            return [HashedReport(int(s), int(b)) for s, b in zip(seeds, buckets)]
        if proto == "ss":
            return [SubsetReport(tuple(int(v) for v in row)) for row in self.data]
        return [BitsReport(tuple(int(b) for b in row)) for row in self.data]


def _grr_perturb(values: np.ndarray, p: float, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(values)
    out = values.copy()
    flip = rng.random(n) >= p
    other = rng.integers(0, k - 1, size=n)
    repl = other + (other >= values)
    out[flip] = repl[flip]
    return out


def randomize_batch(
    values: Sequence[int] | np.ndarray, params: ProtocolParams, rng: np.random.Generator
) -> ReportBatch:
    """Sanitize a vector of value indices under ``params``."""
    values = np.asarray(values, dtype=np.int64)
    k = params.k
    if values.size and (values.min() < 0 or values.max() >= k):
        raise DomainError(f"value index out of domain [0, {k})")
    n = len(values)
    proto = params.protocol

    if proto == "grr":
        return ReportBatch(params, _grr_perturb(values, params.p, k, rng))

    if proto == "olh":
        g = params.aux
        seeds = draw_hash_seeds(rng, n)
        true_buckets = hash_bucket(seeds, values, g)
        buckets = _grr_perturb(np.asarray(true_buckets, dtype=np.int64), params.p, g, rng)
        return ReportBatch(params, (seeds, buckets))

    if proto == "ss":
        omega = params.aux
        include = rng.random(n) < params.p
        keys = rng.random((n, k))
        keys[np.arange(n), values] = np.inf  # true value is never drawn as an "other"
        order = np.argsort(keys, axis=1)
        out = np.empty((n, omega), dtype=np.int64)
        if omega > 1:
            out[include, 0] = values[include]
            out[include, 1:] = order[include, : omega - 1]
        else:
            out[include, 0] = values[include]
        out[~include, :] = order[~include, :omega]
        out.sort(axis=1)
        return ReportBatch(params, out)

    # sue / oue
    u = rng.random((n, k))
    thresh = np.full((n, k), params.q)
    thresh[np.arange(n), values] = params.p
    return ReportBatch(params, (u < thresh).astype(np.uint8))


def randomize(value_index: int, params: ProtocolParams, rng: np.random.Generator) -> SanitizedReport:
    """Sanitize a single value index; see :func:`randomize_batch`."""
    batch = randomize_batch(np.asarray([value_index]), params, rng)
    return batch.reports()[0]


# ---------------------------------------------------------------------------
# Support semantics and the shared estimator
# ---------------------------------------------------------------------------

def supports(report: SanitizedReport, candidate_index: int, params: ProtocolParams) -> bool:
    """Whether ``report`` counts toward candidate value ``candidate_index``."""
    expected = _REPORT_TYPES[params.protocol]
    if not isinstance(report, expected):
        raise ParameterError(
            f"report variant {type(report).__name__} does not match protocol {params.protocol}"
        )
    if not (0 <= candidate_index < params.k):
        raise DomainError(f"candidate {candidate_index} out of domain [0, {params.k})")
    if isinstance(report, ValueReport):
        return report.index == candidate_index
    if isinstance(report, HashedReport):
        return hash_bucket(report.seed, candidate_index, params.aux) == report.bucket
    if isinstance(report, SubsetReport):
        return candidate_index in report.members
    if len(report.bits) != params.k:
        raise ParameterError(
            f"bit vector of length {len(report.bits)} does not match k={params.k}"
        )
    return report.bits[candidate_index] == 1


def support_counts(batch: ReportBatch) -> np.ndarray:
    """C(v) for every domain value: how many reports support each value."""
    params = batch.params
    k = params.k
    proto = params.protocol
    if proto == "grr":
        return np.bincount(batch.data, minlength=k).astype(np.int64)
    if proto == "olh":
        seeds, buckets = batch.data
        counts = np.zeros(k, dtype=np.int64)
        # chunked so the (n, k) hash matrix stays small
        chunk = max(1, 4_000_000 // max(k, 1))
        cand = np.arange(k, dtype=np.uint64)
        for lo in range(0, len(buckets), chunk):
            s = seeds[lo : lo + chunk]
            b = buckets[lo : lo + chunk]
            h = hash_bucket(s[:, None], cand[None, :], params.aux)
            counts += (h == b[:, None]).sum(axis=0)
        return counts
    if proto == "ss":
        return np.bincount(batch.data.ravel(), minlength=k).astype(np.int64)
    return batch.data.sum(axis=0, dtype=np.int64)


def as_batch(reports: Sequence[SanitizedReport], params: ProtocolParams) -> ReportBatch:
    """Pack per-report objects into a column batch."""
    proto = params.protocol
    expected = _REPORT_TYPES[proto]
    for r in reports:
        if not isinstance(r, expected):
            raise ParameterError(
                f"report variant {type(r).__name__} does not match protocol {proto}"
            )
    if proto == "grr":
        return ReportBatch(params, np.asarray([r.index for r in reports], dtype=np.int64))
    if proto == "olh":
        seeds = np.asarray([r.seed for r in reports], dtype=np.uint64)
        buckets = np.asarray([r.bucket for r in reports], dtype=np.int64)
        return ReportBatch(params, (seeds, buckets))
    if proto == "ss":
        return ReportBatch(params, np.asarray([r.members for r in reports], dtype=np.int64))
    return ReportBatch(params, np.asarray([r.bits for r in reports], dtype=np.uint8))


def estimate_from_counts(counts: np.ndarray, n: int, params: ProtocolParams) -> np.ndarray:
    """Debias raw support counts into frequency estimates (may leave [0, 1])."""
    if n <= 0:
        raise ParameterError("n must be positive")
    denom = params.p - params.q
    if denom <= 0 or not np.isfinite(denom):
        raise NonIdentifiableError("p == q: estimator is non-identifiable (epsilon = 0 path)")
    return (np.asarray(counts, dtype=np.float64) - n * params.q) / (n * denom)


def estimate_frequencies(
    reports: ReportBatch | Sequence[SanitizedReport],
    params: ProtocolParams,
    clip: bool = False,
) -> np.ndarray:
    """Unbiased frequency estimates from sanitized reports.

    Raw estimates can be negative or exceed 1; set ``clip`` to project onto
    the probability simplex (clip into [0, 1], renormalize).  Attack code
    consumes the raw estimates, so clipping is off by default.
    """
    if not isinstance(reports, ReportBatch):
        reports = as_batch(reports, params)
    n = len(reports)
    est = estimate_from_counts(support_counts(reports), n, params)
    if clip:
        return clip_normalize(est, upper=1.0)
    return est


def clip_normalize(est: np.ndarray, upper: float | None = None) -> np.ndarray:
    """Clip into [0, upper] and renormalize to sum 1.

    The synthetic-profile pipeline clips negatives only (``upper=None``);
    the estimate post-processing flag also caps at 1.
    """
    out = np.clip(np.asarray(est, dtype=np.float64), 0.0, upper)
    total = out.sum()
    if total <= 0:
        raise ParameterError("all estimates clipped to zero; cannot normalize")
    return out / total


def pure_estimator_variance(f: float, params: ProtocolParams, n: int) -> float:
    """Sampling variance of the shared estimator for a value of frequency f."""
    gamma = params.q + f * (params.p - params.q)
    return gamma * (1.0 - gamma) / (n * (params.p - params.q) ** 2)
