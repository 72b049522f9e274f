"""Level-1 and level-2 distributions on the probability simplex.

A level-1 distribution is a categorical distribution over K outcomes, i.e. a
point on the K-simplex. A level-2 (second-order) distribution is a
probability distribution over level-1 distributions; it represents an
epistemic state, and the more concentrated it is, the more the predictor
claims to know about the true outcome distribution.

Supported second-order families: point masses (Dirac measures), Dirichlet
distributions, uniform distributions over an interval of binary success
probabilities, finite mixtures of any of these, and empirical ensembles of
member predictions.

All values are immutable after construction and safe to use from multiple
threads. Sampling never touches hidden state: callers pass a seeded
``numpy.random.Generator`` (PCG64 via ``numpy.random.default_rng(seed)`` is
the documented generator, so outputs are reproducible from a 64-bit seed).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyEnsemble,
    InvalidSpec,
    NegativeProbability,
    SumNotOne,
)

# Probability/weight vectors whose sum is off by at most this much are
# renormalized; anything worse is rejected. Post-construction sums hold to
# well under 1e-12.
RENORM_TOLERANCE = 1e-9

# Maximum nesting depth accepted by `validate` for raw mixture descriptions.
MAX_MIXTURE_DEPTH = 8


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


class Categorical:
    """A distribution over K >= 2 outcomes: non-negative entries summing to 1."""

    __slots__ = ("_probs",)

    def __init__(self, probs):
        arr = np.asarray(probs, dtype=float)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise DimensionMismatch(
                f"need a 1-d probability vector with K >= 2 outcomes, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidSpec("probability entries must be finite")
        if np.any(arr < 0.0):
            raise NegativeProbability(f"negative probability entry {float(arr.min())!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > RENORM_TOLERANCE:
            raise SumNotOne(f"probabilities sum to {total!r}, not 1")
        self._probs = _frozen(arr / total)

    @classmethod
    def _from_row(cls, row: np.ndarray) -> "Categorical":
        # Fast path for internally generated points already on the simplex.
        obj = object.__new__(cls)
        obj._probs = row
        return obj

    @property
    def probs(self) -> np.ndarray:
        """Read-only probability vector of length K."""
        return self._probs

    @property
    def k(self) -> int:
        return self._probs.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Categorical) and np.array_equal(self._probs, other._probs)

    def __repr__(self) -> str:
        return f"Categorical({self._probs.tolist()!r})"


def _check_sample_count(n: int) -> None:
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")


class SecondOrderDistribution:
    """Base class for probability distributions over the K-simplex."""

    kind: str = ""

    @property
    def k(self) -> int:
        raise NotImplementedError

    def predictive_mean(self) -> Categorical:
        """Exact mean of the level-1 parameter under this distribution.

        This is the marginal outcome distribution; no numerical integration
        is involved for any supported family.
        """
        raise NotImplementedError

    def sample_rows(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n level-1 parameters as an (n, K) array, deterministically in rng state."""
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> list[Categorical]:
        """Draw n independent level-1 distributions."""
        rows = self.sample_rows(n, rng)
        rows.flags.writeable = False
        return [Categorical._from_row(rows[i]) for i in range(rows.shape[0])]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(...)"


class PointMass(SecondOrderDistribution):
    """All second-order mass on a single level-1 distribution (a Dirac measure)."""

    kind = "point"
    __slots__ = ("theta",)

    def __init__(self, theta):
        self.theta = theta if isinstance(theta, Categorical) else Categorical(theta)

    @property
    def k(self) -> int:
        return self.theta.k

    def predictive_mean(self) -> Categorical:
        return self.theta

    def sample_rows(self, n: int, rng: np.random.Generator) -> np.ndarray:
        _check_sample_count(n)
        return np.tile(self.theta.probs, (n, 1))

    def __repr__(self) -> str:
        return f"PointMass({self.theta.probs.tolist()!r})"


class Dirichlet(SecondOrderDistribution):
    """Dirichlet distribution on the K-simplex with strictly positive concentrations."""

    kind = "dirichlet"
    __slots__ = ("alpha",)

    def __init__(self, alpha):
        arr = np.asarray(alpha, dtype=float)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise DimensionMismatch(
                f"need a 1-d concentration vector with K >= 2 entries, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise InvalidSpec("Dirichlet concentrations must be finite and strictly positive")
        self.alpha = _frozen(arr)

    @property
    def k(self) -> int:
        return self.alpha.shape[0]

    def predictive_mean(self) -> Categorical:
        return Categorical(self.alpha / self.alpha.sum())

    def sample_rows(self, n: int, rng: np.random.Generator) -> np.ndarray:
        _check_sample_count(n)
        # Independent Gamma draws, normalized per row.
        draws = rng.gamma(shape=self.alpha, size=(n, self.k))
        return draws / draws.sum(axis=1, keepdims=True)

    def __repr__(self) -> str:
        return f"Dirichlet({self.alpha.tolist()!r})"


class IntervalUniform(SecondOrderDistribution):
    """Uniform over the first-outcome probability on [lo, hi]; binary (K = 2) only.

    The point theta = (t, 1 - t) is drawn with t uniform on the interval.
    A degenerate interval (lo == hi) behaves like a point mass.
    """

    kind = "interval_uniform"
    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        lo, hi = float(lo), float(hi)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise InvalidSpec("interval endpoints must be finite")
        if not 0.0 <= lo <= hi <= 1.0:
            raise InvalidSpec(f"need 0 <= lo <= hi <= 1, got lo={lo!r}, hi={hi!r}")
        self.lo = lo
        self.hi = hi

    @property
    def k(self) -> int:
        return 2

    def predictive_mean(self) -> Categorical:
        mid = 0.5 * (self.lo + self.hi)
        return Categorical((mid, 1.0 - mid))

    def sample_rows(self, n: int, rng: np.random.Generator) -> np.ndarray:
        _check_sample_count(n)
        t = rng.uniform(self.lo, self.hi, size=n)
        return np.column_stack((t, 1.0 - t))

    def __repr__(self) -> str:
        return f"IntervalUniform({self.lo!r}, {self.hi!r})"


class FiniteMixture(SecondOrderDistribution):
    """Weighted mixture of second-order distributions over a shared K-simplex.

    Nested mixtures are spliced into the parent on construction (weights
    multiply through), so a constructed mixture never contains mixtures.
    """

    kind = "mixture"
    __slots__ = ("weights", "components")

    def __init__(self, weights, components: Iterable[SecondOrderDistribution]):
        components = tuple(components)
        if not components:
            raise InvalidSpec("mixture needs at least one component")
        for comp in components:
            if not isinstance(comp, SecondOrderDistribution):
                raise InvalidSpec(f"mixture component {comp!r} is not a distribution")
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.shape[0] != len(components):
            raise DimensionMismatch(
                f"{len(components)} components but {w.shape} weights"
            )
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise NegativeProbability("mixture weights must be finite and strictly positive")
        total = float(w.sum())
        if abs(total - 1.0) > RENORM_TOLERANCE:
            raise SumNotOne(f"mixture weights sum to {total!r}, not 1")
        w = w / total
        ks = {comp.k for comp in components}
        if len(ks) != 1:
            raise DimensionMismatch(f"mixture components must share K, got {sorted(ks)}")

        flat_w: list[float] = []
        flat_c: list[SecondOrderDistribution] = []
        for wi, comp in zip(w, components):
            if isinstance(comp, FiniteMixture):
                flat_w.extend(float(wi) * comp.weights)
                flat_c.extend(comp.components)
            else:
                flat_w.append(float(wi))
                flat_c.append(comp)
        self.weights = _frozen(flat_w)
        self.components = tuple(flat_c)

    @property
    def k(self) -> int:
        return self.components[0].k

    def predictive_mean(self) -> Categorical:
        mean = np.zeros(self.k)
        for wi, comp in zip(self.weights, self.components):
            mean += wi * comp.predictive_mean().probs
        return Categorical(mean)

    def sample_rows(self, n: int, rng: np.random.Generator) -> np.ndarray:
        _check_sample_count(n)
        idx = rng.choice(len(self.components), size=n, p=self.weights)
        out = np.empty((n, self.k))
        for i, comp in enumerate(self.components):
            mask = idx == i
            count = int(mask.sum())
            if count:
                out[mask] = comp.sample_rows(count, rng)
        return out

    def __repr__(self) -> str:
        return f"FiniteMixture({self.weights.tolist()!r}, {list(self.components)!r})"


class EmpiricalEnsemble(SecondOrderDistribution):
    """Uniformly weighted point masses at M >= 1 observed member predictions."""

    kind = "ensemble"
    __slots__ = ("members", "_matrix")

    def __init__(self, members: Iterable):
        members = tuple(
            m if isinstance(m, Categorical) else Categorical(m) for m in members
        )
        if not members:
            raise EmptyEnsemble("ensemble needs at least one member")
        ks = {m.k for m in members}
        if len(ks) != 1:
            raise DimensionMismatch(f"ensemble members must share K, got {sorted(ks)}")
        self.members = members
        self._matrix = _frozen(np.vstack([m.probs for m in members]))

    @property
    def member_matrix(self) -> np.ndarray:
        """Read-only (M, K) matrix of member predictions."""
        return self._matrix

    @property
    def k(self) -> int:
        return self._matrix.shape[1]

    @property
    def m(self) -> int:
        return self._matrix.shape[0]

    def predictive_mean(self) -> Categorical:
        return Categorical(self._matrix.mean(axis=0))

    def sample_rows(self, n: int, rng: np.random.Generator) -> np.ndarray:
        _check_sample_count(n)
        idx = rng.integers(0, self.m, size=n)
        return self._matrix[idx]

    def __repr__(self) -> str:
        return f"EmpiricalEnsemble(M={self.m}, K={self.k})"


def validate(spec) -> SecondOrderDistribution:
    """Build a validated, flattened distribution from a raw JSON-style mapping.

    The accepted shapes (``kind`` selects the family):

    - ``{"kind": "point", "theta": [...]}``
    - ``{"kind": "dirichlet", "alpha": [...]}``
    - ``{"kind": "interval_uniform", "lo": 0.3, "hi": 0.7}``
    - ``{"kind": "mixture", "weights": [...], "components": [ ... specs ... ]}``
    - ``{"kind": "ensemble", "members": [[...], [...]]}``

    Raises a `DistributionError` subclass naming the violated invariant.
    """
    return _build(spec, depth=1)


def _field(spec: dict, name: str, kind: str):
    try:
        return spec[name]
    except KeyError:
        raise InvalidSpec(f"{kind} spec is missing required field {name!r}") from None


def _build(spec, depth: int) -> SecondOrderDistribution:
    if not isinstance(spec, dict):
        raise InvalidSpec(f"distribution spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("kind")
    if kind == "point":
        return PointMass(_field(spec, "theta", kind))
    if kind == "dirichlet":
        return Dirichlet(_field(spec, "alpha", kind))
    if kind == "interval_uniform":
        lo, hi = _field(spec, "lo", kind), _field(spec, "hi", kind)
        try:
            return IntervalUniform(float(lo), float(hi))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidSpec):
                raise
            raise InvalidSpec(f"interval endpoints must be numbers, got {lo!r}, {hi!r}") from exc
    if kind == "mixture":
        if depth > MAX_MIXTURE_DEPTH:
            raise InvalidSpec(f"mixture nesting deeper than {MAX_MIXTURE_DEPTH}")
        components = _field(spec, "components", kind)
        if not isinstance(components, Sequence) or isinstance(components, (str, bytes)):
            raise InvalidSpec("mixture components must be a list of specs")
        built = [_build(c, depth + 1) for c in components]
        return FiniteMixture(_field(spec, "weights", kind), built)
    if kind == "ensemble":
        return EmpiricalEnsemble(_field(spec, "members", kind))
    raise InvalidSpec(f"unknown distribution kind {kind!r}")
