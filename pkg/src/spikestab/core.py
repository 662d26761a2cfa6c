"""Hypercube data types, perturbation samplers, Gaussian weight draws, and
the deterministic seeding contract shared by all modules.

All randomness flows through :class:`SeedSpec`: a master seed plus an ordered
tuple of integer stream labels.  Every (master_seed, labels) pair maps to its
own counter-based generator, so Monte Carlo trials can run in any order, or in
parallel, and still reproduce exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Stream label conventions used across the package.
STREAM_WEIGHTS = 0
STREAM_DATA = 1
STREAM_PERTURBATION = 2

_U64 = 2**64

IID_FLIP = "iid_flip"
FIXED_HAMMING = "fixed_hamming"


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus labeled substream indices.

    Identical (master_seed, labels) always yield identical draws, independent
    of thread count or call order.
    """

    master_seed: int
    labels: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < _U64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")

    def stream(self, *labels: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.labels + tuple(int(x) for x in labels))

    def rng(self, *labels: int) -> np.random.Generator:
        entropy = (int(self.master_seed),) + self.labels + tuple(int(x) for x in labels)
        return np.random.default_rng(np.random.SeedSequence(entropy))


def as_rng(seed) -> np.random.Generator:
    """Accept a SeedSpec, a Generator, or an int and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, SeedSpec):
        return seed.rng()
    return SeedSpec(int(seed)).rng()


def _validate_signs(coords: np.ndarray):
    if coords.ndim < 1 or coords.shape[-1] < 1:
        raise ValueError("dimension must be at least 1")
    if not np.all(np.abs(coords) == 1):
        raise ValueError("coordinates must be exactly -1 or +1")


@dataclass(frozen=True)
class HypercubePoint:
    """A point of {-1, +1}^n."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.int8)
        _validate_signs(c)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]


STATIC = "static"
DYNAMIC = "dynamic"


@dataclass(frozen=True)
class InputSequence:
    """A length-T sequence of hypercube points, stored as a (T, n) array."""

    steps: np.ndarray
    encoding: str = DYNAMIC

    def __post_init__(self):
        s = np.asarray(self.steps, dtype=np.int8)
        if s.ndim != 2:
            raise ValueError("steps must be a (T, n) array")
        _validate_signs(s)
        if self.encoding not in (STATIC, DYNAMIC):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.encoding == STATIC and not np.all(s == s[0]):
            raise ValueError("static encoding requires identical steps")
        s.setflags(write=False)
        object.__setattr__(self, "steps", s)

    @classmethod
    def static(cls, point, T: int) -> "InputSequence":
        coords = point.coords if isinstance(point, HypercubePoint) else np.asarray(point)
        return cls(np.tile(coords, (T, 1)), encoding=STATIC)

    @classmethod
    def dynamic(cls, steps) -> "InputSequence":
        return cls(np.asarray(steps), encoding=DYNAMIC)

    @property
    def T(self) -> int:
        return self.steps.shape[0]

    @property
    def n(self) -> int:
        return self.steps.shape[1]


@dataclass(frozen=True)
class PerturbationModel:
    """Input perturbation: i.i.d. coordinate flips or a fixed Hamming shell.

    per_step=None resolves by encoding: independent perturbations per time
    step for dynamic sequences, one shared perturbation for static ones.
    """

    kind: str
    nu: float | None = None
    h: int | None = None
    per_step: bool | None = None

    def __post_init__(self):
        if self.kind == IID_FLIP:
            if self.nu is None or not 0.0 <= self.nu <= 1.0:
                raise ValueError("iid_flip requires 0 <= nu <= 1")
        elif self.kind == FIXED_HAMMING:
            if self.h is None or self.h < 0:
                raise ValueError("fixed_hamming requires h >= 0")
        else:
            raise ValueError(f"unknown perturbation kind {self.kind!r}")

    @classmethod
    def iid_flip(cls, nu: float, per_step: bool | None = None) -> "PerturbationModel":
        return cls(IID_FLIP, nu=float(nu), per_step=per_step)

    @classmethod
    def fixed_hamming(cls, h: int, per_step: bool | None = None) -> "PerturbationModel":
        return cls(FIXED_HAMMING, h=int(h), per_step=per_step)

    def magnitude_label(self) -> float:
        return float(self.nu) if self.kind == IID_FLIP else float(self.h)


def hamming_distance(x, y) -> int:
    """|{i : x_i != y_i}| for two points of the same dimension."""
    cx = x.coords if isinstance(x, HypercubePoint) else np.asarray(x)
    cy = y.coords if isinstance(y, HypercubePoint) else np.asarray(y)
    if cx.shape != cy.shape:
        raise ValueError(f"dimension mismatch: {cx.shape} vs {cy.shape}")
    return int(np.count_nonzero(cx != cy))


def perturb_batch(coords: np.ndarray, model: PerturbationModel, rng, count: int) -> np.ndarray:
    """Draw `count` independent perturbations of one point; returns (count, n)."""
    rng = as_rng(rng)
    coords = np.asarray(coords, dtype=np.int8)
    n = coords.shape[0]
    out = np.tile(coords, (count, 1))
    if model.kind == IID_FLIP:
        flips = rng.random((count, n)) < model.nu
        out[flips] *= -1
    else:
        if model.h > n:
            raise ValueError(f"fixed_hamming h={model.h} exceeds dimension n={n}")
        if model.h > 0:
            # uniform h-subsets per row via random keys
            idx = np.argsort(rng.random((count, n)), axis=1)[:, : model.h]
            rows = np.repeat(np.arange(count), model.h)
            out[rows, idx.ravel()] *= -1
    return out


def perturb(x, model: PerturbationModel, seed) -> HypercubePoint:
    """Perturb a single hypercube point under the given model."""
    coords = x.coords if isinstance(x, HypercubePoint) else np.asarray(x)
    return HypercubePoint(perturb_batch(coords, model, seed, 1)[0])


def perturb_sequence(seq: InputSequence, model: PerturbationModel, seed) -> InputSequence:
    """Perturb an input sequence, per step or shared across steps."""
    rng = as_rng(seed)
    per_step = model.per_step
    if per_step is None:
        per_step = seq.encoding == DYNAMIC
    if per_step:
        rows = [perturb_batch(seq.steps[t], model, rng, 1)[0] for t in range(seq.T)]
        return InputSequence(np.stack(rows), encoding=DYNAMIC)
    base = perturb_batch(seq.steps[0], model, rng, 1)[0]
    if seq.encoding == STATIC:
        return InputSequence.static(base, seq.T)
    flipped = base != seq.steps[0]
    out = seq.steps.copy()
    out[:, flipped] *= -1
    return InputSequence(out, encoding=DYNAMIC)


def sample_uniform_batch(n: int, rng, count: int) -> np.ndarray:
    """`count` i.i.d. uniform points of {-1,+1}^n as a (count, n) int8 array."""
    rng = as_rng(rng)
    if n < 1:
        raise ValueError("n must be >= 1")
    return (rng.integers(0, 2, size=(count, n), dtype=np.int8) * 2 - 1).astype(np.int8)


def sample_uniform_point(n: int, seed) -> HypercubePoint:
    return HypercubePoint(sample_uniform_batch(n, seed, 1)[0])


def gaussian_weights(rows: int, cols: int, variance: float, seed) -> np.ndarray:
    """(rows, cols) matrix of i.i.d. N(0, variance) entries."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    if variance <= 0:
        raise ValueError("variance must be positive")
    rng = as_rng(seed)
    return rng.normal(0.0, np.sqrt(variance), size=(rows, cols))
