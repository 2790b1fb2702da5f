"""Kohonen map training: codebook, competition, neighborhood, epoch loop.

Training presents every table row to the map once per epoch. Each
presentation finds the best matching unit by Euclidean distance, then pulls
every neuron toward the row by ``theta(u, v, s) * alpha(s)``, where theta is
a Gaussian over hex-lattice distance whose radius shrinks linearly to zero
across the epochs before the last one. The final epoch is purely competitive:
only the winning neuron moves. Given the same table, grid and schedule the
result is bit-identical between runs and between kernel backends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .hexgrid import HexGrid, distance_matrix
from .ingest import AttributeSpec, NormalizedTable

DEFAULT_EPOCHS = 200
DEFAULT_SEED = 42


@dataclass(frozen=True)
class TrainingSchedule:
    """Epoch count, learning-rate ramp, neighborhood radius and RNG seed.

    ``sigma0`` is the starting neighborhood radius in lattice-hop units;
    ``None`` means "half the larger grid side", resolved against the grid at
    training time. ``alpha`` decays linearly from ``alpha0`` at the first
    presentation to ``alpha_end`` at the last.
    """

    epochs: int = DEFAULT_EPOCHS
    alpha0: float = 0.5
    alpha_end: float = 0.01
    sigma0: float | None = None
    shuffle: bool = True
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not (0.0 < self.alpha0 <= 1.0):
            raise ValueError(f"alpha0 must be in (0, 1], got {self.alpha0}")
        if not (0.0 < self.alpha_end <= self.alpha0):
            raise ValueError(
                f"alpha_end must be in (0, alpha0={self.alpha0}], got {self.alpha_end}"
            )
        if self.sigma0 is not None and not (self.sigma0 > 0.0):
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit an unsigned 64-bit integer")

    def resolved(self, grid: HexGrid) -> "TrainingSchedule":
        """Fill the grid-dependent sigma0 default."""
        if self.sigma0 is not None:
            return self
        return replace(self, sigma0=max(grid.width, grid.height) / 2.0)


@dataclass
class SomModel:
    """A trained (or freshly initialized) codebook plus its provenance."""

    grid: HexGrid
    dim: int
    weights: np.ndarray
    schema: tuple[AttributeSpec, ...] | None = None
    schedule: TrainingSchedule | None = None
    epochs_run: int = 0

    def __post_init__(self) -> None:
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.shape != (self.grid.n_nodes, self.dim):
            raise ValueError(
                f"weights shape {w.shape} does not match "
                f"{self.grid.n_nodes} neurons x {self.dim} attributes"
            )
        if w.size and (w.min() < 0.0 or w.max() > 1.0):
            raise ValueError("codebook weights must lie in [0, 1]")
        if self.schema is not None:
            self.schema = tuple(self.schema)
            if len(self.schema) != self.dim:
                raise ValueError("schema length does not match dim")
        self.weights = w

    @property
    def n_neurons(self) -> int:
        return self.grid.n_nodes


def init_codebook(grid: HexGrid, dim: int, seed: int) -> SomModel:
    """Random codebook, every weight i.i.d. uniform on [0, 1).

    The generator is numpy's PCG64 so identical (grid, dim, seed) give a
    bit-identical codebook on any platform.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    weights = rng.random((grid.n_nodes, dim))
    return SomModel(grid=grid, dim=dim, weights=weights)


def find_bmu(model: SomModel, x, mask=None) -> tuple[int, float]:
    """Best matching unit for ``x``: (neuron index, Euclidean distance).

    ``mask`` restricts the distance to a subset of attribute indices; ties
    break toward the lowest neuron index.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"input has shape {x.shape}, model expects ({model.dim},)")
    if mask is not None:
        mask = np.asarray(mask, dtype=np.intp)
        if mask.size == 0:
            raise ValueError("mask must name at least one attribute")
        if len(np.unique(mask)) != mask.size:
            raise ValueError("mask contains duplicate attribute indices")
        if mask.min() < 0 or mask.max() >= model.dim:
            raise ValueError("mask index out of range")
        mask = np.sort(mask)
    return kernels.bmu(model.weights, x, mask)


def learning_rate(s: int, schedule: TrainingSchedule, n_rows: int) -> float:
    """Learning rate at presentation ``s``; linear from alpha0 to alpha_end."""
    lam = schedule.epochs * n_rows
    if not (0 <= s < lam):
        raise ValueError(f"iteration {s} outside [0, {lam})")
    # Constant schedules must stay exactly constant (lerp would wobble by an
    # ulp mid-ramp, e.g. 0.7 + 0.3 != 1.0).
    if lam == 1 or schedule.alpha_end == schedule.alpha0:
        return schedule.alpha0
    t = s / (lam - 1)
    return schedule.alpha0 * (1.0 - t) + schedule.alpha_end * t


def neighborhood(
    grid: HexGrid, u: int, v: int, s: int, schedule: TrainingSchedule, n_rows: int
) -> float:
    """Cooperation factor theta(u, v, s) in [0, 1].

    Gaussian in hex distance with radius sigma(s) shrinking linearly to zero
    at the start of the final epoch; within the final epoch it degenerates to
    1 for v == u and 0 otherwise.
    """
    schedule = schedule.resolved(grid)
    lam = schedule.epochs * n_rows
    if not (0 <= s < lam):
        raise ValueError(f"iteration {s} outside [0, {lam})")
    d = grid.distance(u, v)
    competitive_start = (schedule.epochs - 1) * n_rows
    if s >= competitive_start:
        return 1.0 if u == v else 0.0
    sigma = schedule.sigma0 * (1.0 - s / competitive_start)
    return math.exp(-(d * d) / (2.0 * sigma * sigma))


def update_step(
    model: SomModel, x, s: int, schedule: TrainingSchedule, n_rows: int
) -> SomModel:
    """Apply one presentation of ``x`` at iteration ``s``, mutating the codebook.

    Every neuron v moves by ``theta(u, v, s) * alpha(s) * (x - w_v)`` with u
    the best matching unit, so the winner receives the largest pull and a
    unit coefficient copies ``x`` exactly.
    """
    # Copy: the kernel mutates the codebook while reading x, so the two must
    # never alias (e.g. when a caller passes a codebook row as the input).
    x = np.array(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"input has shape {x.shape}, model expects ({model.dim},)")
    schedule = schedule.resolved(model.grid)
    alpha = learning_rate(s, schedule, n_rows)
    competitive_start = (schedule.epochs - 1) * n_rows
    if s >= competitive_start:
        sigma, single_competitive = 0.0, 0
    else:
        sigma, single_competitive = schedule.sigma0 * (1.0 - s / competitive_start), 1
    kernels.train_loop(
        model.weights,
        x[None, :],
        np.zeros(1, dtype=np.int64),
        distance_matrix(model.grid),
        np.array([alpha]),
        np.array([sigma]),
        single_competitive,
    )
    return model


def train(
    table: NormalizedTable,
    grid: HexGrid,
    schedule: TrainingSchedule,
    initial_weights: np.ndarray | None = None,
) -> SomModel:
    """Train a map on a normalized table.

    Rows are presented in a per-epoch shuffled order derived from the
    schedule seed (file order when ``shuffle`` is off). ``initial_weights``
    overrides the seeded random codebook; tests use it to start from
    prepared states.
    """
    if table.n_rows == 0:
        raise ValueError("cannot train on an empty table")
    schedule = schedule.resolved(grid)
    dim = table.n_attrs
    n_rows = table.n_rows

    if initial_weights is None:
        weights = init_codebook(grid, dim, schedule.seed).weights
    else:
        weights = np.array(initial_weights, dtype=np.float64)
        if weights.shape != (grid.n_nodes, dim):
            raise ValueError(
                f"initial weights shape {weights.shape} does not match "
                f"{grid.n_nodes} neurons x {dim} attributes"
            )
        if weights.size and (weights.min() < 0.0 or weights.max() > 1.0):
            raise ValueError("initial weights must lie in [0, 1]")

    competitive_start = (schedule.epochs - 1) * n_rows
    kernels.train_loop(
        weights,
        np.ascontiguousarray(table.rows),
        _presentation_order(schedule, n_rows),
        distance_matrix(grid),
        _alpha_schedule(schedule, n_rows),
        _sigma_schedule(schedule, n_rows),
        competitive_start,
    )
    return SomModel(
        grid=grid,
        dim=dim,
        weights=weights,
        schema=table.schema,
        schedule=schedule,
        epochs_run=schedule.epochs,
    )


def quantization_error(model: SomModel, table: NormalizedTable) -> float:
    """Mean best-matching-unit distance over the table rows."""
    if table.n_rows == 0:
        raise ValueError("quantization error of an empty table is undefined")
    if table.n_attrs != model.dim:
        raise ValueError(f"table has {table.n_attrs} attributes, model expects {model.dim}")
    total = 0.0
    for row in table.rows:
        total += kernels.bmu(model.weights, row)[1]
    return total / table.n_rows


def _presentation_order(schedule: TrainingSchedule, n_rows: int) -> np.ndarray:
    if not schedule.shuffle:
        return np.tile(np.arange(n_rows, dtype=np.int64), schedule.epochs)
    # Spawn key 1 keeps the shuffle stream independent of the codebook stream.
    rng = np.random.default_rng(np.random.SeedSequence(schedule.seed, spawn_key=(1,)))
    chunks = [rng.permutation(n_rows) for _ in range(schedule.epochs)]
    return np.concatenate(chunks).astype(np.int64)


def _alpha_schedule(schedule: TrainingSchedule, n_rows: int) -> np.ndarray:
    lam = schedule.epochs * n_rows
    # Elementwise identical to learning_rate(), constant special case included.
    if lam == 1 or schedule.alpha_end == schedule.alpha0:
        return np.full(lam, schedule.alpha0)
    t = np.arange(lam, dtype=np.float64) / (lam - 1)
    return schedule.alpha0 * (1.0 - t) + schedule.alpha_end * t


def _sigma_schedule(schedule: TrainingSchedule, n_rows: int) -> np.ndarray:
    lam = schedule.epochs * n_rows
    competitive_start = (schedule.epochs - 1) * n_rows
    sigmas = np.zeros(lam, dtype=np.float64)
    if competitive_start > 0:
        s = np.arange(competitive_start, dtype=np.float64)
        sigmas[:competitive_start] = schedule.sigma0 * (1.0 - s / competitive_start)
    return sigmas
