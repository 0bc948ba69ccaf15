"""Synthetic contact trace generation from waypoint mobility.

Two generators share one contact-extraction path: plain random waypoint
(uniform destinations over the area) and a home-cell-biased variant where
each node draws its next destination from its home grid cell with a
configurable probability, emulating community clustering.

Positions are sampled every ``tick`` seconds; a contact is open while the
pairwise Euclidean distance is within the communication range and the
sampled state is held until the next sample.  Pause time at waypoints is
zero.  Generation is deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trace import ContactTrace

# The real-world traces this toolkit targets log contacts within a
# 10-meter wireless range; used as the default here as well.
DEFAULT_COMM_RANGE = 10.0


@dataclass(frozen=True)
class MobilityConfig:
    node_count: int
    width: float
    height: float
    v_min: float
    v_max: float
    duration: float
    comm_range: float = DEFAULT_COMM_RANGE
    tick: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError(f"node_count must be at least 1, got {self.node_count}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("area dimensions must be positive")
        if not 0 <= self.v_min <= self.v_max:
            raise ValueError(f"need 0 <= v_min <= v_max, got [{self.v_min}, {self.v_max}]")
        if self.comm_range <= 0:
            raise ValueError(f"comm_range must be positive, got {self.comm_range}")
        if self.tick <= 0:
            raise ValueError(f"tick must be positive, got {self.tick}")
        if self.duration < self.tick:
            raise ValueError(f"duration {self.duration} shorter than tick {self.tick}")


@dataclass(frozen=True)
class CommunityConfig(MobilityConfig):
    cell_rows: int = 1
    cell_cols: int = 1
    home_bias: float = 0.8

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.cell_rows < 1 or self.cell_cols < 1:
            raise ValueError("grid must have at least one cell")
        if not 0.0 <= self.home_bias <= 1.0:
            raise ValueError(f"home_bias must be in [0, 1], got {self.home_bias}")


def _sample_times(config: MobilityConfig) -> np.ndarray:
    steps = int(math.floor(config.duration / config.tick))
    return np.arange(steps + 1, dtype=np.float64) * config.tick


def _trajectory(
    rng: np.random.Generator,
    config: MobilityConfig,
    draw_waypoint,
    sample_times: np.ndarray,
) -> np.ndarray:
    """Sampled (x, y) positions of one node along its waypoint legs."""
    times = [0.0]
    xs: list[float] = []
    ys: list[float] = []
    x, y = draw_waypoint(rng)
    xs.append(x)
    ys.append(y)
    now = 0.0
    while now < config.duration:
        tx, ty = draw_waypoint(rng)
        speed = rng.uniform(config.v_min, config.v_max)
        leg = math.hypot(tx - x, ty - y)
        if leg == 0.0:
            continue
        if speed <= 0.0:
            break  # motionless node holds its position for the rest of the run
        now += leg / speed
        times.append(now)
        xs.append(tx)
        ys.append(ty)
        x, y = tx, ty
    # np.interp clamps beyond the last leg, which is exactly the hold behavior.
    sampled_x = np.interp(sample_times, times, xs)
    sampled_y = np.interp(sample_times, times, ys)
    return np.column_stack([sampled_x, sampled_y])


def _extract_contacts(
    positions: list[np.ndarray], config: MobilityConfig, sample_times: np.ndarray
) -> ContactTrace:
    """Per-pair range test over the sample grid, turned into merged intervals."""
    raw: list[tuple[int, int, float, float]] = []
    range_sq = config.comm_range**2
    for a in range(config.node_count):
        for b in range(a + 1, config.node_count):
            delta = positions[a] - positions[b]
            in_range = (delta[:, 0] ** 2 + delta[:, 1] ** 2) <= range_sq
            flags = np.concatenate(([False], in_range, [False]))
            edges = np.flatnonzero(np.diff(flags.astype(np.int8)))
            for lo, hi in zip(edges[::2], edges[1::2]):
                start = sample_times[lo]
                end = min(sample_times[hi - 1] + config.tick, config.duration)
                if start < end:
                    raw.append((a, b, float(start), float(end)))
    return ContactTrace.build(raw, horizon=config.duration)


def _uniform_area_waypoint(config: MobilityConfig):
    def draw(rng: np.random.Generator) -> tuple[float, float]:
        return rng.uniform(0.0, config.width), rng.uniform(0.0, config.height)

    return draw


def generate_waypoint(config: MobilityConfig) -> ContactTrace:
    """Random-waypoint trace: uniform destinations, uniform speeds, zero pause."""
    sample_times = _sample_times(config)
    streams = np.random.SeedSequence(config.seed).spawn(config.node_count)
    draw = _uniform_area_waypoint(config)
    positions = [
        _trajectory(np.random.default_rng(stream), config, draw, sample_times)
        for stream in streams
    ]
    return _extract_contacts(positions, config, sample_times)


def home_cells(config: CommunityConfig) -> tuple[int, ...]:
    """Deterministic home cell assignment (row-major cell index per node)."""
    rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(1)[0])
    cells = rng.integers(0, config.cell_rows * config.cell_cols, size=config.node_count)
    return tuple(int(c) for c in cells)


def _cell_bounds(config: CommunityConfig, cell: int) -> tuple[float, float, float, float]:
    row, col = divmod(cell, config.cell_cols)
    cell_w = config.width / config.cell_cols
    cell_h = config.height / config.cell_rows
    return col * cell_w, (col + 1) * cell_w, row * cell_h, (row + 1) * cell_h


def _home_biased_waypoint(config: CommunityConfig, cell: int):
    x0, x1, y0, y1 = _cell_bounds(config, cell)

    def draw(rng: np.random.Generator) -> tuple[float, float]:
        if rng.random() < config.home_bias:
            return rng.uniform(x0, x1), rng.uniform(y0, y1)
        return rng.uniform(0.0, config.width), rng.uniform(0.0, config.height)

    return draw


def generate_community(config: CommunityConfig) -> ContactTrace:
    """Home-cell-biased waypoint trace; ``home_bias=0`` degenerates to uniform."""
    sample_times = _sample_times(config)
    homes = home_cells(config)
    streams = np.random.SeedSequence(config.seed).spawn(config.node_count + 1)
    positions = [
        _trajectory(
            np.random.default_rng(streams[i + 1]),
            config,
            _home_biased_waypoint(config, homes[i]),
            sample_times,
        )
        for i in range(config.node_count)
    ]
    return _extract_contacts(positions, config, sample_times)


# Desk-scale defaults mirroring the synthetic scenarios the experiments target:
# a small dense area with fast movers, and a large sparse urban-like area with
# walking-speed nodes clustered around home cells.
DENSE_WAYPOINT = MobilityConfig(
    node_count=20, width=50.0, height=60.0, v_min=0.0, v_max=7.0, duration=32400.0
)
SPARSE_COMMUNITY = CommunityConfig(
    node_count=50,
    width=1500.0,
    height=2500.0,
    v_min=0.5,
    v_max=1.5,
    duration=32400.0,
    cell_rows=8,
    cell_cols=5,
    home_bias=0.9,
)
