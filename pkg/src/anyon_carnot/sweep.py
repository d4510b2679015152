"""Grid scans over cycle parameters and 1-D optimum refinement."""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .cycle import ConfigError, CycleConfig, CycleReport, run_cycle

PARAMS = ("t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d")
DEFAULT_CAP = 10**6


class SweepError(ValueError):
    pass


class SweepCapError(SweepError):
    pass


class Objective(enum.Enum):
    NONE = "none"
    MAX_WORK = "max_work"
    MAX_EFFICIENCY = "max_efficiency"


@dataclass(frozen=True)
class Range:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise SweepError(f"count must be an integer >= 1, got {self.count!r}")
        if not self.start <= self.stop:
            raise SweepError(f"start {self.start!r} exceeds stop {self.stop!r}")

    def values(self) -> list[float]:
        if self.count == 1:
            return [float(self.start)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]

    @classmethod
    def parse(cls, obj) -> "Range":
        """Accept ``[start, stop, count]``, ``{"start":..}`` or ``"start:stop:count"``."""
        if isinstance(obj, str):
            obj = obj.split(":")
            if len(obj) != 3:
                raise SweepError("range must look like start:stop:count")
            try:
                return cls(float(obj[0]), float(obj[1]), int(obj[2]))
            except ValueError as exc:
                raise SweepError(f"bad range: {exc}") from None
        if isinstance(obj, dict):
            obj = [obj.get("start"), obj.get("stop"), obj.get("count")]
        if not isinstance(obj, (list, tuple)) or len(obj) != 3:
            raise SweepError(f"bad range {obj!r}")
        start, stop, count = obj
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (start, stop)):
            raise SweepError(f"bad range bounds {obj!r}")
        return cls(float(start), float(stop), count)


@dataclass(frozen=True)
class SweepSpec:
    ranges: dict[str, Range]
    fixed: dict[str, float] = field(default_factory=dict)
    objective: Objective = Objective.NONE
    hbar_omega: float = 1.0
    k_b: float = 1.0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        for name in list(self.ranges) + list(self.fixed):
            if name not in PARAMS:
                raise SweepError(f"unknown parameter {name!r}")
        both = set(self.ranges) & set(self.fixed)
        if both:
            raise SweepError(f"{sorted(both)[0]} is both ranged and fixed")
        missing = [p for p in PARAMS if p not in self.ranges and p not in self.fixed]
        if missing:
            raise SweepError(f"{missing[0]} is neither ranged nor fixed")
        for name, r in self.ranges.items():
            if name.startswith("nu_") and not (0.0 <= r.start and r.stop <= 1.0):
                raise SweepError(f"{name} range must lie within [0, 1]")

    @property
    def grid_size(self) -> int:
        return math.prod(r.count for r in self.ranges.values())

    def axes(self) -> list[list[float]]:
        return [self.ranges[p].values() if p in self.ranges else [float(self.fixed[p])] for p in PARAMS]

    def configs(self) -> Iterator[CycleConfig | None]:
        """Grid points in row-major order; ``None`` marks an invalid point."""
        for point in itertools.product(*self.axes()):
            try:
                yield CycleConfig(*point, hbar_omega=self.hbar_omega, k_b=self.k_b)
            except ConfigError:
                yield None

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        if not isinstance(data, dict):
            raise SweepError("sweep spec must be a JSON object")
        extra = set(data) - {"ranges", "fixed", "objective", "hbar_omega", "k_b", "cap"}
        if extra:
            raise SweepError(f"unknown key {sorted(extra)[0]!r}")
        try:
            objective = Objective(data.get("objective", "none"))
        except ValueError:
            raise SweepError(f"unknown objective {data.get('objective')!r}") from None
        fixed = data.get("fixed", {})
        for k, v in fixed.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SweepError(f"fixed value for {k} must be a number")
        return cls(
            ranges={k: Range.parse(v) for k, v in data.get("ranges", {}).items()},
            fixed={k: float(v) for k, v in fixed.items()},
            objective=objective,
            hbar_omega=float(data.get("hbar_omega", 1.0)),
            k_b=float(data.get("k_b", 1.0)),
            cap=int(data.get("cap", DEFAULT_CAP)),
        )

    def to_dict(self) -> dict:
        return {
            "ranges": {k: [r.start, r.stop, r.count] for k, r in self.ranges.items()},
            "fixed": dict(self.fixed),
            "objective": self.objective.value,
            "hbar_omega": self.hbar_omega,
            "k_b": self.k_b,
            "cap": self.cap,
        }


@dataclass
class SweepResult:
    rows: list[CycleReport]
    skipped: int
    grid_size: int
    objective: Objective
    best: CycleReport | None = None


def _evaluate(config: CycleConfig | None) -> CycleReport | None:
    return None if config is None else run_cycle(config)


def iter_reports(spec: SweepSpec, workers: int | None = None) -> Iterator[CycleReport | None]:
    """Evaluate the grid in row-major order; ``None`` for skipped points.

    With ``workers > 1`` points are farmed out to a process pool; results
    still come back in grid order.
    """
    size = spec.grid_size
    if size > spec.cap:
        raise SweepCapError(f"grid has {size} points, cap is {spec.cap}")
    if workers is None or workers <= 1:
        yield from map(_evaluate, spec.configs())
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_evaluate, spec.configs(), chunksize=max(1, size // (8 * workers)))


def _score(report: CycleReport, objective: Objective) -> float | None:
    if objective is Objective.MAX_WORK:
        return report.work
    if objective is Objective.MAX_EFFICIENCY and report.positive_work and report.valid:
        return report.eta_qce
    return None


def select_best(rows: list[CycleReport], objective: Objective) -> CycleReport | None:
    best, best_score = None, -math.inf
    for row in rows:
        score = _score(row, objective)
        if score is not None and score > best_score:  # strict: first occurrence wins ties
            best, best_score = row, score
    return best


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    rows, skipped = [], 0
    for report in iter_reports(spec, workers):
        if report is None:
            skipped += 1
        else:
            rows.append(report)
    if not rows and not skipped:
        raise SweepError("empty grid")
    best = None if spec.objective is Objective.NONE else select_best(rows, spec.objective)
    return SweepResult(rows=rows, skipped=skipped, grid_size=spec.grid_size, objective=spec.objective, best=best)


@dataclass(frozen=True)
class Refinement:
    param: str
    report: CycleReport
    lo: float
    hi: float
    iterations: int

    @property
    def width(self) -> float:
        return self.hi - self.lo


def refine_optimum(spec: SweepSpec, iterations: int = 6, shrink: float = 4.0) -> Refinement:
    """Zoom a 1-D scan onto its best point.

    Each pass rescans ``[lo, hi]`` with the spec's point count, keeps the
    best row seen so far, and narrows the window by ``shrink`` around the
    current best, sliding it back inside the original range if needed.
    """
    if spec.objective is Objective.NONE:
        raise SweepError("refinement needs an objective")
    if len(spec.ranges) != 1:
        raise SweepError("refinement needs exactly one ranged parameter")
    if iterations < 0:
        raise SweepError("iterations must be >= 0")
    (param, base), = spec.ranges.items()
    lo, hi = base.start, base.stop
    best = None
    for _ in range(iterations):
        current = SweepSpec(
            ranges={param: Range(lo, hi, base.count)},
            fixed=spec.fixed,
            objective=spec.objective,
            hbar_omega=spec.hbar_omega,
            k_b=spec.k_b,
            cap=spec.cap,
        )
        found = run_sweep(current).best
        if found is None:
            break
        if best is None or _score(found, spec.objective) > _score(best, spec.objective):
            best = found
        centre = getattr(best.config, param)
        half = (hi - lo) / shrink / 2.0
        lo, hi = centre - half, centre + half
        if lo < base.start:
            lo, hi = base.start, base.start + 2.0 * half
        elif hi > base.stop:
            lo, hi = base.stop - 2.0 * half, base.stop
    if best is None:
        best = run_sweep(spec).best
        if best is None:
            raise SweepError("no admissible grid point for the objective")
    return Refinement(param=param, report=best, lo=lo, hi=hi, iterations=iterations)
