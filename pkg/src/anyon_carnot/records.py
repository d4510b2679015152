"""Flat JSON / CSV records for cycle reports and sweeps.

Floats are written with 17 significant digits so that every double
round-trips exactly; undefined values (eta_qce when q_in <= 0) become
``null`` in JSON and ``nan`` in CSV.
"""

from __future__ import annotations

import json
import math

from .cycle import CycleConfig, CycleReport

CONFIG_KEYS = ("t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d")
CSV_HEADER = ("t_h", "t_c", "nu_a", "nu_b", "nu_c", "nu_d", "q_in", "q_out", "work", "eta_qce", "eta_cce", "valid")


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def report_record(report: CycleReport) -> dict:
    c = report.config
    rec = {k: getattr(c, k) for k in CONFIG_KEYS}
    rec.update(
        q_in=report.q_in,
        q_out=report.q_out,
        work=report.work,
        eta_qce=report.eta_qce,
        eta_cce=report.eta_cce,
        flags=report.flags,
    )
    return rec


def dumps(obj, indent: int | None = None, _level: int = 0) -> str:
    """json.dumps with floats pinned to 17 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def csv_header() -> str:
    return ",".join(CSV_HEADER)


def csv_row(report: CycleReport) -> str:
    c = report.config
    values = [fmt(getattr(c, k)) for k in CONFIG_KEYS]
    values += [fmt(report.q_in), fmt(report.q_out), fmt(report.work)]
    values.append(fmt(report.eta_qce) if report.eta_qce is not None else "nan")
    values += [fmt(report.eta_cce), "true" if report.valid else "false"]
    return ",".join(values)


def config_dumps(config: CycleConfig) -> str:
    return dumps(config.to_dict(), indent=2) + "\n"


def config_loads(text: str) -> CycleConfig:
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a flat JSON object")
    return CycleConfig.from_dict(data)
