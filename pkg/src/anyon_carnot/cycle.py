"""Modified quantum Carnot cycle with the two-anyon trap as working medium.

Stages (nu is the only control parameter, omega is fixed)::

    A --isotherm T_h--> B --adiabat--> C' --relax at T_c--> C
    C --isotherm T_c--> D --adiabat--> A' --relax at T_h--> A

The adiabats keep level populations, so the energy at a primed corner is
the cross mean energy E(nu_new, nu_old, beta_old).  Heat bookkeeping:

    Q_in  = k_B T_h ln(Z_B / Z_A) + <E_B> - <E_A'>
    Q_out = k_B T_c ln(Z_C / Z_D) - <E_D> + <E_C'>
"""

from __future__ import annotations

import math
from dataclasses import MISSING, asdict, dataclass, fields
from typing import Callable

from . import statmech
from .spectrum import DomainError
from .statmech import DEFAULT_TAIL_TOL, ThermalPoint

CARNOT_SLACK = 1e-12
ROUTES = ("closed", "series")


class ConfigError(DomainError):
    """Invalid cycle configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def classical_efficiency(t_h: float, t_c: float) -> float:
    if not t_c > 0:
        raise ConfigError("t_c", f"must be > 0, got {t_c!r}")
    if not t_h > t_c:
        raise ConfigError("t_c", f"must be below t_h={t_h!r}, got {t_c!r}")
    return 1.0 - t_c / t_h


@dataclass(frozen=True)
class CycleConfig:
    t_h: float
    t_c: float
    nu_a: float
    nu_b: float
    nu_c: float
    nu_d: float
    hbar_omega: float = 1.0
    k_b: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f.name, f"must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f.name, f"must be finite, got {value!r}")
            object.__setattr__(self, f.name, float(value))
        for name in ("hbar_omega", "k_b", "t_h", "t_c"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)!r}")
        if not self.t_h > self.t_c:
            raise ConfigError("t_c", f"must be below t_h={self.t_h!r}, got {self.t_c!r}")
        for name in ("nu_a", "nu_b", "nu_c", "nu_d"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(name, f"must lie in [0, 1], got {getattr(self, name)!r}")

    @property
    def beta_h(self) -> float:
        return 1.0 / (self.k_b * self.t_h)

    @property
    def beta_c(self) -> float:
        return 1.0 / (self.k_b * self.t_c)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "CycleConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown field")
        missing = [f.name for f in fields(cls) if f.default is MISSING and f.name not in data]
        if missing:
            raise ConfigError(missing[0], "missing")
        return cls(**data)


@dataclass(frozen=True)
class CycleReport:
    config: CycleConfig
    q_in: float
    q_out: float
    work: float
    eta_qce: float | None  # None when q_in <= 0
    eta_cce: float
    corners: dict[str, ThermalPoint]
    e_c_prime: float  # energy units
    e_a_prime: float
    positive_work: bool
    q_in_positive: bool
    eta_below_carnot: bool

    @property
    def valid(self) -> bool:
        return self.eta_qce is not None

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "positive_work": self.positive_work,
            "q_in_positive": self.q_in_positive,
            "eta_below_carnot": self.eta_below_carnot,
        }


# ---------------------------------------------------------------------------
# evaluation routes


@dataclass(frozen=True)
class _Route:
    log_z: Callable[[float, float], float]
    cross_energy: Callable[[float, float, float], float]
    entropy: Callable[[float, float], float]


def _closed_route(hbar_omega: float, tail_tol: float) -> _Route:
    return _Route(
        log_z=lambda nu, beta: statmech.log_partition_closed(nu, beta, hbar_omega),
        cross_energy=lambda nu, nup, beta: statmech.cross_mean_energy_closed(nu, nup, beta, hbar_omega),
        entropy=lambda nu, beta: statmech.entropy(nu, beta, hbar_omega),
    )


def _series_route(hbar_omega: float, tail_tol: float) -> _Route:
    kw = dict(tail_tol=tail_tol, hbar_omega=hbar_omega)
    return _Route(
        log_z=lambda nu, beta: math.log(statmech.partition_truncated(nu, beta, **kw).value),
        cross_energy=lambda nu, nup, beta: statmech.cross_mean_energy_truncated(nu, nup, beta, **kw).value,
        entropy=lambda nu, beta: statmech.entropy_truncated(nu, beta, **kw).value,
    )


def _route(config: CycleConfig, route: str, tail_tol: float) -> _Route:
    if route == "closed":
        return _closed_route(config.hbar_omega, tail_tol)
    if route == "series":
        return _series_route(config.hbar_omega, tail_tol)
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")


def heat_out(config: CycleConfig, route: str = "closed", tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Net heat delivered to the cold bath, k_B T_c ln(Z_C/Z_D) - <E_D> + <E_C'>."""
    r = _route(config, route, tail_tol)
    c, bh, bc = config, config.beta_h, config.beta_c
    return (
        c.k_b * c.t_c * (r.log_z(c.nu_c, bc) - r.log_z(c.nu_d, bc))
        - c.hbar_omega * r.cross_energy(c.nu_d, c.nu_d, bc)
        + c.hbar_omega * r.cross_energy(c.nu_c, c.nu_b, bh)
    )


def heat_in(config: CycleConfig, route: str = "closed", tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Net heat drawn from the hot bath, k_B T_h ln(Z_B/Z_A) + <E_B> - <E_A'>."""
    r = _route(config, route, tail_tol)
    c, bh, bc = config, config.beta_h, config.beta_c
    return (
        c.k_b * c.t_h * (r.log_z(c.nu_b, bh) - r.log_z(c.nu_a, bh))
        + c.hbar_omega * r.cross_energy(c.nu_b, c.nu_b, bh)
        - c.hbar_omega * r.cross_energy(c.nu_a, c.nu_d, bc)
    )


def heat_out_entropy_form(config: CycleConfig, route: str = "closed", tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Same heat as :func:`heat_out`, booked as T_c (S_C - S_D) + <E_C'> - <E_C>."""
    r = _route(config, route, tail_tol)
    c, bh, bc = config, config.beta_h, config.beta_c
    return c.k_b * c.t_c * (r.entropy(c.nu_c, bc) - r.entropy(c.nu_d, bc)) + c.hbar_omega * (
        r.cross_energy(c.nu_c, c.nu_b, bh) - r.cross_energy(c.nu_c, c.nu_c, bc)
    )


def heat_in_entropy_form(config: CycleConfig, route: str = "closed", tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Same heat as :func:`heat_in`, booked as T_h (S_B - S_A) + <E_A> - <E_A'>."""
    r = _route(config, route, tail_tol)
    c, bh, bc = config, config.beta_h, config.beta_c
    return c.k_b * c.t_h * (r.entropy(c.nu_b, bh) - r.entropy(c.nu_a, bh)) + c.hbar_omega * (
        r.cross_energy(c.nu_a, c.nu_a, bh) - r.cross_energy(c.nu_a, c.nu_d, bc)
    )


def run_cycle(config: CycleConfig, route: str = "closed", tail_tol: float = DEFAULT_TAIL_TOL) -> CycleReport:
    r = _route(config, route, tail_tol)
    c, bh, bc = config, config.beta_h, config.beta_c
    corners = {}
    for label, nu, beta in (("A", c.nu_a, bh), ("B", c.nu_b, bh), ("C", c.nu_c, bc), ("D", c.nu_d, bc)):
        log_z = r.log_z(nu, beta)
        e = r.cross_energy(nu, nu, beta)
        corners[label] = ThermalPoint(nu, beta, c.hbar_omega, log_z, e, r.entropy(nu, beta))
    e_c_prime = r.cross_energy(c.nu_c, c.nu_b, bh)
    e_a_prime = r.cross_energy(c.nu_a, c.nu_d, bc)
    A, B, C, D = (corners[k] for k in "ABCD")

    q_in = c.k_b * c.t_h * (B.log_z - A.log_z) + c.hbar_omega * B.mean_energy - c.hbar_omega * e_a_prime
    q_out = c.k_b * c.t_c * (C.log_z - D.log_z) - c.hbar_omega * D.mean_energy + c.hbar_omega * e_c_prime
    work = q_in - q_out
    eta_cce = classical_efficiency(c.t_h, c.t_c)
    eta_qce = 1.0 - q_out / q_in if q_in > 0 else None
    return CycleReport(
        config=c,
        q_in=q_in,
        q_out=q_out,
        work=work,
        eta_qce=eta_qce,
        eta_cce=eta_cce,
        corners=corners,
        e_c_prime=c.hbar_omega * e_c_prime,
        e_a_prime=c.hbar_omega * e_a_prime,
        positive_work=work > 0,
        q_in_positive=q_in > 0,
        eta_below_carnot=eta_qce is not None and eta_qce <= eta_cce + CARNOT_SLACK,
    )
