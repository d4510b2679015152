"""Energy spectrum of two anyons in an isotropic 2D harmonic trap.

All energies are in units of hbar*omega.  A level is labelled by its class
(I: ground offset 2 + nu, II: ground offset 4 - nu) and four non-negative
quantum numbers (j, k) for the centre of mass and (l, m) for the relative
motion.  The energy only depends on the total excitation n = j + k + 2l + 2m.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

NU_MIN = 0.0
NU_MAX = 2.0


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


class LevelClass(enum.Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True, order=True)
class LevelIndex:
    cls: LevelClass
    j: int
    k: int
    l: int  # noqa: E741
    m: int

    def __post_init__(self):
        for name in ("j", "k", "l", "m"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise DomainError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def excitation(self) -> int:
        return self.j + self.k + 2 * self.l + 2 * self.m


def check_nu(nu: float, lo: float = NU_MIN, hi: float = NU_MAX, name: str = "nu") -> float:
    """Validate ``nu``; the numeric type is kept so exact rationals stay exact."""
    if not lo <= nu <= hi:
        raise DomainError(f"{name}={nu!r} outside [{lo:g}, {hi:g}]")
    return nu


def ground_energy(cls: LevelClass, nu: float) -> float:
    nu = check_nu(nu)
    return 2 + nu if cls is LevelClass.I else 4 - nu


def energy(level: LevelIndex, nu: float) -> float:
    """Energy of ``level`` at statistics parameter ``nu``, in units of hbar*omega."""
    return ground_energy(level.cls, nu) + level.excitation


def degeneracy(n: int) -> int:
    """Number of quadruples (j, k, l, m) >= 0 with j + k + 2l + 2m = n."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    # t = l + m has t + 1 splittings; j + k = n - 2t has n - 2t + 1.
    return sum((t + 1) * (n - 2 * t + 1) for t in range(n // 2 + 1))


def _quadruples(n: int) -> Iterator[tuple[int, int, int, int]]:
    # lexicographic in (j, k, l, m)
    for j in range(n + 1):
        for k in range(n - j + 1):
            rest = n - j - k
            if rest % 2:
                continue
            t = rest // 2
            for l in range(t + 1):  # noqa: E741
                yield j, k, l, t - l


def levels_by_excitation(n_max: int) -> list[LevelIndex]:
    """All levels of both classes with total excitation ``n <= n_max``.

    Ordered by class, then ``n``, then lexicographically in (j, k, l, m).
    """
    if n_max < 0:
        return []
    out = []
    for cls in LevelClass:
        for n in range(n_max + 1):
            out.extend(LevelIndex(cls, *q) for q in _quadruples(n))
    return out


def enumerate_levels(nu: float, e_max: float) -> list[LevelIndex]:
    """Every level with ``energy(level, nu) <= e_max``, in deterministic order."""
    nu = check_nu(nu)
    if e_max < 0:
        raise DomainError(f"e_max must be non-negative, got {e_max}")
    out = []
    for cls in LevelClass:
        e0 = ground_energy(cls, nu)
        n = 0
        # same arithmetic as energy() so the cutoff is applied consistently
        while e0 + n <= e_max:
            out.extend(LevelIndex(cls, *q) for q in _quadruples(n))
            n += 1
    return out
