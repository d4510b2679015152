"""Thermal quantities of the two-anyon trap: closed forms and series oracles.

Every function takes the inverse temperature ``beta`` together with the
level spacing ``hbar_omega``; only the product x = beta*hbar_omega enters.
Energies come back in units of hbar*omega, entropies in units of k_B.

Closed forms
    Z(nu, x)       = cosh((1-nu)x) / (8 sinh^2(x/2) sinh^2(x))
    E(nu, nu', x)  = [(nu+2) cosh(x(nu'-2)) - (nu-4) cosh(x nu') + 2 cosh(x(1-nu'))]
                     / (2 sinh(x) cosh(x(1-nu')))

E(nu, nu', x) is the mean energy of the nu-spectrum when the level
populations are those of the Gibbs state of the nu'-spectrum, which is what
a population-preserving adiabatic stroke produces.

The ``*_truncated`` functions sum the Boltzmann series directly, level
shell by level shell, and never touch the closed forms.  They return a
:class:`SeriesEstimate` carrying a certified bound on the discarded tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .spectrum import (
    DomainError,
    LevelClass,
    LevelIndex,
    check_nu,
    degeneracy,
    energy,
)

LN2 = math.log(2.0)
DEFAULT_TAIL_TOL = 1e-12
MAX_SHELLS = 200_000


def reduced(beta: float, hbar_omega: float = 1.0) -> float:
    """Dimensionless inverse temperature x = beta*hbar_omega (> 0)."""
    beta = float(beta)
    if not beta > 0 or not math.isfinite(beta):
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")
    if not hbar_omega > 0:
        raise DomainError(f"hbar_omega must be > 0, got {hbar_omega!r}")
    return beta * hbar_omega


def log_cosh(y: float) -> float:
    y = abs(y)
    return y + math.log1p(math.exp(-2.0 * y)) - LN2


def log_sinh(y: float) -> float:
    """log(sinh(y)) for y > 0 without overflow."""
    return y + math.log(-math.expm1(-2.0 * y)) - LN2


# ---------------------------------------------------------------------------
# closed forms


def log_partition_closed(nu: float, beta: float, hbar_omega: float = 1.0) -> float:
    x = reduced(beta, hbar_omega)
    nu = float(check_nu(nu))
    return log_cosh((1.0 - nu) * x) - math.log(8.0) - 2.0 * log_sinh(0.5 * x) - 2.0 * log_sinh(x)


def partition_closed(nu: float, beta: float, hbar_omega: float = 1.0) -> float:
    """Closed-form partition function over both level classes.

    Evaluated as ``exp(log Z)``; for x beyond ~240 the result underflows to
    0.0 and :func:`log_partition_closed` should be used instead.
    """
    return math.exp(log_partition_closed(nu, beta, hbar_omega))


def _scaled_cosh(y: float, shift: float) -> float:
    # cosh(y) * exp(-shift), assuming shift >= |y|
    y = abs(y)
    return 0.5 * (math.exp(y - shift) + math.exp(-y - shift))


def cross_mean_energy_closed(nu: float, nu_prime: float, beta: float, hbar_omega: float = 1.0) -> float:
    """Mean energy of the ``nu`` spectrum under Gibbs populations of ``nu_prime``."""
    x = reduced(beta, hbar_omega)
    nu = float(check_nu(nu))
    nu_prime = float(check_nu(nu_prime, name="nu_prime"))
    a = 1.0 - nu_prime
    # Every cosh argument is bounded by x(1 + |a|); scaling by that keeps
    # the numerator and denominator finite for any x.
    shift = x * (1.0 + abs(a))
    num = (
        (nu + 2.0) * _scaled_cosh(x * (nu_prime - 2.0), shift)
        - (nu - 4.0) * _scaled_cosh(x * nu_prime, shift)
        + 2.0 * _scaled_cosh(x * a, shift)
    )
    den = 2.0 * (-0.5 * math.expm1(-2.0 * x)) * _scaled_cosh(x * a, abs(a) * x)
    return num / den


def mean_energy_closed(nu: float, beta: float, hbar_omega: float = 1.0) -> float:
    return cross_mean_energy_closed(nu, nu, beta, hbar_omega)


def entropy(nu: float, beta: float, hbar_omega: float = 1.0) -> float:
    """Gibbs entropy in units of k_B, S = x<E> + ln Z.

    Both terms grow like x*E0 at low temperature while S -> 0 or ln 2, so
    they are regrouped around the ground energy E0 = min(2+nu, 4-nu):

        ln Z + x E0 = log1p(e^{-x d}) - 2 log1p(-q) - 2 log1p(-q^2)
        <E> - E0    = d e^{-x d} / (1 + e^{-x d}) + 2q/(1-q) + 4q^2/(1-q^2)

    with q = e^{-x} and d = |2 - 2 nu| the gap between the class grounds.
    """
    x = reduced(beta, hbar_omega)
    nu = float(check_nu(nu))
    q = math.exp(-x)
    d = abs(2.0 - 2.0 * nu)
    s = math.exp(-x * d)
    shifted_log_z = math.log1p(s) - 2.0 * math.log1p(-q) - 2.0 * math.log1p(-q * q)
    excess_energy = d * s / (1.0 + s) + 2.0 * q / -math.expm1(-x) + 4.0 * q * q / -math.expm1(-2.0 * x)
    return x * excess_energy + shifted_log_z


def occupation(level: LevelIndex, nu: float, beta: float, hbar_omega: float = 1.0) -> float:
    """Gibbs probability of a single level."""
    x = reduced(beta, hbar_omega)
    return math.exp(-x * energy(level, nu) - log_partition_closed(nu, beta, hbar_omega))


@dataclass(frozen=True)
class ThermalPoint:
    """Equilibrium state at (nu, beta); energies in hbar*omega, entropy in k_B."""

    nu: float
    beta: float
    hbar_omega: float
    log_z: float
    mean_energy: float
    entropy: float

    @property
    def x(self) -> float:
        return self.beta * self.hbar_omega

    @property
    def z(self) -> float:
        return math.exp(self.log_z)


def thermal_point(nu: float, beta: float, hbar_omega: float = 1.0) -> ThermalPoint:
    log_z = log_partition_closed(nu, beta, hbar_omega)
    e = mean_energy_closed(nu, beta, hbar_omega)
    return ThermalPoint(
        nu=float(nu),
        beta=float(beta),
        hbar_omega=float(hbar_omega),
        log_z=log_z,
        mean_energy=e,
        entropy=beta * hbar_omega * e + log_z,
    )


# ---------------------------------------------------------------------------
# truncated series


class SeriesEstimate(NamedTuple):
    value: float
    tail_bound: float  # absolute bound on |exact - value|
    n_max: int

    @property
    def rel_bound(self) -> float:
        return self.tail_bound / abs(self.value) if self.value else math.inf


def _binom3(n: int) -> int:
    # C(n + 3, 3): quadruples (a, b, c, d) >= 0 with a + b + c + d = n
    return (n + 1) * (n + 2) * (n + 3) // 6


def _geometric_tail(first: float, ratio: float) -> float:
    return first / (1.0 - ratio) if ratio < 1.0 else math.inf


@dataclass
class _Shells:
    """Running shell sums for E(nu, nu', x) and S(nu', x) up to n_max.

    Boltzmann weights are kept relative to the ground level of the nu'
    spectrum, u = exp(-x (E' - E0')), so the sums never underflow and
    ln p = -x (E' - E0') - log1p(U - 1) stays accurate when p is near 1.

    Tail bounds.  Map (j, k, l, m) -> (j, k, 2l, 2m); it is injective into
    solutions of a + b + c + d = n, so degeneracy(n) <= C(n+3, 3).  Every
    level energy is at most 4 + n for nu in [0, 2].  With q = exp(-x) and
    w = u_I + u_II the shifted class-ground weights, the discarded parts obey

        U tail   <= w * sum_{n>N} C(n+3,3) q^n
        num tail <= w * sum_{n>N} (4+n) C(n+3,3) q^n
        exc tail <= w * sum_{n>N} (2+n) C(n+3,3) q^n

    where exc sums u (E' - E0') and the gap between class grounds is at
    most 2.  The term ratios q(n+4)/(n+1) and q(n+5)/(n+1) decrease in n,
    so each sum is bounded by its first term over (1 - ratio at n = N+1);
    (2+n) grows no faster than (4+n) relative to itself, so the second
    ratio also covers the third sum.
    """

    nu: float
    nu_prime: float
    x: float
    n_max: int = -1
    u: float = 0.0  # shifted partition sum
    num: float = 0.0  # shifted energy-weighted sum
    exc: float = 0.0  # shifted sum of u (E' - E0')

    def __post_init__(self):
        grounds = (2.0 + self.nu_prime, 4.0 - self.nu_prime)
        self.e0_prime = min(grounds)
        # (shifted ground weight, gap above e0_prime, ground energy in the nu spectrum)
        self._classes = [
            (math.exp(-self.x * (g - self.e0_prime)), g - self.e0_prime, e0)
            for g, e0 in zip(grounds, (2.0 + self.nu, 4.0 - self.nu))
        ]
        self._w0 = sum(c[0] for c in self._classes)
        self._q = math.exp(-self.x)
        self._u_terms: list[float] = []
        self._num_terms: list[float] = []
        self._exc_terms: list[float] = []
        self._levels: list[tuple[int, float, float]] = []  # (degeneracy, u, E' - E0')

    def add_shell(self):
        n = self.n_max + 1
        g = degeneracy(n)
        qn = self._q ** n
        for w, gap, e0 in self._classes:
            u = w * qn
            self._u_terms.append(g * u)
            self._num_terms.append(g * u * (e0 + n))
            self._exc_terms.append(g * u * (gap + n))
            self._levels.append((g, u, gap + n))
            self.u += g * u
            self.num += g * u * (e0 + n)
            self.exc += g * u * (gap + n)
        self.n_max = n

    def finalize(self) -> "_Shells":
        self.u = math.fsum(self._u_terms)
        self.num = math.fsum(self._num_terms)
        self.exc = math.fsum(self._exc_terms)
        return self

    def u_tail(self) -> float:
        n = self.n_max + 1
        first = self._w0 * _binom3(n) * self._q ** n
        return _geometric_tail(first, self._q * (n + 4) / (n + 1))

    def num_tail(self) -> float:
        n = self.n_max + 1
        first = self._w0 * (4 + n) * _binom3(n) * self._q ** n
        return _geometric_tail(first, self._q * (n + 5) / (n + 1))

    def exc_tail(self) -> float:
        n = self.n_max + 1
        first = self._w0 * (2 + n) * _binom3(n) * self._q ** n
        return _geometric_tail(first, self._q * (n + 5) / (n + 1))

    def entropy_bound(self) -> float:
        """Absolute bound on |S - S_N| via S = x exc/U + ln U."""
        tu = self.u_tail()
        if tu == 0.0:
            return 0.0
        rexc = self.exc_tail() / self.exc if self.exc > 0 else math.inf
        return self.x * (self.exc / self.u) * (rexc + tu / self.u) + tu / self.u

    def rel_bounds(self) -> tuple[float, float]:
        rz = self.u_tail() / self.u
        rnum = self.num_tail() / self.num if self.num > 0 else math.inf
        # |a/b - A/B| / (a/b) <= ta/a + tb/b for truncated a <= A, b <= B
        return rz, rz + rnum

    def log_u(self) -> float:
        # the ground level contributes exactly 1 to u; fsum rounds U - 1 once
        return math.log1p(math.fsum(self._u_terms + [-1.0]))

    def entropy(self) -> float:
        # Shannon form over the truncated, renormalised distribution
        log_u = self.log_u()
        terms = []
        for g, u, excitation in self._levels:
            p = u / self.u
            if p > 0.0:
                log_p = -self.x * excitation - log_u
                terms.append(-g * p * log_p)
        return math.fsum(terms)


def _run_shells(nu, nu_prime, beta, hbar_omega, n_max, tail_tol, entropy=False) -> _Shells:
    x = reduced(beta, hbar_omega)
    sh = _Shells(float(check_nu(nu)), float(check_nu(nu_prime, name="nu_prime")), x)
    if n_max is not None:
        if n_max < 0:
            raise DomainError(f"n_max must be non-negative, got {n_max}")
        for _ in range(n_max + 1):
            sh.add_shell()
        return sh.finalize()
    while sh.n_max < MAX_SHELLS:
        sh.add_shell()
        rz, re = sh.rel_bounds()
        if rz <= tail_tol and re <= tail_tol:
            if not entropy or sh.entropy_bound() <= tail_tol * sh.entropy():
                return sh.finalize()
    raise DomainError(f"series did not reach tail_tol={tail_tol} within {MAX_SHELLS} shells at x={x}")


def partition_truncated(
    nu: float,
    beta: float,
    n_max: int | None = None,
    *,
    tail_tol: float = DEFAULT_TAIL_TOL,
    hbar_omega: float = 1.0,
) -> SeriesEstimate:
    """Boltzmann sum over all levels with excitation ``n <= n_max``.

    With ``n_max=None`` the cutoff is chosen as the smallest one whose
    certified relative tail bound is below ``tail_tol``.
    """
    sh = _run_shells(nu, nu, beta, hbar_omega, n_max, tail_tol)
    scale = math.exp(-sh.x * sh.e0_prime)
    return SeriesEstimate(sh.u * scale, sh.u_tail() * scale, sh.n_max)


def cross_mean_energy_truncated(
    nu: float,
    nu_prime: float,
    beta: float,
    n_max: int | None = None,
    *,
    tail_tol: float = DEFAULT_TAIL_TOL,
    hbar_omega: float = 1.0,
) -> SeriesEstimate:
    sh = _run_shells(nu, nu_prime, beta, hbar_omega, n_max, tail_tol)
    value = sh.num / sh.u
    return SeriesEstimate(value, value * sh.rel_bounds()[1], sh.n_max)


def mean_energy_truncated(
    nu: float,
    beta: float,
    n_max: int | None = None,
    *,
    tail_tol: float = DEFAULT_TAIL_TOL,
    hbar_omega: float = 1.0,
) -> SeriesEstimate:
    return cross_mean_energy_truncated(nu, nu, beta, n_max, tail_tol=tail_tol, hbar_omega=hbar_omega)


def entropy_truncated(
    nu: float,
    beta: float,
    n_max: int | None = None,
    *,
    tail_tol: float = DEFAULT_TAIL_TOL,
    hbar_omega: float = 1.0,
) -> SeriesEstimate:
    """Shannon entropy -sum p ln p of the truncated Gibbs distribution.

    The bound follows from S = x (<E> - E0) + ln(Z e^{x E0}) on both sides:
    |dS| <= x <E - E0>_N (r_exc + r_U) + r_U.
    """
    sh = _run_shells(nu, nu, beta, hbar_omega, n_max, tail_tol, entropy=True)
    return SeriesEstimate(sh.entropy(), sh.entropy_bound(), sh.n_max)
