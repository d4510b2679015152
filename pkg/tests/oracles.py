"""Brute-force reference computations used by the test-suite.

Nothing here calls into the closed forms or the shell-summed series of the
package: levels are generated by plain quadruple loops and summed one by one.
"""

import functools
import math

import numpy as np


@functools.lru_cache(maxsize=None)
def quadruples(n_max):
    """All (j, k, l, m) >= 0 with j + k + 2l + 2m <= n_max."""
    out = []
    for j in range(n_max + 1):
        for k in range(n_max + 1 - j):
            for l in range((n_max - j - k) // 2 + 1):  # noqa: E741
                for m in range((n_max - j - k - 2 * l) // 2 + 1):
                    out.append((j, k, l, m))
    return tuple(out)


def count_with_excitation(n):
    return sum(1 for j, k, l, m in quadruples(n) if j + k + 2 * l + 2 * m == n)


def level_energies(nu, n_max):
    """Energies of both classes, one entry per level, for n <= n_max."""
    es = []
    for j, k, l, m in quadruples(n_max):
        n = j + k + 2 * l + 2 * m
        es.append((2 + nu + n, 4 - nu + n))
    return es


@functools.lru_cache(maxsize=None)
def _excitations(n_max):
    return np.array([j + k + 2 * l + 2 * m for j, k, l, m in quadruples(n_max)], dtype=float)


def brute_sums(nu, nu_prime, x, n_max):
    """(Z, <E_nu> under nu_prime populations, Shannon entropy of nu_prime populations).

    One array entry per level of each class; nothing is grouped by degeneracy.
    """
    n = _excitations(n_max)
    energies = np.concatenate([2 + nu + n, 4 - nu + n])
    weights = np.exp(-x * np.concatenate([2 + nu_prime + n, 4 - nu_prime + n]))
    z = math.fsum(weights)
    mean = math.fsum(weights * energies) / z
    p = weights[weights > 0] / z
    s = -math.fsum(p * np.log(p))
    return z, mean, s


def brute_cycle(t_h, t_c, nu_a, nu_b, nu_c, nu_d, n_max=110):
    """Q_in, Q_out and efficiency in natural units from explicit level sums."""
    bh, bc = 1 / t_h, 1 / t_c
    z_a, _, s_a = brute_sums(nu_a, nu_a, bh, n_max)
    z_b, e_b, s_b = brute_sums(nu_b, nu_b, bh, n_max)
    z_c, e_c, s_c = brute_sums(nu_c, nu_c, bc, n_max)
    z_d, e_d, s_d = brute_sums(nu_d, nu_d, bc, n_max)
    _, e_a, _ = brute_sums(nu_a, nu_a, bh, n_max)
    _, e_c_prime, _ = brute_sums(nu_c, nu_b, bh, n_max)
    _, e_a_prime, _ = brute_sums(nu_a, nu_d, bc, n_max)
    # heat booked through entropies, as in the cycle narrative
    q_in = t_h * (s_b - s_a) + e_a - e_a_prime
    q_out = t_c * (s_c - s_d) + e_c_prime - e_c
    return q_in, q_out, 1 - q_out / q_in
