"""Archimedean weight-k objects.

P_k(s) is the alternating sum of Gamma-quotients attached to weight 2k; it
equals the real-line integral of (x-i)^{-2k} (x^2+1)^{-s} and vanishes at
s = 0. The limit factor is the totally-negative-discriminant value
(4N)^k/(2pi) * Re (sqrt|Delta| + it)^{1-2k} entering each term of the bias.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.integrate import quad
from scipy.special import loggamma

__all__ = ["P_k", "p_k_quadrature", "ArchFactorInput", "arch_limit_factor"]


def _gamma_exact(two_x: int) -> tuple[Fraction, int]:
    """Gamma(two_x / 2) as (rational, power of sqrt(pi)); two_x > 0.

    Gamma(n) = (n-1)!, Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!).
    """
    if two_x <= 0:
        raise ValueError("Gamma pole")
    if two_x % 2 == 0:
        return Fraction(math.factorial(two_x // 2 - 1)), 0
    n = (two_x - 1) // 2
    return Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), 1


def _P_k_exact(k: int, two_s: int) -> float:
    """P_k at s = two_s/2 by exact rational Gamma arithmetic.

    Every term is (rational) * pi^(e/2) with the same e for all j, so the
    alternating sum is exact; in particular P_k(0) is exactly 0.0.
    """
    total = Fraction(0)
    pi_pow = None
    for j in range(k + 1):
        r1, e1 = _gamma_exact(two_s + 2 * k + 2 * j - 1)
        r2, e2 = _gamma_exact(2 * (k - j) + 1)
        r3, e3 = _gamma_exact(two_s + 4 * k)
        e = e1 + e2 - e3
        if pi_pow is None:
            pi_pow = e
        assert e == pi_pow
        total += (-1) ** j * math.comb(2 * k, 2 * j) * r1 * r2 / r3
    if total == 0:
        return 0.0
    return float(total) * math.pi ** (pi_pow / 2)


def P_k(k: int, s):
    """P_k(s) = sum_j (-1)^j C(2k,2j) Gamma(s+k+j-1/2) Gamma(k-j+1/2) / Gamma(s+2k).

    Exact rational evaluation when 2s is an integer (so P_k(0) is exactly 0);
    log-Gamma otherwise. Requires Re(s) > 1/2 - k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sc = complex(s)
    if sc.real <= 0.5 - k:
        raise ValueError(f"s = {s} is at or beyond the pole line Re(s) = 1/2 - k")
    if sc.imag == 0 and float(2 * sc.real).is_integer():
        return _P_k_exact(k, int(round(2 * sc.real)))
    total = 0j
    for j in range(k + 1):
        lg = (
            loggamma(sc + k + j - 0.5)
            + loggamma(k - j + 0.5)
            - loggamma(sc + 2 * k)
        )
        total += (-1) ** j * math.comb(2 * k, 2 * j) * cmath.exp(lg)
    if abs(total.imag) < 1e-14 * max(1.0, abs(total.real)) and complex(s).imag == 0:
        return total.real
    return total


def p_k_quadrature(k: int, s: float, tail_target: float = 1e-8) -> float:
    """Numeric oracle for P_k(s): integral of (x-i)^{-2k} (x^2+1)^{-s} over R.

    The integrand's odd (imaginary) part cancels, so twice the real part over
    [0, X] is used, with X chosen so the tail bound
    X^(1-2k-2s) / (2k+2s-1) stays below tail_target.
    """
    expo = 2 * k + 2 * s - 1
    X = (tail_target * expo) ** (-1.0 / expo)

    def integrand(x: float) -> float:
        return ((x + 1j) ** (2 * k)).real / (x * x + 1) ** (2 * k + s)

    val, _err = quad(integrand, 0.0, X, limit=400, epsabs=1e-12, epsrel=1e-12)
    return 2.0 * val


@dataclass(frozen=True)
class ArchFactorInput:
    """One archimedean place's data: weight parameter k, embeddings of uN and
    nuN, and the (totally negative here) discriminant embedding."""

    k: int
    N_emb: float
    t_emb: float
    delta_emb: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.delta_emb > 0:
            raise ValueError("positive discriminant embedding: not the elliptic branch")
        expected = self.t_emb ** 2 - 4.0 * self.N_emb
        scale = max(1.0, abs(expected), abs(self.delta_emb))
        if abs(self.delta_emb - expected) > 1e-12 * scale:
            raise ValueError("delta_emb != t_emb^2 - 4 N_emb")


def arch_limit_factor(inp: ArchFactorInput) -> float:
    """(4N)^k / (2pi) * Re (sqrt|Delta| + i t)^{1-2k}, in polar form.

    Modulus and argument are combined in log space so weights in the
    hundreds cannot overflow; with t = 0 the k-powers cancel exactly and the
    value collapses to sqrt(4N)/(2pi).
    """
    k = inp.k
    root = math.sqrt(-inp.delta_emb)
    modulus = math.hypot(root, inp.t_emb)
    theta = math.atan2(inp.t_emb, root)
    log_mag = k * math.log(4.0 * inp.N_emb) + (1 - 2 * k) * math.log(modulus)
    return math.exp(log_mag) * math.cos((2 * k - 1) * theta) / (2.0 * math.pi)
