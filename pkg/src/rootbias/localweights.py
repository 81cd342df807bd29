"""Local non-archimedean weights and level constants.

The Rankin-Selberg weights wt(s; r, E/F), normalized by the maximal-compact
volume, the unramified local factor carrying the conductor exponent, and the
per-prime level constant assembling A(n, N). Volume normalizations (the
D_p^{-3/2} factors) are stripped here and restored once, globally, in the
bias assembly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basefield import BaseFieldDescriptor, RingElement, primes_above, validate_level
from .quadarith import factorize

__all__ = [
    "LocalWeightQuery",
    "rs_weight",
    "rs_weight_quotient",
    "unram_local_factor",
    "ramified_level_constant",
    "A_factor",
]


@dataclass(frozen=True)
class LocalWeightQuery:
    """Evaluation point of a Rankin-Selberg weight: residue norm q, lattice
    depth r, splitting type eta, and the complex argument s (Z = q^s)."""

    q: int
    r: int
    eta: int
    s: complex

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be a prime power >= 2")
        if self.r < 0:
            raise ValueError("r must be >= 0")
        if self.eta not in (-1, 0, 1):
            raise ValueError("eta must be -1, 0 or 1")


def _sym_sum(Z, m: int):
    """sum_{i=0..m} Z^(m-2i)  (= (Z^(m+1) - Z^-(m+1)) / (Z - 1/Z))."""
    if m < 0:
        return 0 * Z
    t = Z ** m
    total = t
    zi2 = 1 / (Z * Z)
    for _ in range(m):
        t = t * zi2
        total = total + t
    return total


def _rs_weight_core(Z, rq, r: int, eta: int):
    """q^{r/2} times the telescoped bracket, including the 1/L_p(1, eta)
    normalization; rq = sqrt(q)."""
    if r == 0:
        return 1
    q = rq * rq
    if eta == -1:  # unramified
        bracket = _sym_sum(Z, r) - (1 / q) * _sym_sum(Z, r - 2)
        lp_inv = 1 + 1 / q
    elif eta == 0:  # ramified
        bracket = _sym_sum(Z, r) - (1 / rq) * _sym_sum(Z, r - 1)
        lp_inv = 1
    else:  # split
        bracket = _sym_sum(Z, r) + (1 / q) * _sym_sum(Z, r - 2) - (2 / rq) * _sym_sum(Z, r - 1)
        lp_inv = 1 - 1 / q
    return rq ** r * bracket * lp_inv


def rs_weight(query: LocalWeightQuery):
    """wt(s; r, E/F) / Vol(GL2(o)), i.e. the displayed case formula divided
    by L_p(1, eta); telescoped form, valid at Z = +-1."""
    Z = query.q ** complex(query.s)
    out = _rs_weight_core(Z, query.q ** 0.5, query.r, query.eta)
    out = complex(out)
    return out.real if abs(out.imag) < 1e-13 * max(1.0, abs(out.real)) else out


def rs_weight_quotient(query: LocalWeightQuery):
    """Same quantity through the literal quotient formulas (denominator
    Z - 1/Z); diverges at Z = +-1, kept as the agreement check for the
    telescoped form."""
    q, r, eta = query.q, query.r, query.eta
    if r == 0:
        return 1.0
    Z = q ** complex(query.s)
    rq = q ** 0.5
    if eta == -1:
        A = Z - Z ** -1 / q
        lp_inv = 1 + 1 / q
    elif eta == 0:
        A = Z - 1 / rq
        lp_inv = 1.0
    else:
        A = Z + Z ** -1 / q - 2 / rq
        lp_inv = 1 - 1 / q
    # A' is A with Z -> 1/Z
    Zi = 1 / Z
    if eta == -1:
        Ap = Zi - Z / q
    elif eta == 0:
        Ap = Zi - 1 / rq
    else:
        Ap = Zi + Z / q - 2 / rq
    out = (A * (rq * Z) ** r - Ap * (rq * Zi) ** r) / (Z - Zi) * lp_inv
    out = complex(out)
    return out.real if abs(out.imag) < 1e-12 * max(1.0, abs(out.real)) else out


def _unram_core(y, rq, a: int, eta: int):
    """y^{-a} (U_a(y) - eta q^{-1/2} U_{a-1}(y)) with y = q^s."""
    if a == 0:
        return 1
    return y ** -a * (_sym_sum(y, a) - (eta / rq) * _sym_sum(y, a - 1))


def unram_local_factor(q: int, a: int, eta: int, s):
    """The local factor at an unramified prime with conductor exponent a:

        q^{-as} [(q^{(a+1)s} - q^{-(a+1)s}) - eta q^{-1/2} (q^{as} - q^{-as})]
        / (q^s - q^{-s})

    in telescoped form (finite at s = 0). The zeta_E and volume prefactors
    live in the global bias assembly.
    """
    if a < 0:
        raise ValueError("conductor exponent must be >= 0")
    y = q ** complex(s)
    out = complex(_unram_core(y, q ** 0.5, a, eta))
    return out.real if abs(out.imag) < 1e-13 * max(1.0, abs(out.real)) else out


def ramified_level_constant(q: int, n_div: bool) -> int:
    """The A(n, N) constituent at a level prime of residue norm q:
    q - 1 when n has the extra divisibility, otherwise -1."""
    return q - 1 if n_div else -1


def A_factor(F: BaseFieldDescriptor, n, N: int) -> int:
    """A(n, N) = prod over primes P | N of (Nr(P) - 1 if n in P, else -1)."""
    validate_level(F, N)
    if isinstance(n, int):
        n = RingElement(F, n, 0)
    total = 1
    for p in factorize(N):
        for P in primes_above(F, p):
            total *= ramified_level_constant(P.norm, P.divides(n))
    return total
