"""Finite verification of the simple-supercuspidal test-function identities.

Everything here happens over a p-adic field with odd prime residue field
F_q, q <= 13, at truncation level p^3: matrix entries are exact rationals
with explicit valuations, and all character sums are accumulated as integer
vectors in the basis of p-th roots of unity, so the oracle equalities are
exact rather than toleranced.

The objects: the affine generic character chi of Z*K', the test function
f^b supported on the antidiagonal coset (q^2-1 times a character value),
its Iwahori average f~^b with the closed two-case formula, the normalized
matrix coefficient, the Whittaker values of the distinguished vector, and
the Hecke integrals whose ratio is the local root number zeta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "CyclotomicInt",
    "SupercuspidalParams",
    "TruncatedPAdic",
    "affine_generic_char",
    "f_b",
    "f_b_tilde_closed",
    "f_b_tilde_bruteforce",
    "matrix_coeff_C0",
    "whittaker_closed",
    "whittaker_bruteforce",
    "hecke_root_number",
    "char_sum_check",
]

_SUPPORTED_Q = (3, 5, 7, 11, 13)


def _check_q(q: int) -> None:
    if q not in _SUPPORTED_Q:
        raise ValueError(f"residue cardinality must be an odd prime <= 13, got {q}")


class CyclotomicInt:
    """Element of Z[zeta_p] (Fraction coefficients allowed) stored on the
    redundant basis 1, zeta, ..., zeta^(p-1) and normalized by the single
    relation 1 + zeta + ... + zeta^(p-1) = 0 (last coordinate forced to 0).
    """

    __slots__ = ("p", "c")

    def __init__(self, p: int, coeffs=None):
        self.p = p
        if coeffs is None:
            coeffs = [0] * p
        c = [Fraction(x) for x in coeffs]
        if len(c) != p:
            raise ValueError("coefficient vector has wrong length")
        last = c[-1]
        self.c = tuple(x - last for x in c)

    @classmethod
    def zero(cls, p: int) -> "CyclotomicInt":
        return cls(p)

    @classmethod
    def root(cls, p: int, k: int, scale=1) -> "CyclotomicInt":
        co = [0] * p
        co[k % p] = scale
        return cls(p, co)

    @classmethod
    def integer(cls, p: int, n) -> "CyclotomicInt":
        return cls.root(p, 0, n)

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        assert self.p == other.p
        return CyclotomicInt(self.p, [a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        assert self.p == other.p
        return CyclotomicInt(self.p, [a - b for a, b in zip(self.c, other.c)])

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.p, [-a for a in self.c])

    def scale(self, t) -> "CyclotomicInt":
        t = Fraction(t)
        return CyclotomicInt(self.p, [a * t for a in self.c])

    def rotate(self, k: int) -> "CyclotomicInt":
        """Multiplication by zeta^k (cyclic shift on the redundant basis)."""
        k %= self.p
        return CyclotomicInt(self.p, self.c[-k:] + self.c[:-k] if k else self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicInt):
            return self.p == other.p and self.c == other.c
        return self.rational_value() == Fraction(other)

    def __hash__(self):
        return hash((self.p, self.c))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.c)

    def rational_value(self):
        """The element as a Fraction if it is rational, else None.

        In the normal form (last coordinate 0) an element is rational iff
        all coordinates beyond the first vanish.
        """
        if any(a != 0 for a in self.c[1:]):
            return None
        return self.c[0]

    def to_complex(self) -> complex:
        return sum(
            float(a) * np.exp(2j * np.pi * k / self.p) for k, a in enumerate(self.c)
        )

    def __repr__(self):
        r = self.rational_value()
        if r is not None:
            return f"Cyc({r})"
        return f"Cyc(p={self.p}, {[str(x) for x in self.c]})"


@dataclass(frozen=True)
class SupercuspidalParams:
    """Parameters (t, zeta) of a simple supercuspidal of PGL2 over a local
    field with residue cardinality q; the formal degree is (q^2-1)/2."""

    t: int
    zeta: int
    q: int

    def __post_init__(self):
        _check_q(self.q)
        if self.zeta not in (-1, 1):
            raise ValueError("zeta must be +-1")
        if self.t % self.q == 0:
            raise ValueError("t must be a unit of the residue field")

    @property
    def formal_degree(self) -> Fraction:
        return Fraction(self.q * self.q - 1, 2)


# ---------------------------------------------------------------------------
# Truncated p-adic scalars and 2x2 matrices.
#
# Scalars are exact rationals whose p-valuation is read off exactly; the
# truncation level m = 3 is the working precision contract: all membership
# tests used below are decidable at level 2, with one safety digit.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedPAdic:
    """A p-adic number at truncation level m, carried as an exact rational.

    val is the exact valuation (for nonzero x); digits is the unit-part
    expansion mod p^m, which is what every predicate below consumes.
    """

    p: int
    x: Fraction
    m: int = 3

    @property
    def val(self) -> int:
        return _val(self.x, self.p)

    @property
    def digits(self) -> int:
        if self.x == 0:
            return 0
        u = self.x / Fraction(self.p) ** self.val
        return _residue(u, self.p, self.p ** self.m)

    def additive_character(self) -> CyclotomicInt:
        """psi~(x) = psi(x/p) for x integral: depends only on x mod p."""
        if self.val < 0:
            raise ValueError("psi~ needs a p^2-th root of unity below O")
        return CyclotomicInt.root(self.p, _residue(self.x, self.p, self.p))


def _val(x: Fraction, p: int) -> int:
    if x == 0:
        return 10 ** 9  # stands in for +infinity at our truncation levels
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _residue(x: Fraction, p: int, mod: int) -> int:
    """x mod `mod` for x with nonnegative valuation (denominator prime to p)."""
    den = x.denominator
    if den % p == 0:
        raise ValueError("negative valuation has no residue")
    return (x.numerator * pow(den, -1, mod)) % mod


Mat = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _mat(a, b, c, d) -> Mat:
    return ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))


def _mul(A: Mat, B: Mat) -> Mat:
    return (
        (
            A[0][0] * B[0][0] + A[0][1] * B[1][0],
            A[0][0] * B[0][1] + A[0][1] * B[1][1],
        ),
        (
            A[1][0] * B[0][0] + A[1][1] * B[1][0],
            A[1][0] * B[0][1] + A[1][1] * B[1][1],
        ),
    )


def _g_chi(params: SupercuspidalParams) -> Mat:
    return _mat(0, params.t, params.q, 0)


def _g_chi_inv(params: SupercuspidalParams) -> Mat:
    return _mat(0, Fraction(1, params.q), Fraction(1, params.t), 0)


def _h_coords(M: Mat, p: int):
    """If M lies in Z * K', return (z, r1, r2) with M = z * k, k in K'
    normalized so its upper-left entry is 1; else None.

    K' has units 1 + p on the diagonal, integral upper-right, and lower-left
    in p*O; z can be any nonzero scalar.
    """
    z = M[0][0]
    if z == 0:
        return None
    v = _val(z, p)
    if _val(M[1][1], p) != v:
        return None
    if _val(M[0][1], p) < v or _val(M[1][0], p) < v + 1:
        return None
    x2 = M[1][1] / z
    if _val(x2 - 1, p) < 1:  # both diagonal ratios must sit in 1 + p
        return None
    r1 = M[0][1] / z
    r2 = M[1][0] / (z * p)
    return z, r1, r2


def _chi_value(params: SupercuspidalParams, M: Mat) -> CyclotomicInt | None:
    """chi(M) for M in Z*K' (None off the group): psi~(r1 + t r2)."""
    co = _h_coords(M, params.q)
    if co is None:
        return None
    _, r1, r2 = co
    arg = r1 + params.t * r2
    return CyclotomicInt.root(params.q, _residue(arg, params.q, params.q))


def affine_generic_char(
    params: SupercuspidalParams, z_scale, k: Mat
) -> CyclotomicInt:
    """chi(z k) = psi~(r1 + t r2) on Z * K'; rejects arguments off the group."""
    z = Fraction(z_scale)
    if z == 0:
        raise ValueError("central scale must be nonzero")
    M = _mul(_mat(z, 0, 0, z), k)
    val = _chi_value(params, M)
    if val is None:
        raise ValueError("argument is not in Z*K'")
    return val


def matrix_coeff_C0(g: Mat, params: SupercuspidalParams) -> CyclotomicInt:
    """Normalized matrix coefficient:
    chi(g) 1_H(g) + zeta chi(g_chi g) 1_H(g_chi g)."""
    p = params.q
    out = CyclotomicInt.zero(p)
    v = _chi_value(params, g)
    if v is not None:
        out = out + v
    v2 = _chi_value(params, _mul(_g_chi(params), g))
    if v2 is not None:
        out = out + v2.scale(params.zeta)
    return out


def _antidiag_coords(g: Mat, q: int):
    """Coordinates on the coset (0 1; p 0) Z I: returns (x1, r1, r2, x2)
    with g = (0 1; p 0) z (x1 r1; p r2 x2), normalized so x1 = 1 (the
    central z absorbs the original unit); None off the coset."""
    # (0 1; p 0)^-1 g = (g21/p, g22/p; g11, g12) must lie in Z * I
    h = _mat(g[1][0] / q, g[1][1] / q, g[0][0], g[0][1])
    z = h[0][0]
    if z == 0:
        return None
    v = _val(z, q)
    if _val(h[1][1], q) != v or _val(h[0][1], q) < v or _val(h[1][0], q) < v + 1:
        return None
    r1 = h[0][1] / z
    r2 = h[1][0] / (z * q)
    x2 = h[1][1] / z
    return Fraction(1), r1, r2, x2


def f_b(g: Mat, params: SupercuspidalParams) -> CyclotomicInt:
    """The projector test function: supported on (0 1; p 0) Z I, where it is
    (q^2 - 1) psi~(-(r1+r2)/x1)."""
    q = params.q
    co = _antidiag_coords(g, q)
    if co is None:
        return CyclotomicInt.zero(q)
    x1, r1, r2, _ = co
    arg = -(r1 + r2) / x1
    return CyclotomicInt.root(q, _residue(arg, q, q), q * q - 1)


def f_b_tilde_closed(g: Mat, q: int) -> CyclotomicInt:
    """Iwahori average of f_b, closed form: (q+1)(q-1) when r1 + r2 is in p,
    -(q+1) otherwise; 0 off the support coset."""
    _check_q(q)
    co = _antidiag_coords(g, q)
    if co is None:
        return CyclotomicInt.zero(q)
    _, r1, r2, _ = co
    if _residue(r1 + r2, q, q) == 0:
        return CyclotomicInt.integer(q, (q + 1) * (q - 1))
    return CyclotomicInt.integer(q, -(q + 1))


def coset_matrix(q: int, x1: int, r1: int, r2: int, x2: int = 1) -> Mat:
    """(0 1; p 0) (x1 r1; p r2 x2) as an integer matrix."""
    return _mat(q * r2, x2, q * x1, q * r1)


@lru_cache(maxsize=8)
def _iwahori_reps(p: int, full_S: bool):
    """Iwahori conjugators mod p^2 as arrays (a, b, c, d).

    full_S: a, d unit residues, b any residue, c in pZ/p^2 (the literal
    rep set). Otherwise a is normalized to 1: central scalings of k leave
    k^-1 g k untouched, so a transversal of Z\\I gives the same average at
    a fraction of the size.
    """
    p2 = p * p
    units = np.array([x for x in range(1, p2) if x % p], dtype=np.int64)
    a_axis = units if full_S else np.array([1], dtype=np.int64)
    b = np.arange(p2, dtype=np.int64)
    c = np.arange(0, p2, p, dtype=np.int64)
    A, B, C, D = np.meshgrid(a_axis, b, c, units, indexing="ij")
    return A.ravel(), B.ravel(), C.ravel(), D.ravel()


def f_b_tilde_bruteforce(g: Mat, q: int, full_S: bool = False) -> CyclotomicInt:
    """(1/#S) sum over Iwahori representatives k mod p^2 of f_b(k^-1 g k).

    Conjugation is computed as adj(k) G k where G is g divided by its
    central part (an integer matrix; central scalings move neither f_b nor
    the conjugation), and the character arguments are binned exactly, so
    the average is an exact element of Q(zeta_p). By default k runs over a
    transversal of the center; full_S=True forces the literal mod-p^2 rep
    set (same value, checked in the tests).
    """
    _check_q(q)
    if q > 7 and full_S:
        raise ValueError("the full rep set is sized for q <= 7")
    co = _antidiag_coords(g, q)
    if co is None:
        return CyclotomicInt.zero(q)
    x1f, r1f, r2f, x2f = co
    # integer representative of g / (central part), mod p^2 precision
    p2 = q * q
    x1 = _residue(x1f, q, p2)
    r1 = _residue(r1f, q, p2)
    r2 = _residue(r2f, q, p2)
    x2 = _residue(x2f, q, p2)
    a, b, c, d = _iwahori_reps(q, full_S)
    G11, G12, G21, G22 = q * r2 % p2, x2, q * x1 % p2, q * r1 % p2
    # M = adj(k) G k mod p^2
    ag11 = (d * G11 - b * G21) % p2
    ag12 = (d * G12 - b * G22) % p2
    ag21 = (a * G21 - c * G11) % p2
    ag22 = (a * G22 - c * G12) % p2
    M11 = (ag11 * a + ag12 * c) % p2
    M21 = (ag21 * a + ag22 * c) % p2
    M22 = (ag21 * b + ag22 * d) % p2
    num = (M11 + M22) % p2
    den = M21
    if (num % q).any() or (den % q).any():
        raise AssertionError("conjugation left the support coset")
    num //= q
    den //= q
    if (den % q == 0).any():
        raise AssertionError("degenerate coset coordinate")
    inv_table = np.array([0] + [pow(int(x), -1, q) for x in range(1, q)], dtype=np.int64)
    e = (-num * inv_table[den % q]) % q
    counts = np.bincount(e, minlength=q)
    size = e.size
    coeffs = [Fraction(int(counts[k]) * (q * q - 1), size) for k in range(q)]
    return CyclotomicInt(q, coeffs)


# ---------------------------------------------------------------------------
# Whittaker values and the Hecke integrals.
# ---------------------------------------------------------------------------


def _f0_zeta(M: Mat, params: SupercuspidalParams) -> CyclotomicInt:
    """f0^zeta = f0 + zeta * f0(g_chi^-1 .), with f0 = chi on H, 0 elsewhere."""
    q = params.q
    out = CyclotomicInt.zero(q)
    v = _chi_value(params, M)
    if v is not None:
        out = out + v
    v2 = _chi_value(params, _mul(_g_chi_inv(params), M))
    if v2 is not None:
        out = out + v2.scale(params.zeta)
    return out


_W_MATRIX = _mat(0, 1, -1, 0)


def whittaker_closed(a, side: str, params: SupercuspidalParams) -> CyclotomicInt:
    """Closed Whittaker values: 1_{1+p}(a) on the torus, and
    zeta 1_{1+p}(-a p / t) after the Weyl twist.

    The twisted support is the -t unit class: unwinding the defining
    integral (and the brute-force oracle confirms) puts it at
    -a p / t in 1 + p; the Hecke integral below is insensitive to which
    single unit class carries it.
    """
    q = params.q
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    if side == "plain":
        ok = _val(a - 1, q) >= 1
        return CyclotomicInt.integer(q, 1 if ok else 0)
    if side == "w":
        arg = -a * q / params.t
        ok = _val(arg - 1, q) >= 1
        return CyclotomicInt.integer(q, params.zeta if ok else 0)
    raise ValueError("side must be 'plain' or 'w'")


def whittaker_bruteforce(a, side: str, params: SupercuspidalParams) -> CyclotomicInt:
    """The defining integral int f0^zeta(n(x) diag(a,1) [w]) psi~(-x) dx as
    an exact finite sum over x in p^-1 O / p (vol(O) = 1).

    The integrand is locally constant at level p; representatives with
    negative valuation must annihilate f0^zeta (checked), since psi~(-x)
    would otherwise leave Z[zeta_p].
    """
    q = params.q
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    if side not in ("plain", "w"):
        raise ValueError("side must be 'plain' or 'w'")
    total = CyclotomicInt.zero(q)
    for c in range(q):
        for j in range(q):
            x = Fraction(c, q) + j
            M = _mat(a, x, 0, 1)
            if side == "w":
                M = _mul(M, _W_MATRIX)
            val = _f0_zeta(M, params)
            if val.is_zero():
                continue
            if c != 0:
                raise AssertionError(
                    "nonzero integrand at negative valuation: psi~ leaves Z[zeta_p]"
                )
            # psi~(-x) for integral x depends on x mod p only
            total = total + val.rotate(-j)
    return total.scale(Fraction(1, q))


def hecke_root_number(params: SupercuspidalParams, depth: int = 2) -> int:
    """Both Hecke integrals int W(diag(a,1) [w]) d*a as exact sums over
    a = u p^j, u in o^x/(1+p), |j| <= depth, with vol(1+p) = 1; their values
    must be 1 and zeta, and the returned ratio is the local root number.
    """
    q = params.q
    plain = CyclotomicInt.zero(q)
    twisted = CyclotomicInt.zero(q)
    for j in range(-depth, depth + 1):
        for u in range(1, q):
            a = Fraction(u) * Fraction(q) ** j
            plain = plain + whittaker_bruteforce(a, "plain", params)
            twisted = twisted + whittaker_bruteforce(a, "w", params)
    pv, tv = plain.rational_value(), twisted.rational_value()
    if pv != 1:
        raise ArithmeticError(f"plain Hecke integral is {pv}, expected 1")
    if tv not in (1, -1):
        raise ArithmeticError(f"twisted Hecke integral is {tv}, expected +-1")
    ratio = int(tv / pv)
    if ratio != params.zeta:
        raise ArithmeticError(
            f"root number {ratio} disagrees with the parameter zeta = {params.zeta}"
        )
    return ratio


def char_sum_check(q: int, c: int) -> CyclotomicInt:
    """sum over d in F_q^x of psi~(c/d); equals -1 for every c != 0."""
    _check_q(q)
    if c % q == 0:
        raise ValueError("c must be nonzero in the residue field")
    total = CyclotomicInt.zero(q)
    for d in range(1, q):
        total = total + CyclotomicInt.root(q, (c * pow(d, -1, q)) % q)
    return total
