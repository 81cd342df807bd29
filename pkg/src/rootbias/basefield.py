"""The three supported totally real base fields: Q, Q(sqrt2), Q(sqrt5).

Ring-of-integers elements with exact embedding signs, prime splitting,
Euler's totient over F, local square-class arithmetic at the even prime,
and special values L(1, eta) for biquadratic extensions E = F(sqrt(-N)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quadarith import (
    class_number_imag,
    dirichlet_L1,
    factorize,
    fundamental_disc_of_sqrt,
    squarefree_kernel,
)

__all__ = [
    "BaseFieldDescriptor",
    "RingElement",
    "PrimeIdeal",
    "BiquadExtData",
    "RelDiscriminant",
    "Q",
    "QSQRT2",
    "QSQRT5",
    "FIELDS",
    "field_by_tag",
    "primes_above",
    "split_type",
    "euler_phi_F",
    "enumerate_units_U2",
    "classify_delta_at",
    "is_local_square",
    "quad_ext_local_data",
    "rel_discriminant",
    "L1_eta_biquad",
    "l1_eta_chi_product",
    "is_square_in_F",
    "validate_level",
]


@dataclass(frozen=True)
class BaseFieldDescriptor:
    """One of Q, Q(sqrt2), Q(sqrt5) with its arithmetic constants.

    The ring generator g satisfies g^2 = gen_c1 + gen_c0 * g, so g = sqrt(2)
    (c1=2, c0=0) or g = (1+sqrt5)/2 (c1=1, c0=1). All three fields have
    narrow class number one, hence U2 = {1} and the auxiliary ideal of the
    general bias formula is the full ring of integers.
    """

    tag: str
    degree: int
    disc: int
    gen_name: str | None
    gen_c1: int
    gen_c0: int
    squarefree_base: int  # m0 with F = Q(sqrt m0); 1 for Q
    fundamental_unit_norm: int | None
    narrow_class_number: int = 1

    def gen_embeddings(self) -> tuple[float, ...]:
        if self.degree == 1:
            return (0.0,)
        if self.gen_c0 == 0:
            r = math.sqrt(self.gen_c1)
            return (r, -r)
        # x^2 = c1 + c0 x
        disc = math.sqrt(self.gen_c0 ** 2 + 4 * self.gen_c1)
        return ((self.gen_c0 + disc) / 2, (self.gen_c0 - disc) / 2)

    def one(self) -> "RingElement":
        return RingElement(self, 1, 0)

    def zero(self) -> "RingElement":
        return RingElement(self, 0, 0)

    def element(self, a: int, b: int = 0) -> "RingElement":
        return RingElement(self, a, b)

    def __repr__(self) -> str:
        return f"BaseField({self.tag})"


Q = BaseFieldDescriptor("Q", 1, 1, None, 0, 0, 1, None)
QSQRT2 = BaseFieldDescriptor("Qsqrt2", 2, 8, "sqrt2", 2, 0, 2, -1)
QSQRT5 = BaseFieldDescriptor("Qsqrt5", 2, 5, "omega", 1, 1, 5, -1)

FIELDS = {F.tag: F for F in (Q, QSQRT2, QSQRT5)}


def field_by_tag(tag: str) -> BaseFieldDescriptor:
    try:
        return FIELDS[tag]
    except KeyError:
        raise ValueError(f"unsupported field tag {tag!r}; use one of {sorted(FIELDS)}")


def _sign_a_plus_b_sqrt(a: int, b: int, m: int) -> int:
    """Exact sign of a + b*sqrt(m), m > 0 non-square."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 with m b^2
    lhs, rhs = a * a, m * b * b
    if lhs == rhs:
        return 0
    return (1 if lhs > rhs else -1) * ((a > 0) - (a < 0))


@dataclass(frozen=True)
class RingElement:
    """a + b*g in the ring of integers of F (b = 0 over Q)."""

    field: BaseFieldDescriptor
    a: int
    b: int = 0

    def __post_init__(self):
        if self.field.degree == 1 and self.b != 0:
            raise ValueError("Q has no irrational integers")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def norm(self) -> int:
        F = self.field
        if F.degree == 1:
            return self.a
        # Nr(a + bg) = a^2 + c0 ab - c1 b^2
        return self.a * self.a + F.gen_c0 * self.a * self.b - F.gen_c1 * self.b * self.b

    def trace(self) -> int:
        if self.field.degree == 1:
            return self.a
        return 2 * self.a + self.field.gen_c0 * self.b

    def embeddings(self) -> tuple[float, ...]:
        gs = self.field.gen_embeddings()
        return tuple(self.a + self.b * g for g in gs)

    def embedding_signs(self) -> tuple[int, ...]:
        """Exact signs of the real embeddings (no floating point)."""
        F = self.field
        if F.degree == 1:
            s = (self.a > 0) - (self.a < 0)
            return (s,)
        if F.gen_c0 == 0:  # g = sqrt(2)
            return (
                _sign_a_plus_b_sqrt(self.a, self.b, F.gen_c1),
                _sign_a_plus_b_sqrt(self.a, -self.b, F.gen_c1),
            )
        # g = (1+sqrt5)/2: 2(a + bg) = (2a+b) + b sqrt5
        return (
            _sign_a_plus_b_sqrt(2 * self.a + self.b, self.b, 5),
            _sign_a_plus_b_sqrt(2 * self.a + self.b, -self.b, 5),
        )

    def is_totally_negative(self) -> bool:
        return all(s < 0 for s in self.embedding_signs())

    def is_totally_positive(self) -> bool:
        return all(s > 0 for s in self.embedding_signs())

    def __mul__(self, other: "RingElement") -> "RingElement":
        F = self.field
        if F is not other.field:
            raise ValueError("mixed fields")
        # (a1 + b1 g)(a2 + b2 g), g^2 = c1 + c0 g
        a = self.a * other.a + F.gen_c1 * self.b * other.b
        b = self.a * other.b + self.b * other.a + F.gen_c0 * self.b * other.b
        return RingElement(F, a, b)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        g = self.field.gen_name
        return f"{self.a}+{self.b}*{g}" if self.b >= 0 else f"{self.a}{self.b}*{g}"


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of o_F above the rational prime p.

    kind is 'split', 'inert' or 'ramified' ('rational' over Q); for f = 1
    primes, root is the image of the ring generator in the residue field
    F_p, giving the residue map a + b*g -> a + b*root mod p.
    """

    field: BaseFieldDescriptor
    p: int
    e: int
    f: int
    kind: str
    index: int = 0  # distinguishes the two primes above a split p
    root: int | None = None

    @property
    def norm(self) -> int:
        return self.p ** self.f

    def label(self) -> str:
        if self.kind == "split":
            return f"p{self.p}_{self.index}"
        return f"p{self.p}"

    def ord_rational(self, x) -> int:
        """ord_P of a nonzero rational number."""
        x = Fraction(x)
        v = 0
        num, den = x.numerator, x.denominator
        while num % self.p == 0:
            num //= self.p
            v += 1
        while den % self.p == 0:
            den //= self.p
            v -= 1
        return self.e * v

    def divides(self, n) -> bool:
        """Whether n (integer or RingElement) lies in this prime ideal."""
        if isinstance(n, RingElement):
            if n.is_zero():
                return True
            if self.f == 2:
                return n.a % self.p == 0 and n.b % self.p == 0
            r = 0 if self.root is None else self.root
            return (n.a + n.b * r) % self.p == 0
        return n % self.p == 0


def _sqrt_mod_p(n: int, p: int) -> int | None:
    n %= p
    for x in range((p + 1) // 2 + 1):
        if (x * x - n) % p == 0:
            return x
    return None


@lru_cache(maxsize=None)
def primes_above(F: BaseFieldDescriptor, p: int) -> tuple[PrimeIdeal, ...]:
    if F.degree == 1:
        return (PrimeIdeal(F, p, 1, 1, "rational"),)
    if F is QSQRT2:
        if p == 2:
            return (PrimeIdeal(F, 2, 2, 1, "ramified", root=0),)  # sqrt2 = 0 mod p2
        if p % 8 in (1, 7):
            r = _sqrt_mod_p(2, p)
            assert r is not None
            return (
                PrimeIdeal(F, p, 1, 1, "split", 0, r),
                PrimeIdeal(F, p, 1, 1, "split", 1, (p - r) % p),
            )
        return (PrimeIdeal(F, p, 1, 2, "inert"),)
    if F is QSQRT5:
        if p == 5:
            # omega = (1+sqrt5)/2 = 3 mod sqrt5
            return (PrimeIdeal(F, 5, 2, 1, "ramified", root=3),)
        if p % 5 in (1, 4):
            # root of x^2 - x - 1 mod p
            for r in range(p):
                if (r * r - r - 1) % p == 0:
                    return (
                        PrimeIdeal(F, p, 1, 1, "split", 0, r),
                        PrimeIdeal(F, p, 1, 1, "split", 1, (1 - r) % p),
                    )
            raise AssertionError("split prime without a root")
        return (PrimeIdeal(F, p, 1, 2, "inert"),)
    raise ValueError(f"unsupported field {F.tag}")


def split_type(F: BaseFieldDescriptor, p: int) -> list[tuple[int, int]]:
    """Factorization shape of p in o_F as a list of (residue norm, count)."""
    ps = primes_above(F, p)
    out: list[tuple[int, int]] = []
    for P in ps:
        q = P.norm
        for i, (q0, c0) in enumerate(out):
            if q0 == q:
                out[i] = (q0, c0 + 1)
                break
        else:
            out.append((q, 1))
    return out


def validate_level(F: BaseFieldDescriptor, N: int) -> None:
    """Check that the rational integer N >= 2 is square-free in o_F."""
    if N < 2:
        raise ValueError(f"level N = {N} must be >= 2")
    _, s = squarefree_kernel(N)
    if s != 1:
        raise ValueError(f"N = {N} is not square-free")
    if F is QSQRT2 and N % 2 == 0:
        raise ValueError("even N ramifies in Q(sqrt2): N*o is not square-free")
    if F is QSQRT5 and N % 5 == 0:
        raise ValueError("N divisible by 5 ramifies in Q(sqrt5): N*o is not square-free")


def euler_phi_F(F: BaseFieldDescriptor, N: int) -> int:
    """prod over primes P | N of (Nr(P) - 1), for N square-free in o_F."""
    validate_level(F, N)
    phi = 1
    for p in factorize(N):
        for P in primes_above(F, p):
            phi *= P.norm - 1
    return phi


def enumerate_units_U2(F: BaseFieldDescriptor) -> frozenset[int]:
    """Representatives of U_+/(o^x)^2; always {1} here.

    Over Q this is trivial; over the two quadratic fields the fundamental
    unit has norm -1, so its square generates the totally positive units.
    """
    if F.degree == 2:
        eps = RingElement(F, 0, 1) if F is QSQRT5 else RingElement(F, 1, 1)
        assert eps.norm() == F.fundamental_unit_norm == -1
    return frozenset({1})


# ---------------------------------------------------------------------------
# Local square classes
#
# For u a unit of the completion F_P, u is a square iff it is congruent to a
# unit square modulo P^(2e+1) where e = ord_P(2): that congruence is the
# standard Hensel criterion ord(u - v^2) > 2 ord(2v). Working modulo 2^5*o
# (which sits inside P^(2e+1) for all our fields) lets us decide this, and
# the ramification data, by finite exhaustion.
# ---------------------------------------------------------------------------


def _ring_mul(F: BaseFieldDescriptor, x: tuple[int, int], y: tuple[int, int], mod: int):
    a = (x[0] * y[0] + F.gen_c1 * x[1] * y[1]) % mod
    b = (x[0] * y[1] + x[1] * y[0] + F.gen_c0 * x[1] * y[1]) % mod
    return a, b


def _ord_even_prime(F: BaseFieldDescriptor, x: tuple[int, int], cap: int) -> int:
    """ord_P of a + b*g at the prime above 2, residues taken mod 2^5."""
    a, b = x
    if a == 0 and b == 0:
        return cap
    v2 = lambda n: cap if n == 0 else min((n & -n).bit_length() - 1, cap)
    if F.degree == 1:
        return min(v2(a), cap)
    if F is QSQRT2:
        # ord(a + b sqrt2) = min(2 v2(a), 2 v2(b) + 1)
        return min(2 * v2(a), 2 * v2(b) + 1, cap)
    # inert 2 in Q(sqrt5)
    return min(v2(a), v2(b), cap)


@lru_cache(maxsize=None)
def _even_unit_squares(F: BaseFieldDescriptor) -> tuple[tuple[int, int], ...]:
    mod = 32
    squares = set()
    if F.degree == 1:
        for v in range(1, mod, 2):
            squares.add((v * v % mod, 0))
    else:
        for a in range(mod):
            for b in range(mod):
                # unit at the even prime iff norm is odd
                n = a * a + F.gen_c0 * a * b - F.gen_c1 * b * b
                if n % 2:
                    squares.add(_ring_mul(F, (a, b), (a, b), mod))
    return tuple(sorted(squares))


def _even_prime_e(F: BaseFieldDescriptor) -> int:
    return primes_above(F, 2)[0].e


def _even_class_w(F: BaseFieldDescriptor, u: Fraction) -> int:
    """max over unit squares s of ord_P(u - s) at the even prime, capped."""
    mod = 32
    cap = _even_prime_e(F) * 5
    den_inv = pow(u.denominator, -1, mod)
    u0 = (u.numerator * den_inv) % mod
    best = 0
    for (sa, sb) in _even_unit_squares(F):
        w = _ord_even_prime(F, ((u0 - sa) % mod, (-sb) % mod), cap)
        best = max(best, w)
        if best >= cap:
            break
    return best


def classify_delta_at(F: BaseFieldDescriptor, P: PrimeIdeal, delta) -> tuple[int, int]:
    """(eta, d) with eta = -1/0/+1 as P is inert/ramified/split in F(sqrt delta)
    and d = ord_P of the relative discriminant.

    delta is a nonzero rational number, not a square in F.
    """
    delta = Fraction(delta)
    m = P.ord_rational(delta)
    u = delta / Fraction(P.p) ** (m // P.e if P.e == 2 else m)
    # u is now the rational unit part: for ramified P the uniformizer can be
    # taken with pi^2 = p exactly (sqrt2, sqrt5), so no extra unit appears;
    # for split/inert P, (p/pi)^m is a square when m is even, which is the
    # only case where u's residue class matters.
    if P.p != 2:
        if m % 2 == 1:
            return 0, 1
        if P.f == 2:
            # rational units land in the prime field; every element of F_p
            # is a square in F_{p^2}
            return 1, 0
        r = (u.numerator * pow(u.denominator, -1, P.p)) % P.p
        ls = pow(r, (P.p - 1) // 2, P.p)
        return (1 if ls == 1 else -1), 0
    e = P.e
    if m % 2 == 1:
        return 0, 2 * e + 1
    w = _even_class_w(F, u)
    if w >= 2 * e + 1:
        return 1, 0
    if w == 2 * e:
        return -1, 0
    return 0, 2 * e + 1 - w


def is_local_square(F: BaseFieldDescriptor, P: PrimeIdeal, x) -> bool:
    """Whether the nonzero rational x is a square in the completion F_P."""
    eta, _ = classify_delta_at(F, P, x)
    m = P.ord_rational(Fraction(x))
    return m % 2 == 0 and eta == 1


def is_square_in_F(F: BaseFieldDescriptor, x: int) -> bool:
    """Whether the rational integer x is a square in F (not merely in Q)."""
    if x < 0:
        return False
    if x == 0:
        return True
    k, _ = squarefree_kernel(x)
    return k == 1 or k == F.squarefree_base


@dataclass(frozen=True)
class LocalDatum:
    """Per-prime data of E = F(sqrt(delta)) over F."""

    prime: PrimeIdeal
    q: int  # residue norm
    eta: int  # -1 inert, 0 ramified, +1 split
    ord_delta: int
    d: int  # ord_P(D_{E/F})
    k: int  # ord_P(l), where delta*o = D_{E/F} * l^2


def quad_ext_local_data(F: BaseFieldDescriptor, delta: int) -> list[LocalDatum]:
    """Local data of F(sqrt delta)/F at all primes in the support of delta*o
    plus the primes above 2 (the only ones that can ramify invisibly).

    delta must be a rational discriminant (0 or 1 mod 4), not a square in F.
    """
    if delta == 0 or delta % 4 not in (0, 1):
        raise ValueError(f"delta = {delta} is not a discriminant")
    if is_square_in_F(F, delta):
        raise ValueError(f"delta = {delta} is a square in {F.tag}: split algebra")
    ps = sorted(set(factorize(delta)) | {2})
    out: list[LocalDatum] = []
    for p in ps:
        for P in primes_above(F, p):
            m = P.ord_rational(delta)
            eta, d = classify_delta_at(F, P, delta)
            k2 = m - d
            if k2 < 0 or k2 % 2:
                raise ArithmeticError(
                    f"bad local decomposition at {P.label()}: ord={m}, d={d}"
                )
            out.append(LocalDatum(P, P.norm, eta, m, d, k2 // 2))
    return out


@dataclass(frozen=True)
class RelDiscriminant:
    """Relative discriminant data of E = F(sqrt(-N))/F with -4N*o = D * l^2."""

    N: int
    norm: int  # Nr(D_{E/F})
    d_factors: tuple[tuple[str, int, int], ...]  # (prime label, Nr(P), d)
    l_factors: tuple[tuple[str, int, int], ...]  # (prime label, Nr(P), k)
    label: str

    @property
    def l_norm(self) -> int:
        n = 1
        for _, q, k in self.l_factors:
            n *= q ** k
        return n


def rel_discriminant(F: BaseFieldDescriptor, N: int) -> RelDiscriminant:
    """D_{E/F} and the cofactor l in -4N*o = D_{E/F} * l^2, E = F(sqrt(-N))."""
    if F.degree != 2:
        raise ValueError("rel_discriminant is for the quadratic base fields")
    data = quad_ext_local_data(F, -4 * N)
    dfac = tuple((ld.prime.label(), ld.q, ld.d) for ld in data if ld.d)
    lfac = tuple((ld.prime.label(), ld.q, ld.k) for ld in data if ld.k)
    norm = 1
    for _, q, d in dfac:
        norm *= q ** d
    label = " * ".join(f"{lab}^{d}" if d > 1 else lab for lab, _, d in dfac) or "(1)"
    return RelDiscriminant(N, norm, dfac, lfac, label)


@dataclass(frozen=True)
class BiquadExtData:
    """Constants of the biquadratic extension E = F(sqrt(-N))/F."""

    N: int
    rel_disc_norm: int
    h_ratio: Fraction  # h_E / h_F
    omega_E: int
    L1: float  # L(1, eta_{E/F})


def _biquad_sub_discs(F: BaseFieldDescriptor, N: int) -> tuple[int, int]:
    """Fundamental discriminants of the two imaginary quadratic subfields of
    E = F(sqrt(-N)) = Q(sqrt m0, sqrt(-N))."""
    t, _ = squarefree_kernel(N)
    return fundamental_disc_of_sqrt(-t), fundamental_disc_of_sqrt(-F.squarefree_base * t)


def L1_eta_biquad(F: BaseFieldDescriptor, N: int) -> BiquadExtData:
    """L(1, eta_{E/F}) for the biquadratic E = F(sqrt(-N)), N > 0.

    Assembled from the class number formula for E/F: the regulator ratio is
    2 (the fundamental unit of F stays fundamental in E since its norm is
    -1), the unit index in the Herglotz class number ratio
    h_E/h_F = h(D1) h(D2) / 2 is likewise forced, and the root-of-unity
    count of E comes from its cyclotomic subfields.
    """
    if F.degree != 2:
        raise ValueError("biquadratic machinery needs a real quadratic base")
    if N <= 0:
        raise ValueError("N must be positive (E totally imaginary)")
    D1, D2 = _biquad_sub_discs(F, N)
    h1, h2 = class_number_imag(D1), class_number_imag(D2)
    omega_E = 2
    if -4 in (D1, D2):
        omega_E = 4
    if -3 in (D1, D2):
        omega_E = 6
    abs_DE = abs(F.disc * D1 * D2)
    reg_ratio = 2.0
    h_ratio = Fraction(h1 * h2, 2)
    L1 = (
        math.pi ** 2
        * (2.0 / omega_E)
        * reg_ratio
        * float(h_ratio)
        * math.sqrt(F.disc / abs_DE)
    )
    norm = abs_DE // (F.disc ** 2)
    return BiquadExtData(N, norm, h_ratio, omega_E, L1)


def l1_eta_chi_product(F: BaseFieldDescriptor, N: int) -> float:
    """Independent route to L(1, eta_{E/F}) via zeta_E/zeta_F = L(chi_D1) L(chi_D2)."""
    D1, D2 = _biquad_sub_discs(F, N)
    return dirichlet_L1(D1) * dirichlet_L1(D2)
