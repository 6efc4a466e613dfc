"""Exact arithmetic in the cyclotomic field Q(zeta_N), N = 2*lcm of the
finite labels in play.

Elements are residues mod the N-th cyclotomic polynomial with an integer
coefficient vector and a single positive denominator. 2cos(pi/m) embeds as
zeta_{2m} + zeta_{2m}^{-1} = x^{N/(2m)} + x^{N-N/(2m)}, which is exact for
every finite label m with 2m | N. Multiplication packs coefficient vectors
into big integers (Kronecker substitution) above a small-degree cutoff, and
reduction uses a precomputed power table or Barrett division depending on the
ring size; both paths are exact over Z.
"""

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

DEFAULT_RING_CAP = 120

_SCHOOLBOOK_CUTOFF = 24  # degree below which naive convolution wins


class RingCapError(ValueError):
    """The requested cyclotomic modulus exceeds the configured cap."""


def modulus_for_labels(labels, cap=DEFAULT_RING_CAP, allow_large=False):
    """N = 2*lcm(2, finite labels); always divisible by 4."""
    n = 2
    for m in labels:
        if m == math.inf:
            continue
        n = math.lcm(n, int(m))
    modulus = 2 * n
    if modulus > cap and not allow_large:
        raise RingCapError(
            f"cyclotomic modulus {modulus} exceeds cap {cap}; "
            "pass allow_large_ring=True (CLI: --allow-large-ring) to proceed"
        )
    return modulus


def _trim(coeffs):
    i = len(coeffs)
    while i > 0 and coeffs[i - 1] == 0:
        i -= 1
    return tuple(coeffs[:i])


def poly_mul_schoolbook(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _trim(out)


def poly_mul_kronecker(a, b):
    """Integer polynomial product via packing into one big integer."""
    if not a or not b:
        return ()
    max_a = max(abs(c) for c in a)
    max_b = max(abs(c) for c in b)
    if max_a == 0 or max_b == 0:
        return ()
    # |result coeff| <= min(len) * max_a * max_b < 2^(slot-1)
    slot = (max_a * max_b * min(len(a), len(b))).bit_length() + 2
    slot = (slot + 7) & ~7  # byte aligned
    packed = _pack(a, slot) * _pack(b, slot)
    return _unpack(packed, slot, len(a) + len(b) - 1)


def _pack(coeffs, slot):
    nbytes = slot // 8
    pos = bytearray(len(coeffs) * nbytes)
    neg = bytearray(len(coeffs) * nbytes)
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * nbytes : (i + 1) * nbytes] = c.to_bytes(nbytes, "little")
        elif c < 0:
            neg[i * nbytes : (i + 1) * nbytes] = (-c).to_bytes(nbytes, "little")
    return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")


def _unpack(value, slot, length):
    # Shift by a half-slot offset per coefficient so every digit is
    # nonnegative and no carries cross slot boundaries.
    half = 1 << (slot - 1)
    offset = ((1 << (slot * length)) - 1) // ((1 << slot) - 1) * half
    shifted = value + offset
    raw = shifted.to_bytes(slot // 8 * length + 16, "little")
    nbytes = slot // 8
    out = [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(length)
    ]
    return _trim(out)


def poly_mul(a, b):
    if len(a) < _SCHOOLBOOK_CUTOFF and len(b) < _SCHOOLBOOK_CUTOFF:
        return poly_mul_schoolbook(a, b)
    return poly_mul_kronecker(a, b)


def poly_divmod_monic(a, b):
    """Quotient and remainder of a by a monic integer polynomial b."""
    assert b and b[-1] == 1
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _trim(a)
    quot = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            quot[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    return _trim(quot), _trim(a)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, computed by exact division of x^n - 1 by the
    product of Phi_d over proper divisors d of n."""
    if n == 1:
        return (-1, 1)
    numerator = tuple([-1] + [0] * (n - 1) + [1])
    denominator = (1,)
    for d in range(1, n):
        if n % d == 0:
            denominator = poly_mul(denominator, cyclotomic_polynomial(d))
    quot, rem = poly_divmod_monic(numerator, denominator)
    assert rem == ()
    return quot


def _series_inverse(f, precision):
    """Power series inverse over Z of f with f[0] = 1, to given precision."""
    assert f and f[0] == 1
    g = (1,)
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        prod = poly_mul(g, f[:k])[:k]
        two_minus = [-c for c in prod] + [0] * (k - len(prod))
        two_minus[0] += 2
        g = poly_mul(g, _trim(two_minus))[:k]
    return _trim(g[:precision])


class CycRing:
    """Shared per-modulus context: Phi_N, reduction machinery, embeddings."""

    def __init__(self, modulus):
        self.modulus = modulus
        self.phi = cyclotomic_polynomial(modulus)
        self.degree = len(self.phi) - 1
        d = self.degree
        if d <= 48:
            # rows[i] = x^(d+i) mod Phi, covering every degree a product of
            # two reduced elements can reach
            rows = [[-c for c in self.phi[:d]]]
            for _ in range(d - 1):
                prev = rows[-1]
                lead = prev[d - 1]
                row = [0] + prev[: d - 1]
                if lead:
                    for j in range(d):
                        row[j] += lead * rows[0][j]
                rows.append(row)
            self._rows = [tuple(r) for r in rows]
            self._barrett = None
        else:
            self._rows = None
            self._barrett = _series_inverse(tuple(reversed(self.phi)), d)
        self.zero = CycNumber(self, (), 1)
        self.one = CycNumber(self, (1,), 1)
        self.two = CycNumber(self, (2,), 1)
        self._two_cos = {}
        self._float_powers = None

    def reduce(self, coeffs):
        """Reduce an integer coefficient list mod Phi_N."""
        coeffs = _trim(coeffs)
        d = self.degree
        if len(coeffs) <= d:
            return coeffs
        if len(coeffs) > 2 * d - 1:
            return poly_divmod_monic(coeffs, self.phi)[1]
        if self._rows is not None:
            low = list(coeffs[:d]) + [0] * (d - len(coeffs[:d]))
            for k in range(d, len(coeffs)):
                c = coeffs[k]
                if c:
                    row = self._rows[k - d]
                    for j, rj in enumerate(row):
                        if rj:
                            low[j] += c * rj
            return _trim(low)
        # Barrett: q = floor(a / Phi) via the reversed series inverse.
        k = len(coeffs) - d
        rev_a = tuple(reversed(coeffs))
        q_rev = poly_mul(rev_a[:k], self._barrett[:k])[:k]
        q = tuple(reversed(tuple(q_rev) + (0,) * (k - len(q_rev))))
        qf = poly_mul(q, self.phi)
        out = [coeffs[i] - (qf[i] if i < len(qf) else 0) for i in range(d)]
        return _trim(out)

    def make(self, coeffs, den=1):
        """Normalized element from an integer coefficient list and denominator."""
        if den < 0:
            coeffs = [-c for c in coeffs]
            den = -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        coeffs = self.reduce(list(coeffs)) if len(coeffs) > self.degree else _trim(coeffs)
        if not coeffs:
            return self.zero
        if den != 1:
            g = den
            for c in coeffs:
                g = math.gcd(g, c)
                if g == 1:
                    break
            if g > 1:
                coeffs = tuple(c // g for c in coeffs)
                den //= g
        return CycNumber(self, tuple(coeffs), den)

    def from_int(self, n):
        return self.make((n,)) if n else self.zero

    def from_fraction(self, q):
        q = Fraction(q)
        return self.make((q.numerator,), q.denominator)

    def two_cos(self, m):
        """2cos(pi/m) for a finite label m >= 2 with 2m | N."""
        m = int(m)
        cached = self._two_cos.get(m)
        if cached is not None:
            return cached
        if self.modulus % (2 * m) != 0:
            raise ValueError(f"label {m} does not divide the ring modulus {self.modulus}")
        a = self.modulus // (2 * m)
        coeffs = [0] * (self.modulus - a + 1)
        coeffs[a] += 1
        coeffs[self.modulus - a] += 1
        value = self.make(coeffs)
        self._two_cos[m] = value
        return value

    def _floats(self):
        if self._float_powers is None:
            n = self.modulus
            self._float_powers = [
                complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))
                for k in range(self.degree)
            ]
        return self._float_powers

    def __repr__(self):
        return f"CycRing(N={self.modulus}, degree={self.degree})"


@lru_cache(maxsize=None)
def get_ring(modulus):
    if modulus < 3:
        raise ValueError("modulus must be >= 3")
    return CycRing(modulus)


class CycNumber:
    """Immutable element of a CycRing: integer residue over one denominator."""

    __slots__ = ("ring", "num", "den", "_hash")

    def __init__(self, ring, num, den):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycNumber is immutable")

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.den == 1 and self.num == (1,)

    def is_rational(self):
        return len(self.num) <= 1

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0] if self.num else 0, self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.den == b.den:
            num = [x + y for x, y in _zip_pad(a.num, b.num)]
            return self.ring.make(num, a.den)
        num = [x * b.den + y * a.den for x, y in _zip_pad(a.num, b.num)]
        return self.ring.make(num, a.den * b.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.den == b.den:
            num = [x - y for x, y in _zip_pad(a.num, b.num)]
            return self.ring.make(num, a.den)
        num = [x * b.den - y * a.den for x, y in _zip_pad(a.num, b.num)]
        return self.ring.make(num, a.den * b.den)

    def __neg__(self):
        return CycNumber(self.ring, tuple(-c for c in self.num), self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return self.ring.zero
        if len(self.num) == 1 or len(other.num) == 1:
            scalar, rest = (self, other) if len(self.num) == 1 else (other, self)
            c = scalar.num[0]
            return self.ring.make(
                [c * x for x in rest.num], scalar.den * rest.den
            )
        num = poly_mul(self.num, other.num)
        den = self.den * other.den
        if den == 1:
            reduced = self.ring.reduce(num)
            return (
                CycNumber(self.ring, reduced, 1) if reduced else self.ring.zero
            )
        return self.ring.make(list(num), den)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def inverse(self):
        """Field inverse via the extended Euclidean algorithm against Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return self.ring.from_fraction(1 / self.as_fraction())
        phi = [Fraction(c) for c in self.ring.phi]
        a = [Fraction(c, self.den) for c in self.num]
        # extended Euclid: s*a + t*phi = gcd, tracked only for s
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, rem = _frac_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _frac_sub(s0, _frac_mul(q, s1))
        # r0 = gcd (a unit since Phi_N is irreducible over Q)
        lead = next(c for c in reversed(r0) if c)
        if len(_frac_trim(r0)) != 1:
            raise ArithmeticError("element not invertible: gcd with Phi has degree > 0")
        inv = [c / lead for c in s0]
        common = 1
        for c in inv:
            common = math.lcm(common, c.denominator)
        return self.ring.make([int(c * common) for c in inv], common)

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            if other.ring is not self.ring:
                raise ValueError("mixed cyclotomic rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction):
            return self.ring.from_fraction(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            return self.den == 1 and (self.num == ((other,) if other else ()))
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self.ring is other.ring and self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring.modulus, self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def complex_float(self):
        powers = self.ring._floats()
        total = 0j
        for i, c in enumerate(self.num):
            if c:
                total += c * powers[i]
        return total / self.den

    def float_value(self):
        return self.complex_float().real

    def sign(self):
        """Exact sign of a real element: -1, 0 or 1.

        Zero is decided exactly from the coefficients; otherwise the value is
        evaluated numerically with escalating precision until the error bound
        excludes zero.
        """
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.num[0] > 0 else -1
        max_coeff = max(abs(c) for c in self.num)
        # float fast path
        if max_coeff < 1 << 500:
            value = self.complex_float()
            bound = len(self.num) * (max_coeff / self.den) * 1e-13
            if abs(value.real) > bound:
                return 1 if value.real > 0 else -1
        digits = len(str(max_coeff)) + 40
        for _ in range(6):
            with mpmath.workdps(digits):
                z = mpmath.exp(2j * mpmath.pi / self.ring.modulus)
                total = mpmath.mpc(0)
                for c in reversed(self.num):
                    total = total * z + c
                bound = mpmath.mpf(len(self.num)) * max_coeff * mpmath.mpf(10) ** (
                    -digits + 5
                )
                if abs(total.real) > bound:
                    return 1 if total.real > 0 else -1
            digits *= 4
        raise ArithmeticError(f"could not determine the sign of {self!r}")

    def __repr__(self):
        if self.is_zero():
            return "Cyc(0)"
        terms = []
        for i, c in enumerate(self.num):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        body = " + ".join(terms)
        if self.den != 1:
            body = f"({body})/{self.den}"
        return f"Cyc({body}; N={self.ring.modulus})"


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(
        tuple(a) + (0,) * (n - len(a)),
        tuple(b) + (0,) * (n - len(b)),
    )


def _frac_trim(p):
    i = len(p)
    while i > 0 and p[i - 1] == 0:
        i -= 1
    return p[:i]


def _frac_mul(a, b):
    a, b = _frac_trim(a), _frac_trim(b)
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _frac_sub(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]


def _frac_divmod(a, b):
    a, b = list(_frac_trim(a)), list(_frac_trim(b))
    if len(a) < len(b):
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - 1, len(b) - 2, -1):
        c = a[k]
        if c:
            q = c / lead
            quot[k - len(b) + 1] = q
            for j in range(len(b)):
                a[k - len(b) + 1 + j] -= q * b[j]
    return quot, _frac_trim(a)
