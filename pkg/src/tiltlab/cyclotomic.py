"""Exact arithmetic in the cyclotomic field Q(zeta_ell), ell odd.

Elements are coefficient vectors of length phi(ell) over arbitrary-precision
rationals, representing Q[x]/(Phi_ell(x)) with x mapped to zeta.  Quantum
integers, factorials and Gaussian binomials are computed as balanced Laurent
polynomials in the quantum parameter and only specialized at zeta after all
cancellation has happened, so [n choose k] never divides by a vanishing
quantum factorial.
"""

from __future__ import annotations

from functools import lru_cache

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as _Q

_QZERO = _Q(0)
_QONE = _Q(1)


def euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divmod(a, b):
    # integer coefficients, b monic-up-to-sign at the top
    a = list(a)
    q = [0] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        if c == 0:
            continue
        if c % lead != 0:
            raise ArithmeticError("non-exact polynomial division")
        c //= lead
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] -= c * y
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, low degree first."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            if any(r[1:]) or r[0] != 0:
                raise ArithmeticError("cyclotomic division left a remainder")
            poly = q
    return tuple(poly)


class MismatchedFieldError(ValueError):
    """Raised when two scalars over different roots of unity are combined."""


class CycloField:
    """Arithmetic context for Q(zeta_ell).  One instance per ell; immutable."""

    _instances: dict = {}

    def __new__(cls, ell: int):
        if ell in cls._instances:
            return cls._instances[ell]
        if ell < 3 or ell % 2 == 0:
            raise ValueError(f"ell must be odd and >= 3, got {ell}")
        self = object.__new__(cls)
        self.ell = ell
        self.phi = euler_phi(ell)
        self._init_tables()
        cls._instances[ell] = self
        return self

    def _init_tables(self):
        phi = self.phi
        cyc = cyclotomic_polynomial(self.ell)
        # x^phi = -(cyc[0] + cyc[1] x + ...)/cyc[phi]; Phi_ell is monic
        self._reduction = []  # row k: coefficients of x^(phi+k) mod Phi
        head = [_Q(-c) for c in cyc[:phi]]
        self._reduction.append(tuple(head))
        for _ in range(phi - 2):
            prev = self._reduction[-1]
            row = [_QZERO] + [c for c in prev[:-1]]
            top = prev[-1]
            if top:
                row = [row[i] + top * head[i] for i in range(phi)]
            self._reduction.append(tuple(row))
        self.zero = CyclotomicScalar(self, tuple([_QZERO] * phi))
        self.one = CyclotomicScalar(self, tuple([_QONE] + [_QZERO] * (phi - 1)))
        # zeta^k for k = 0..ell-1, reduced mod Phi_ell
        powers = [self.one]
        zeta = self.zeta = CyclotomicScalar(
            self, tuple([_QZERO, _QONE] + [_QZERO] * (phi - 2))
        )
        for _ in range(self.ell - 1):
            powers.append(powers[-1] * zeta)
        self._zeta_powers = powers
        self._qint_cache = {}
        self._qbinom_cache = {}
        self.qone_minus = self.zeta_power(1) - self.zeta_power(-1)  # zeta - zeta^-1
        self._qone_minus_inv = self.qone_minus.inverse()

    def __repr__(self):
        return f"CycloField(ell={self.ell})"

    def __reduce__(self):
        return (CycloField, (self.ell,))

    def scalar(self, value) -> "CyclotomicScalar":
        """Embed a rational (int, mpq, Fraction or 'a/b' string) into the field."""
        q = _Q(value) if not isinstance(value, type(_QONE)) else value
        coeffs = [q] + [_QZERO] * (self.phi - 1)
        return CyclotomicScalar(self, tuple(coeffs))

    def from_coeffs(self, coeffs) -> "CyclotomicScalar":
        vals = tuple(_Q(c) for c in coeffs)
        if len(vals) != self.phi:
            raise ValueError(f"expected {self.phi} coefficients, got {len(vals)}")
        return CyclotomicScalar(self, vals)

    def zeta_power(self, k: int) -> "CyclotomicScalar":
        return self._zeta_powers[k % self.ell]

    def _reduce(self, raw):
        phi = self.phi
        out = list(raw[:phi]) + [_QZERO] * (phi - min(phi, len(raw)))
        for k in range(phi, len(raw)):
            c = raw[k]
            if c:
                row = self._reduction[k - phi]
                for i in range(phi):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)

    # -- quantum combinatorics ------------------------------------------

    def quantum_integer(self, n: int) -> "CyclotomicScalar":
        """[n] = (zeta^n - zeta^-n)/(zeta - zeta^-1), any integer n."""
        if n in self._qint_cache:
            return self._qint_cache[n]
        val = (self.zeta_power(n) - self.zeta_power(-n)) * self._qone_minus_inv
        self._qint_cache[n] = val
        return val

    def quantum_binomial(self, n: int, k: int) -> "CyclotomicScalar":
        """Gaussian binomial [n choose k] at zeta, 0 <= k <= n.

        Computed by exact division of balanced Laurent polynomials before
        specialization, so vanishing quantum factorials never appear in a
        denominator.
        """
        if k < 0 or k > n:
            raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
        key = (n, k)
        if key in self._qbinom_cache:
            return self._qbinom_cache[key]
        num_poly, num_off = _qfactorial_poly(n)
        d1, o1 = _qfactorial_poly(k)
        d2, o2 = _qfactorial_poly(n - k)
        den = _poly_mul(d1, d2)
        q, r = _poly_divmod(num_poly, den)
        if any(r):
            raise ArithmeticError("Gaussian binomial division not exact")
        offset = num_off - o1 - o2
        val = self._eval_laurent(q, offset)
        self._qbinom_cache[key] = val
        return val

    def quantum_factorial(self, n: int) -> "CyclotomicScalar":
        poly, off = _qfactorial_poly(n)
        return self._eval_laurent(poly, off)

    def quantum_integer_and_binomial(self, n: int, k: int):
        """([n], [n choose k]) at zeta, for 0 <= k <= n."""
        return self.quantum_integer(n), self.quantum_binomial(n, k)

    def _eval_laurent(self, coeffs, offset) -> "CyclotomicScalar":
        acc = self.zero
        for i, c in enumerate(coeffs):
            if c:
                acc = acc + self.zeta_power(offset + i) * self.scalar(c)
        return acc

    def binomial_k_operator_value(self, m: int, c: int, t: int) -> "CyclotomicScalar":
        """Value of the torus binomial with shift c and depth t < ell at weight m."""
        if t >= self.ell:
            raise ValueError("depth must stay below ell")
        acc = self.one
        for s in range(1, t + 1):
            acc = acc * self.quantum_integer(m + c - s + 1)
            acc = acc * self.quantum_integer(s).inverse()
        return acc


@lru_cache(maxsize=None)
def _qint_poly(n: int):
    """[n] as balanced Laurent polynomial: (coeffs, lowest exponent)."""
    if n == 0:
        return ((0,), 0)
    return (tuple([1, 0] * (n - 1) + [1]), 1 - n)


@lru_cache(maxsize=None)
def _qfactorial_poly(n: int):
    if n <= 1:
        return ((1,), 0)
    prev, poff = _qfactorial_poly(n - 1)
    cur, coff = _qint_poly(n)
    return (tuple(_poly_mul(list(prev), list(cur))), poff + coff)


class CyclotomicScalar:
    """Immutable element of Q(zeta_ell)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: CycloField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    def _check(self, other):
        if self.field is not other.field:
            raise MismatchedFieldError(
                f"scalars over ell={self.field.ell} and ell={other.field.ell}"
            )

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        return CyclotomicScalar(self.field, tuple(a[i] + b[i] for i in range(len(a))))

    def __sub__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        return CyclotomicScalar(self.field, tuple(a[i] - b[i] for i in range(len(a))))

    def __neg__(self):
        return CyclotomicScalar(self.field, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        n = len(a)
        raw = [_QZERO] * (2 * n - 1)
        for i in range(n):
            ai = a[i]
            if ai:
                for j in range(n):
                    if b[j]:
                        raw[i + j] += ai * b[j]
        return CyclotomicScalar(self.field, self.field._reduce(raw))

    def inverse(self) -> "CyclotomicScalar":
        """Field inverse via extended Euclid against Phi_ell."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        phi = self.field.phi
        mod = [_Q(c) for c in cyclotomic_polynomial(self.field.ell)]
        a = list(self.coeffs)
        # extended gcd of a and mod over Q[x]
        r0, r1 = mod, a
        s0, s1 = [_QZERO], [_QONE]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i]:
                    return i
            return -1

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            c = r0[d0] / r1[d1]
            shift = d0 - d1
            for i in range(d1 + 1):
                r0[i + shift] -= c * r1[i]
            s1p = s1 + [_QZERO] * (shift + len(s0))
            s0 = s0 + [_QZERO] * (len(s1p) - len(s0))
            for i in range(len(s1)):
                s0[i + shift] -= c * s1p[i]
            r0, r1, s0, s1 = r1, r0, s1, s0
        if deg(r1) != 0:
            raise ZeroDivisionError("element not invertible (shares factor with Phi)")
        inv_lead = _QONE / r1[deg(r1)]
        res = [c * inv_lead for c in s1]
        res = res + [_QZERO] * max(0, phi - len(res))
        return CyclotomicScalar(self.field, self.field._reduce(res))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.ell, self.coeffs))
        return self._hash

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                if i == 0:
                    terms.append(str(c))
                elif i == 1:
                    terms.append(f"{c}*z")
                else:
                    terms.append(f"{c}*z^{i}")
        return " + ".join(terms) if terms else "0"

    def as_strings(self):
        return [str(c) for c in self.coeffs]

    def rational_value(self):
        """The rational this scalar equals, or None if it is irrational."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]
