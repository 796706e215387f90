"""Exact scalar (semi)rings behind one small interface.

``CycloScalar`` holds integer combinations of the primitive eighth root of
unity w (with w**4 = -1) divided by a power of sqrt(2); this captures every
stabiliser amplitude exactly.  ``BoolScalar`` is the boolean semiring used by
the relational theory.  Probabilities are ``fractions.Fraction``.

Both scalar classes share the protocol used by the matrix layer:
``+``, ``*``, unary ``-``, ``dagger()``, ``is_zero()``, and the classmethods
``zero()``, ``one()``, ``phase_units()``, ``sort_key_of()``.
"""

from __future__ import annotations

from fractions import Fraction

SQRT2_COEFFS = (0, 1, 0, -1)  # sqrt(2) = w - w**3


class RingError(ArithmeticError):
    """A value left the ring it was supposed to live in."""


def _mul4(a, b):
    """Product of coefficient 4-tuples modulo w**4 = -1."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
    )


def _sqrt2_times(c):
    a0, a1, a2, a3 = c
    return (a1 - a3, a0 + a2, a1 + a3, a2 - a0)


def _sqrt2_exact_div(c):
    """Divide a coefficient tuple by sqrt(2); None when not divisible."""
    a0, a1, a2, a3 = c
    if (a0 + a2) % 2 or (a1 + a3) % 2:
        return None
    return ((a1 - a3) // 2, (a0 + a2) // 2, (a1 + a3) // 2, (a2 - a0) // 2)


class CycloScalar:
    """(a0 + a1*w + a2*w**2 + a3*w**3) / sqrt(2)**k with w**4 = -1.

    Instances are kept in canonical form: either k == 0 or the numerator is
    not divisible by sqrt(2) inside the ring, so equal values always compare
    equal as tuples.
    """

    __slots__ = ("coeffs", "k")

    def __init__(self, coeffs, k=0):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != 4:
            raise ValueError("need exactly four coefficients")
        k = int(k)
        if k < 0:
            raise ValueError("denominator exponent must be non-negative")
        if coeffs == (0, 0, 0, 0):
            k = 0
        else:
            while k > 0:
                reduced = _sqrt2_exact_div(coeffs)
                if reduced is None:
                    break
                coeffs = reduced
                k -= 1
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):  # pragma: no cover - immutability
        raise AttributeError("CycloScalar is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls):
        return _CYCLO_ZERO

    @classmethod
    def one(cls):
        return _CYCLO_ONE

    @classmethod
    def from_int(cls, n):
        return cls((n, 0, 0, 0))

    @classmethod
    def omega(cls, power=1):
        """w**power for any integer power (w has order eight)."""
        power %= 8
        sign, idx = (1, power) if power < 4 else (-1, power - 4)
        coeffs = [0, 0, 0, 0]
        coeffs[idx] = sign
        return cls(tuple(coeffs))

    @classmethod
    def sqrt2(cls):
        return cls(SQRT2_COEFFS)

    @classmethod
    def inv_sqrt2(cls):
        return cls((1, 0, 0, 0), 1)

    @classmethod
    def phase_units(cls):
        """The unit-modulus ring elements: the eight powers of w."""
        return _CYCLO_UNITS

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, CycloScalar):
            return NotImplemented
        a, b = self, other
        if a.k < b.k:
            a, b = b, a
        cb = b.coeffs
        for _ in range(a.k - b.k):
            cb = _sqrt2_times(cb)
        return CycloScalar(tuple(x + y for x, y in zip(a.coeffs, cb)), a.k)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CycloScalar(tuple(-c for c in self.coeffs), self.k)

    def __mul__(self, other):
        if not isinstance(other, CycloScalar):
            return NotImplemented
        if self is _CYCLO_ONE:
            return other
        if other is _CYCLO_ONE:
            return self
        if self.is_zero() or other.is_zero():
            return _CYCLO_ZERO
        return CycloScalar(_mul4(self.coeffs, other.coeffs), self.k + other.k)

    def dagger(self):
        """Complex conjugation: w maps to w**7 = -w**3."""
        a0, a1, a2, a3 = self.coeffs
        return CycloScalar((a0, -a3, -a2, -a1), self.k)

    def times_sqrt2_pow(self, t):
        """Multiply by sqrt(2)**t for any integer t (exact)."""
        if t >= 0:
            if t <= self.k:
                return CycloScalar(self.coeffs, self.k - t)
            c = self.coeffs
            for _ in range(t - self.k):
                c = _sqrt2_times(c)
            return CycloScalar(c, 0)
        return CycloScalar(self.coeffs, self.k - t)

    # -- predicates and views ----------------------------------------------

    def is_zero(self):
        return self.coeffs == (0, 0, 0, 0)

    def is_real(self):
        a0, a1, a2, a3 = self.coeffs
        return a2 == 0 and a1 == -a3

    def is_positive_real(self):
        """Exact positivity test for real values (a0 + a1*sqrt(2)) / sqrt(2)**k."""
        if not self.is_real() or self.is_zero():
            return False
        a0, a1 = self.coeffs[0], self.coeffs[1]
        if a0 >= 0 and a1 >= 0:
            return True
        if a0 <= 0 and a1 <= 0:
            return False
        if a0 > 0:
            return a0 * a0 > 2 * a1 * a1
        return 2 * a1 * a1 > a0 * a0

    def rational_value(self):
        """The value as a Fraction; RingError when it is not rational."""
        a0, a1, a2, a3 = self.coeffs
        if (a1, a2, a3) != (0, 0, 0):
            raise RingError(f"{self!r} has irrational components")
        if a0 == 0:
            return Fraction(0)
        if self.k % 2:
            raise RingError(f"{self!r} has an odd sqrt(2) denominator")
        return Fraction(a0, 2 ** (self.k // 2))

    def field_coeffs(self):
        """Coefficients over the rationals, absorbing the sqrt(2) power."""
        c = self.coeffs
        k = self.k
        if k % 2:
            c = _sqrt2_times(c)
            k += 1
        d = 2 ** (k // 2)
        return tuple(Fraction(x, d) for x in c)

    def to_complex(self):
        """Float embedding, only used as an independent numeric oracle."""
        import cmath

        w = cmath.exp(1j * cmath.pi / 4)
        a0, a1, a2, a3 = self.coeffs
        return (a0 + a1 * w + a2 * w**2 + a3 * w**3) / (2 ** (self.k / 2))

    def sort_key(self):
        return (self.k, self.coeffs)

    @classmethod
    def sort_key_of(cls, value):
        return value.sort_key()

    # -- dunder plumbing ----------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, CycloScalar)
            and self.coeffs == other.coeffs
            and self.k == other.k
        )

    def __hash__(self):
        return hash((self.coeffs, self.k))

    def __repr__(self):
        return f"CycloScalar({self.coeffs}, k={self.k})"

    def to_json(self):
        return {"c": list(self.coeffs), "k": self.k}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["c"]), data["k"])


_CYCLO_ZERO = CycloScalar((0, 0, 0, 0))
_CYCLO_ONE = CycloScalar((1, 0, 0, 0))
_CYCLO_UNITS = tuple(CycloScalar.omega(j) for j in range(8))


class BoolScalar:
    """The boolean semiring: 1 + 1 = 1, multiplication is conjunction."""

    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", 1 if value else 0)

    def __setattr__(self, name, value):  # pragma: no cover - immutability
        raise AttributeError("BoolScalar is immutable")

    @classmethod
    def zero(cls):
        return _BOOL_ZERO

    @classmethod
    def one(cls):
        return _BOOL_ONE

    @classmethod
    def from_int(cls, n):
        return _BOOL_ONE if n else _BOOL_ZERO

    @classmethod
    def phase_units(cls):
        return (_BOOL_ONE,)

    def __add__(self, other):
        if not isinstance(other, BoolScalar):
            return NotImplemented
        return _BOOL_ONE if (self.value or other.value) else _BOOL_ZERO

    def __mul__(self, other):
        if not isinstance(other, BoolScalar):
            return NotImplemented
        return _BOOL_ONE if (self.value and other.value) else _BOOL_ZERO

    def __neg__(self):
        # The boolean semiring has no additive inverses; negation is the
        # identity so that semiring-generic code stays total.
        return self

    def __sub__(self, other):
        return NotImplemented

    def dagger(self):
        return self

    def is_zero(self):
        return self.value == 0

    def sort_key(self):
        return self.value

    @classmethod
    def sort_key_of(cls, value):
        return value.sort_key()

    def __eq__(self, other):
        return isinstance(other, BoolScalar) and self.value == other.value

    def __hash__(self):
        return hash(("BoolScalar", self.value))

    def __repr__(self):
        return f"BoolScalar({self.value})"

    def to_json(self):
        return self.value

    @classmethod
    def from_json(cls, data):
        return cls.from_int(data)


_BOOL_ZERO = BoolScalar(0)
_BOOL_ONE = BoolScalar(1)


def squared_modulus(a):
    """dagger(a) * a as an exact Fraction (the Born weight of an amplitude).

    Raises RingError when the product is not rational, which cannot happen
    for amplitudes produced by the theories here.
    """
    if isinstance(a, BoolScalar):
        return Fraction(0 if a.is_zero() else 1)
    p = a.dagger() * a
    return p.rational_value()


def cyclo_div(y, x):
    """The unique w in the ring with w * x == y, or None.

    Solves the 4x4 rational linear system given by multiplication with x and
    rejects solutions whose denominators are not powers of sqrt(2).
    """
    if x.is_zero():
        raise ZeroDivisionError("division by the zero scalar")
    if y.is_zero():
        return _CYCLO_ZERO
    # Columns of the multiplication-by-x matrix in the basis 1, w, w^2, w^3.
    basis = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    xf = x.field_coeffs()
    cols = []
    for e in basis:
        prod = _mul4(tuple(xf), e)
        cols.append([Fraction(p) for p in prod])
    rhs = [Fraction(v) for v in y.field_coeffs()]
    # Gaussian elimination on the 4x4 system cols * w = rhs.
    mat = [[cols[j][i] for j in range(4)] + [rhs[i]] for i in range(4)]
    for col in range(4):
        pivot = next((r for r in range(col, 4) if mat[r][col] != 0), None)
        if pivot is None:
            return None
        mat[col], mat[pivot] = mat[pivot], mat[col]
        pv = mat[col][col]
        mat[col] = [v / pv for v in mat[col]]
        for r in range(4):
            if r != col and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    sol = [mat[i][4] for i in range(4)]
    denom = 1
    for q in sol:
        denom = denom * q.denominator // _gcd(denom, q.denominator)
    d = denom
    while d % 2 == 0:
        d //= 2
    if d != 1:
        return None
    ints = [int(q * denom) for q in sol]
    # denom = 2**m corresponds to sqrt(2)**(2m).
    m = denom.bit_length() - 1
    return CycloScalar(tuple(ints), 2 * m)


def bool_div(y, x):
    """w with w * x == y in the boolean semiring, or None."""
    if x.is_zero():
        raise ZeroDivisionError("division by the zero scalar")
    return y


def scalar_div(y, x):
    if isinstance(x, BoolScalar):
        return bool_div(y, x)
    return cyclo_div(y, x)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# -- JSON helpers ----------------------------------------------------------


def rational_to_json(q):
    return f"{q.numerator}/{q.denominator}"


def rational_from_json(text):
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or "1"))


def scalar_to_json(s):
    return s.to_json()


def scalar_from_json(data, ring):
    return ring.from_json(data)
