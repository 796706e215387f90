"""The dagger symmetric monoidal engine.

Objects are tensor powers of one generating object; morphisms are dense
matrices over an exact scalar semiring.  Composition is the (sparse-aware)
matrix product, the tensor is the Kronecker product with the left factor most
significant, and the dagger is the conjugate transpose.  Equality up to a
global phase is a predicate, never a quotient datatype: morphisms stay
concrete and only comparisons and deduplication use the predicate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .scalars import BoolScalar, CycloScalar


class ShapeError(TypeError):
    """Domain/codomain mismatch in a categorical operation."""


@dataclass(frozen=True)
class TheoryObject:
    """The n-th tensor power of the generating object (n = 0 is the unit)."""

    power: int
    base_dim: int

    @property
    def dim(self):
        return self.base_dim**self.power

    def tensor(self, other):
        if other.base_dim != self.base_dim:
            raise ShapeError("tensor of objects over different base dimensions")
        return TheoryObject(self.power + other.power, self.base_dim)


@dataclass(frozen=True)
class Morphism:
    """A matrix of scalars with declared domain and codomain objects."""

    dom: TheoryObject
    cod: TheoryObject
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.cod.dim:
            raise ShapeError("row count does not match codomain dimension")
        for row in self.entries:
            if len(row) != self.dom.dim:
                raise ShapeError("column count does not match domain dimension")

    @property
    def ring(self):
        return type(self.entries[0][0]) if self.entries and self.entries[0] else CycloScalar

    # -- categorical operations ---------------------------------------------

    def __matmul__(self, other):
        """Sequential composition self . other (other is applied first)."""
        if not isinstance(other, Morphism):
            return NotImplemented
        if other.cod != self.dom:
            raise ShapeError(
                f"cannot compose: intermediate objects differ "
                f"({other.cod} vs {self.dom})"
            )
        zero = self.ring.zero()
        n_out = self.cod.dim
        n_in = other.dom.dim
        rows = []
        for i in range(n_out):
            srow = self.entries[i]
            acc = [zero] * n_in
            for k, s in enumerate(srow):
                if s.is_zero():
                    continue
                orow = other.entries[k]
                for j, o in enumerate(orow):
                    if not o.is_zero():
                        acc[j] = acc[j] + s * o
            rows.append(tuple(acc))
        return Morphism(other.dom, self.cod, tuple(rows))

    def tensor(self, other):
        """Kronecker product; the left factor is the most significant index."""
        dom = self.dom.tensor(other.dom)
        cod = self.cod.tensor(other.cod)
        zero = self.ring.zero()
        o_cols = other.dom.dim
        rows = []
        for r1 in self.entries:
            for r2 in other.entries:
                row = []
                for a in r1:
                    if a.is_zero():
                        row.extend([zero] * o_cols)
                    else:
                        row.extend(a * b for b in r2)
                rows.append(tuple(row))
        return Morphism(dom, cod, tuple(rows))

    def dag(self):
        """Conjugate transpose; domain and codomain swap."""
        rows = tuple(
            tuple(self.entries[i][j].dagger() for i in range(self.cod.dim))
            for j in range(self.dom.dim)
        )
        return Morphism(self.cod, self.dom, rows)

    def __add__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        if other.dom != self.dom or other.cod != self.cod:
            raise ShapeError("cannot add morphisms of different shapes")
        rows = tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)
        )
        return Morphism(self.dom, self.cod, rows)

    def scale(self, s):
        rows = tuple(tuple(s * a for a in row) for row in self.entries)
        return Morphism(self.dom, self.cod, rows)

    def __rmul__(self, s):
        return self.scale(s)

    # -- views ----------------------------------------------------------------

    def is_zero_morphism(self):
        return all(a.is_zero() for row in self.entries for a in row)

    def first_nonzero(self):
        """(row, col, value) of the first nonzero entry in row-major order."""
        for i, row in enumerate(self.entries):
            for j, a in enumerate(row):
                if not a.is_zero():
                    return i, j, a
        return None

    def scalar_value(self):
        if self.dom.power != 0 or self.cod.power != 0:
            raise ShapeError("not a scalar morphism")
        return self.entries[0][0]

    def sort_key(self):
        return tuple(a.sort_key() for row in self.entries for a in row)

    def to_json(self):
        return {
            "dom": self.dom.power,
            "cod": self.cod.power,
            "base": self.dom.base_dim,
            "entries": [[a.to_json() for a in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data, ring):
        base = data["base"]
        dom = TheoryObject(data["dom"], base)
        cod = TheoryObject(data["cod"], base)
        rows = tuple(
            tuple(ring.from_json(a) for a in row) for row in data["entries"]
        )
        return cls(dom, cod, rows)


# -- constructors ------------------------------------------------------------


def identity(obj, ring):
    one, zero = ring.one(), ring.zero()
    rows = tuple(
        tuple(one if i == j else zero for j in range(obj.dim)) for i in range(obj.dim)
    )
    return Morphism(obj, obj, rows)


def zero_morphism(dom, cod, ring):
    zero = ring.zero()
    return Morphism(dom, cod, tuple(tuple(zero for _ in range(dom.dim)) for _ in range(cod.dim)))


def scalar_morphism(value, base_dim):
    unit = TheoryObject(0, base_dim)
    return Morphism(unit, unit, ((value,),))


def from_rows(dom, cod, rows):
    return Morphism(dom, cod, tuple(tuple(row) for row in rows))


def basis_state(obj, ring, index):
    """The index-th basis column vector as a state I -> obj."""
    one, zero = ring.one(), ring.zero()
    unit = TheoryObject(0, obj.base_dim)
    rows = tuple((one,) if i == index else (zero,) for i in range(obj.dim))
    return Morphism(unit, obj, rows)


def state_from_entries(obj, values):
    unit = TheoryObject(0, obj.base_dim)
    return Morphism(unit, obj, tuple((v,) for v in values))


def leg_permutation(n_legs, base_dim, ring, perm, leg_power=1):
    """The unitary sending leg i of the output to leg perm[i] of the input.

    Legs are blocks of `leg_power` generator factors, so the same helper
    serves both plain wires and composite wires.
    """
    if sorted(perm) != list(range(n_legs)):
        raise ValueError("perm must be a permutation of the legs")
    d = base_dim**leg_power
    obj = TheoryObject(n_legs * leg_power, base_dim)
    one, zero = ring.one(), ring.zero()
    dim = obj.dim
    rows = []
    for out in range(dim):
        digits = _digits(out, d, n_legs)
        source = 0
        for i in range(n_legs):
            source = source * d + digits[i]
        # out digit i equals in digit perm[i]: build the matching input index.
        in_digits = [0] * n_legs
        for i in range(n_legs):
            in_digits[perm[i]] = digits[i]
        idx = 0
        for v in in_digits:
            idx = idx * d + v
        row = [zero] * dim
        row[idx] = one
        rows.append(tuple(row))
    return Morphism(obj, obj, tuple(rows))


def swap(base_dim, ring, leg_power=1):
    """The symmetry on two wires."""
    return leg_permutation(2, base_dim, ring, (1, 0), leg_power)


def _digits(n, base, width):
    out = []
    for _ in range(width):
        out.append(n % base)
        n //= base
    return list(reversed(out))


# -- phase quotient -----------------------------------------------------------


def equal_up_to_phase(f, g):
    """True when g equals u * f for a unit-modulus scalar u."""
    if f.dom != g.dom or f.cod != g.cod:
        return False
    fz = f.first_nonzero()
    gz = g.first_nonzero()
    if fz is None or gz is None:
        return fz is None and gz is None
    if fz[:2] != gz[:2]:
        return False
    for u in f.ring.phase_units():
        if f.scale(u) == g:
            return True
    return False


def phase_gauge(m):
    """A canonical representative of the global-phase class of m.

    Prefers the phase making the first nonzero entry real and positive;
    falls back to the lexicographically least representative.
    """
    fz = m.first_nonzero()
    if fz is None:
        return m
    units = m.ring.phase_units()
    if len(units) == 1:
        return m
    lead = fz[2]
    for u in units:
        if (u * lead).is_positive_real():
            return m.scale(u)
    return min((m.scale(u) for u in units), key=Morphism.sort_key)


def inner(a, b):
    """The scalar a‑dagger . b for two states on the same object."""
    return (a.dag() @ b).scalar_value()


# -- randomised dagger-SMC law suite -------------------------------------------


def random_scalar(ring, rng, spread=2, max_k=2):
    if ring is BoolScalar:
        return BoolScalar.from_int(rng.randint(0, 1))
    coeffs = tuple(rng.randint(-spread, spread) for _ in range(4))
    return CycloScalar(coeffs, rng.randint(0, max_k))


def random_morphism(ring, base_dim, rng, dom_power, cod_power):
    dom = TheoryObject(dom_power, base_dim)
    cod = TheoryObject(cod_power, base_dim)
    rows = tuple(
        tuple(random_scalar(ring, rng) for _ in range(dom.dim))
        for _ in range(cod.dim)
    )
    return Morphism(dom, cod, rows)


@dataclass
class LawSuiteReport:
    pairs: int
    checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def dagger_smc_law_suite(ring, base_dim, pairs, seed):
    """Check the dagger-SMC laws on randomly generated morphism pairs.

    Each round draws compatible morphisms and asserts associativity of
    composition, the interchange law, contravariance of the dagger, the
    dagger-tensor exchange, involutivity, and naturality of the symmetry.
    """
    failures = []
    checked = 0
    for t in range(pairs):
        rng = random.Random(f"{seed}:smc:{t}")
        p = [rng.randint(0, 1) for _ in range(4)]
        f = random_morphism(ring, base_dim, rng, p[0], p[1])
        g = random_morphism(ring, base_dim, rng, p[1], p[2])
        h = random_morphism(ring, base_dim, rng, p[2], p[3])
        q = random_morphism(ring, base_dim, rng, p[0], p[1])
        r = random_morphism(ring, base_dim, rng, p[1], p[2])

        laws = {
            "compose_assoc": (h @ g) @ f == h @ (g @ f),
            "interchange": (g.tensor(r)) @ (f.tensor(q)) == (g @ f).tensor(r @ q),
            "dagger_contravariant": (g @ f).dag() == f.dag() @ g.dag(),
            "dagger_tensor": (f.tensor(q)).dag() == f.dag().tensor(q.dag()),
            "dagger_involution": f.dag().dag() == f,
        }
        if f.cod.power == 1 == q.cod.power and f.dom.power == 1 == q.dom.power:
            s = swap(base_dim, ring)
            laws["swap_natural"] = s @ (f.tensor(q)) == (q.tensor(f)) @ s
        for name, holds in laws.items():
            checked += 1
            if not holds:
                failures.append((t, name))
    return LawSuiteReport(pairs=pairs, checked=checked, failures=failures)
