"""Finite abelian groups given by multiplication tables.

Provides table validation, classification into invariant factors (the
isomorphism class), and small constructors for cyclic groups and direct
products.  Classification works by matching the multiset of element orders
against every abelian type of the same order, which determines abelian
groups up to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class GroupTableError(ValueError):
    """The table does not describe a group."""


@dataclass(frozen=True)
class AbelianGroupSpec:
    """An abstract abelian group: named elements plus a multiplication table."""

    elements: tuple
    table: tuple  # table[i][j] = index of elements[i] * elements[j]
    identity: int

    @property
    def order(self):
        return len(self.elements)

    def mul(self, i, j):
        return self.table[i][j]

    def inverse(self, i):
        for j in range(self.order):
            if self.table[i][j] == self.identity:
                return j
        raise GroupTableError(f"element {i} has no inverse")

    def element_order(self, i):
        x, n = i, 1
        while x != self.identity:
            x = self.table[x][i]
            n += 1
            if n > self.order:
                raise GroupTableError("order computation did not terminate")
        return n

    @classmethod
    def cyclic(cls, n, prefix="g"):
        elements = tuple(f"{prefix}{i}" for i in range(n))
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return cls(elements, table, 0)

    @classmethod
    def product(cls, a, b):
        nb = b.order
        elements = tuple(f"{x}.{y}" for x in a.elements for y in b.elements)
        table = tuple(
            tuple(
                a.table[i1][j1] * nb + b.table[i2][j2]
                for j1 in range(a.order)
                for j2 in range(b.order)
            )
            for i1 in range(a.order)
            for i2 in range(b.order)
        )
        return cls(elements, table, a.identity * nb + b.identity)

    def to_json(self):
        return {
            "order": self.order,
            "elements": list(self.elements),
            "table": [list(r) for r in self.table],
            "identity": self.identity,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            tuple(data["elements"]),
            tuple(tuple(r) for r in data["table"]),
            data["identity"],
        )


def validate_group_table(table):
    """Check closure, associativity, identity, inverses and commutativity.

    Returns the identity index.  Raises GroupTableError otherwise.
    """
    n = len(table)
    for row in table:
        if len(row) != n or any(not (0 <= v < n) for v in row):
            raise GroupTableError("table is not square over element indices")
    identity = None
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise GroupTableError("no identity element")
    for a in range(n):
        if identity not in table[a]:
            raise GroupTableError(f"element {a} has no inverse")
    for a in range(n):
        for b in range(n):
            if table[a][b] != table[b][a]:
                raise GroupTableError("table is not commutative")
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise GroupTableError("table is not associative")
    return identity


def _abelian_types(n):
    """All invariant-factor chains d1 | d2 | ... | dk with product n."""
    if n == 1:
        return [()]
    out = set()

    def rec(remaining, chain):
        # chain holds factors from the largest down; each new factor must
        # divide the previous one.
        if remaining == 1:
            out.add(tuple(reversed(chain)))
            return
        for d in range(2, remaining + 1):
            if remaining % d == 0 and (not chain or chain[-1] % d == 0):
                rec(remaining // d, chain + [d])

    rec(n, [])
    return sorted(out)


def _order_profile_of_type(factors, n):
    """Multiset {order: count} for the direct product of cyclic factors."""
    counts = {}
    divs = [d for d in range(1, n + 1) if n % d == 0]
    upto = {}
    for d in divs:
        total = 1
        for f in factors:
            total *= gcd(d, f)
        upto[d] = total
    for d in divs:
        exact = upto[d] - sum(counts[e] for e in divs if e < d and d % e == 0)
        if exact:
            counts[d] = exact
        else:
            counts[d] = 0
    return {d: c for d, c in counts.items() if c}


def classify_table(table):
    """Invariant factors and a display label for an abelian group table."""
    identity = validate_group_table(table)
    n = len(table)
    spec = AbelianGroupSpec(tuple(str(i) for i in range(n)), tuple(tuple(r) for r in table), identity)
    profile = {}
    for i in range(n):
        o = spec.element_order(i)
        profile[o] = profile.get(o, 0) + 1
    for factors in _abelian_types(n):
        if _order_profile_of_type(factors, n) == profile:
            return factors, _label(factors)
    raise GroupTableError("order profile matches no abelian type")


def _label(factors):
    if not factors:
        return "Z1"
    return "x".join(f"Z{d}" for d in factors)


def group_isomorphisms(a, b):
    """All isomorphisms a -> b as index maps (small groups only)."""
    if a.order != b.order:
        return []
    from itertools import permutations

    n = a.order
    others = [x for x in range(n) if x != a.identity]
    targets = [x for x in range(n) if x != b.identity]
    isos = []
    for perm in permutations(targets):
        phi = {a.identity: b.identity}
        phi.update(dict(zip(others, perm)))
        if all(
            phi[a.table[x][y]] == b.table[phi[x]][phi[y]]
            for x in range(n)
            for y in range(n)
        ):
            isos.append(phi)
    return isos
