"""Diagram terms over an observable signature and their evaluation.

A term is a tree over Id, Swap, Delta, Epsilon, DeltaDag, EpsilonDag, Gen,
Compose and Tensor.  Terms are typed by wire counts (a wire is one copy of
the carrier object, which may itself be a tensor power of the generator).
Evaluation maps a well-typed term to a concrete matrix in a binding that
supplies delta, epsilon and named single-wire gates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .morphisms import Morphism, ShapeError, identity, leg_permutation


@dataclass(frozen=True)
class Id:
    wires: int


@dataclass(frozen=True)
class Swap:
    pass


@dataclass(frozen=True)
class Delta:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class DeltaDag:
    pass


@dataclass(frozen=True)
class EpsilonDag:
    pass


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Compose:
    after: object
    before: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


_LEAF_ARITIES = {
    Swap: (2, 2),
    Delta: (1, 2),
    Epsilon: (1, 0),
    DeltaDag: (2, 1),
    EpsilonDag: (0, 1),
}


def signature(term):
    """(input wires, output wires) of a term; raises ShapeError if ill-typed."""
    if isinstance(term, Id):
        return (term.wires, term.wires)
    if isinstance(term, Gen):
        return (1, 1)
    for cls, sig in _LEAF_ARITIES.items():
        if isinstance(term, cls):
            return sig
    if isinstance(term, Compose):
        bi, bo = signature(term.before)
        ai, ao = signature(term.after)
        if bo != ai:
            raise ShapeError(
                f"composition mismatch: {bo} output wires fed into {ai} inputs"
            )
        return (bi, ao)
    if isinstance(term, Tensor):
        li, lo = signature(term.left)
        ri, ro = signature(term.right)
        return (li + ri, lo + ro)
    raise TypeError(f"not a diagram term: {term!r}")


def evaluate(term, binding):
    """The matrix denotation of a term in the given theory binding."""
    ring = binding.ring
    base = binding.base_dim
    wire_power = binding.delta.dom.power

    def wires_obj(n):
        from .morphisms import TheoryObject

        return TheoryObject(n * wire_power, base)

    def go(t):
        if isinstance(t, Id):
            return identity(wires_obj(t.wires), ring)
        if isinstance(t, Swap):
            return leg_permutation(2, base, ring, (1, 0), wire_power)
        if isinstance(t, Delta):
            return binding.delta
        if isinstance(t, Epsilon):
            return binding.epsilon
        if isinstance(t, DeltaDag):
            return binding.delta.dag()
        if isinstance(t, EpsilonDag):
            return binding.epsilon.dag()
        if isinstance(t, Gen):
            return binding.generator(t.name)
        if isinstance(t, Compose):
            return go(t.after) @ go(t.before)
        if isinstance(t, Tensor):
            return go(t.left).tensor(go(t.right))
        raise TypeError(f"not a diagram term: {t!r}")

    signature(term)  # raise on type errors before touching matrices
    return go(term)


# -- connectivity ---------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def make(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def is_connected(term):
    """Whether the wiring graph of the term has a single component.

    Every generator occurrence fuses all of its ports; identity and swap pass
    wires through.  The empty diagram (zero wires, zero generators) counts as
    connected vacuously false: it has no component at all.
    """
    uf = _UnionFind()
    counter = [0]

    def fresh():
        counter[0] += 1
        port = ("w", counter[0])
        uf.make(port)
        return port

    def go(t):
        if isinstance(t, Id):
            ports = [fresh() for _ in range(t.wires)]
            return ports, list(ports)
        if isinstance(t, Swap):
            a, b = fresh(), fresh()
            return [a, b], [b, a]
        if isinstance(t, (Gen,)):
            p = fresh()
            q = fresh()
            uf.union(p, q)
            return [p], [q]
        if isinstance(t, Delta):
            p, q, r = fresh(), fresh(), fresh()
            uf.union(p, q)
            uf.union(p, r)
            return [p], [q, r]
        if isinstance(t, DeltaDag):
            p, q, r = fresh(), fresh(), fresh()
            uf.union(p, q)
            uf.union(p, r)
            return [p, q], [r]
        if isinstance(t, Epsilon):
            p = fresh()
            return [p], []
        if isinstance(t, EpsilonDag):
            p = fresh()
            return [], [p]
        if isinstance(t, Compose):
            bi, bo = go(t.before)
            ai, ao = go(t.after)
            for x, y in zip(bo, ai):
                uf.union(x, y)
            return bi, ao
        if isinstance(t, Tensor):
            li, lo = go(t.left)
            ri, ro = go(t.right)
            return li + ri, lo + ro
        raise TypeError(f"not a diagram term: {t!r}")

    go(term)
    roots = {uf.find(x) for x in uf.parent}
    return len(roots) == 1


# -- random connected spider diagrams ---------------------------------------


_STEP = {
    "delta": (Delta, 1, 2),
    "epsilon": (Epsilon, 1, 0),
    "delta_dag": (DeltaDag, 2, 1),
    "epsilon_dag": (EpsilonDag, 0, 1),
}


def _layer(gen_cls, pos, width_before, arity_in):
    parts = []
    if pos > 0:
        parts.append(Id(pos))
    parts.append(gen_cls())
    rest = width_before - pos - arity_in
    if rest > 0:
        parts.append(Id(rest))
    term = parts[0]
    for p in parts[1:]:
        term = Tensor(term, p)
    return term


def random_connected_term(m, n, rng, max_gens=8, max_width=4, max_attempts=5000):
    """A random connected term built from delta/epsilon and daggers.

    The term has m input and n output wires, uses between one and max_gens
    generator occurrences, and never widens past max_width.  Sampling builds
    a random typed layer sequence and rejects disconnected draws.
    """
    for _ in range(max_attempts):
        width = m
        layers = []
        ok = True
        while True:
            if layers and width == n and rng.random() < 0.35:
                break
            if len(layers) == max_gens:
                ok = width == n
                break
            moves = []
            for name, (cls, a_in, a_out) in _STEP.items():
                new_width = width - a_in + a_out
                if width >= a_in and 0 <= new_width <= max_width:
                    # keep the walk able to return to n in the moves left
                    remaining = max_gens - len(layers) - 1
                    if abs(new_width - n) <= remaining:
                        moves.append((cls, a_in, a_out))
            if not moves:
                ok = False
                break
            cls, a_in, a_out = rng.choice(moves)
            pos = rng.randint(0, width - a_in) if width > a_in else 0
            layers.append(_layer(cls, pos, width, a_in))
            width = width - a_in + a_out
        if not ok or not layers:
            continue
        term = layers[0]
        for layer in layers[1:]:
            term = Compose(layer, term)
        if is_connected(term):
            return term
    raise RuntimeError(
        f"could not sample a connected ({m},{n}) diagram in {max_attempts} attempts"
    )
