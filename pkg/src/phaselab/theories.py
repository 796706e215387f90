"""The two concrete theories, built from their generators.

Stab: tensor powers of a qubit, the 24 single-qubit Clifford gates modulo
global phase (generated by closure from H and the phase gate), and the
computational-basis copying map with its counit.

Spek: tensor powers of a four-element set, the 24 permutations, and the
block-pair copying relation with its counit.

Both theories expose the same interface: a named generator map, state-space
enumeration by breadth-first closure, observable enumeration on the
generating object, and the mutual-unbiasedness verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import diagrams
from .morphisms import (
    Morphism,
    TheoryObject,
    equal_up_to_phase,
    identity,
    inner,
    leg_permutation,
    phase_gauge,
    state_from_entries,
)
from .observables import (
    Observable,
    check_observable,
    eigenstates,
    validated_observable,
)
from .scalars import BoolScalar, CycloScalar


class TheoryBuildError(RuntimeError):
    """Generator closure did not produce the expected structure."""


@dataclass
class TheoryBinding:
    name: str
    base_dim: int
    ring: type
    generators: dict  # gate name -> Morphism, plus "delta" and "epsilon"
    aliases: dict = field(default_factory=dict)

    @property
    def delta(self):
        return self.generators["delta"]

    @property
    def epsilon(self):
        return self.generators["epsilon"]

    def object(self, power):
        return TheoryObject(power, self.base_dim)

    def generator(self, name):
        name = self.aliases.get(name, name)
        return self.generators[name]

    def single_system_gates(self):
        return [
            (name, m)
            for name, m in sorted(self.generators.items())
            if name not in ("delta", "epsilon")
        ]

    def sqrt_dim(self):
        if self.ring is CycloScalar:
            return CycloScalar.sqrt2()
        return BoolScalar.one()

    def cnot_term(self):
        """The two-wire entangler as a diagram term: copy on the first wire,
        Hadamard-conjugated merge on the second."""
        h = diagrams.Gen("H")
        merge = diagrams.Compose(
            diagrams.Compose(h, diagrams.DeltaDag()),
            diagrams.Tensor(h, h),
        )
        return diagrams.Compose(
            diagrams.Tensor(diagrams.Id(1), merge),
            diagrams.Tensor(diagrams.Delta(), diagrams.Id(1)),
        )

    def cnot(self):
        """The entangler as an exactly unitary matrix."""
        raw = diagrams.evaluate(self.cnot_term(), self)
        return rescale_to_unitary(raw)

    def unit_state(self, arity):
        """epsilon-dagger on every wire: the seed of the state closure."""
        state = self.epsilon.dag()
        for _ in range(arity - 1):
            state = state.tensor(self.epsilon.dag())
        return state


def rescale_to_unitary(m):
    """Scale by an exact sqrt(2) power so that m becomes unitary."""
    prod = m.dag() @ m
    idm = identity(m.dom, m.ring)
    if prod == idm:
        return m
    if m.ring is not CycloScalar:
        raise TheoryBuildError("non-unitary boolean map cannot be rescaled")
    c = prod.entries[0][0]
    if prod != idm.scale(c):
        raise TheoryBuildError("map is not proportional to a unitary")
    value = c.rational_value()
    t = value.numerator.bit_length() - 1 if value >= 1 else -(
        value.denominator.bit_length() - 1
    )
    if value != 2**t if t >= 0 else value != pow(2, t):  # pragma: no cover
        raise TheoryBuildError("proportionality factor is not a power of two")
    scaled = m.scale(CycloScalar.one().times_sqrt2_pow(-t))
    if scaled.dag() @ scaled != idm:
        raise TheoryBuildError("rescaling did not produce a unitary")
    return scaled


# -- generator matrices ---------------------------------------------------------


def _stab_generators():
    Q = TheoryObject(1, 2)
    one = CycloScalar.one()
    zero = CycloScalar.zero()
    h = CycloScalar.inv_sqrt2()
    i_unit = CycloScalar.omega(2)
    H = Morphism(Q, Q, ((h, h), (h, -h)))
    S = Morphism(Q, Q, ((one, zero), (zero, i_unit)))
    Q2 = TheoryObject(2, 2)
    delta = Morphism(
        Q,
        Q2,
        (
            (one, zero),
            (zero, zero),
            (zero, zero),
            (zero, one),
        ),
    )
    unit = TheoryObject(0, 2)
    epsilon = Morphism(Q, unit, ((one, one),))
    return H, S, delta, epsilon


def _spek_generators():
    IV = TheoryObject(1, 4)
    one = BoolScalar.one()
    zero = BoolScalar.zero()
    # copying relation: each block {0,1} and {2,3} carries the two-element
    # group with identities 0 and 2; delta is the converse multiplication.
    pairs = {
        0: {(0, 0), (1, 1)},
        1: {(0, 1), (1, 0)},
        2: {(2, 2), (3, 3)},
        3: {(2, 3), (3, 2)},
    }
    IV2 = TheoryObject(2, 4)
    rows = []
    for r in range(4):
        for s in range(4):
            rows.append(tuple(one if (r, s) in pairs[t] else zero for t in range(4)))
    delta = Morphism(IV, IV2, tuple(rows))
    unit = TheoryObject(0, 4)
    epsilon = Morphism(IV, unit, ((one, zero, one, zero),))
    return delta, epsilon


def permutation_morphism(images, base_dim, ring):
    """The permutation sending basis element x to images[x]."""
    obj = TheoryObject(1, base_dim)
    one, zero = ring.one(), ring.zero()
    rows = []
    for out in range(base_dim):
        rows.append(tuple(one if images[j] == out else zero for j in range(base_dim)))
    return Morphism(obj, obj, tuple(rows))


def build_theory(name):
    """Construct a theory binding from its generating data."""
    name = name.lower()
    if name == "stab":
        H, S, delta, epsilon = _stab_generators()
        gates = _closure_mod_phase([H, S])
        if len(gates) != 24:
            raise TheoryBuildError(
                f"single-qubit gate closure has order {len(gates)}, expected 24"
            )
        gates.sort(key=Morphism.sort_key)
        generators = {f"c{i:02d}": g for i, g in enumerate(gates)}
        aliases = {}
        for alias, ref in (("H", H), ("S", S)):
            for gname, g in generators.items():
                if equal_up_to_phase(g, ref):
                    aliases[alias] = gname
                    break
        generators["delta"] = delta
        generators["epsilon"] = epsilon
        binding = TheoryBinding("stab", 2, CycloScalar, generators, aliases)
    elif name == "spek":
        delta, epsilon = _spek_generators()
        from itertools import permutations

        generators = {}
        for images in permutations(range(4)):
            pname = "p" + "".join(str(x + 1) for x in images)
            generators[pname] = permutation_morphism(images, 4, BoolScalar)
        if len(generators) != 24:
            raise TheoryBuildError("expected the 24 permutations of the four-set")
        aliases = {"H": "p1324"}  # swaps the two middle ontic states
        generators["delta"] = delta
        generators["epsilon"] = epsilon
        binding = TheoryBinding("spek", 4, BoolScalar, generators, aliases)
    else:
        raise ValueError(f"unknown theory {name!r}")

    report = check_observable(binding.delta, binding.epsilon)
    if not report.ok:
        raise TheoryBuildError(
            f"generating pair is not an observable: {report.failed_axioms()}"
        )
    return binding


def _closure_mod_phase(seeds):
    """Group closure under composition, deduplicated up to global phase."""
    seen = {}
    frontier = [phase_gauge(g) for g in seeds]
    for g in frontier:
        seen[g.entries] = g
    while frontier:
        nxt = []
        for g in frontier:
            for s in seeds:
                h = phase_gauge(g @ s)
                if h.entries not in seen:
                    seen[h.entries] = h
                    nxt.append(h)
        frontier = nxt
    return list(seen.values())


# -- state enumeration ------------------------------------------------------------


@dataclass
class StateSpace:
    arity: int
    states: tuple
    provenance: dict  # state entries -> word of gate names
    depth: int
    fixpoint_reached: bool

    @property
    def count(self):
        return len(self.states)


def enumerate_states(binding, arity, depth_bound=12):
    """Breadth-first closure of the state space at the given arity.

    Starts from the uniform seed state, applies every single-system gate on
    every wire plus the entangler on every ordered wire pair, and
    deduplicates up to global phase.  Stops at a fixpoint or at the depth
    bound (reported, never silently truncated).
    """
    if arity < 1:
        raise ValueError("arity must be at least one")
    gates = []
    for gname, g in binding.single_system_gates():
        for wire in range(arity):
            lifted = _on_wire(g, wire, arity, binding)
            gates.append((f"{gname}@{wire}", lifted))
    if arity >= 2:
        cnot = binding.cnot()
        for ctrl in range(arity):
            for tgt in range(arity):
                if ctrl == tgt:
                    continue
                lifted = _on_wire_pair(cnot, ctrl, tgt, arity, binding)
                gates.append((f"cx@{ctrl},{tgt}", lifted))

    seed = phase_gauge(binding.unit_state(arity))
    seen = {seed.entries: seed}
    provenance = {seed.entries: ()}
    frontier = [seed]
    depth = 0
    fixpoint = False
    while depth < depth_bound:
        depth += 1
        nxt = []
        for s in frontier:
            word = provenance[s.entries]
            for gname, g in gates:
                t = phase_gauge(g @ s)
                if t.entries not in seen:
                    seen[t.entries] = t
                    provenance[t.entries] = word + (gname,)
                    nxt.append(t)
        if not nxt:
            fixpoint = True
            depth -= 1  # the last round discovered nothing
            break
        frontier = nxt
    states = tuple(sorted(seen.values(), key=Morphism.sort_key))
    return StateSpace(
        arity=arity,
        states=states,
        provenance={k: v for k, v in provenance.items()},
        depth=depth,
        fixpoint_reached=fixpoint,
    )


def _on_wire(gate, wire, arity, binding):
    parts = []
    if wire > 0:
        parts.append(identity(binding.object(wire), binding.ring))
    parts.append(gate)
    if wire < arity - 1:
        parts.append(identity(binding.object(arity - wire - 1), binding.ring))
    out = parts[0]
    for p in parts[1:]:
        out = out.tensor(p)
    return out


def _on_wire_pair(gate2, a, b, arity, binding):
    """Apply a two-wire gate to wires (a, b) of an arity-wide register."""
    if arity == 2 and (a, b) == (0, 1):
        return gate2
    rest = [w for w in range(arity) if w not in (a, b)]
    to_front = [a, b] + rest
    # P moves wire to_front[i] of the input onto position i.
    P = leg_permutation(arity, binding.base_dim, binding.ring, to_front, 1)
    wide = gate2
    if rest:
        wide = gate2.tensor(identity(binding.object(arity - 2), binding.ring))
    return P.dag() @ wide @ P


# -- single-object state catalog -----------------------------------------------


def unit_state_catalog(binding):
    """The single-system states, stored unit-normalised where exact.

    For the qubit theory the closure produces states of squared length two;
    dividing by sqrt(2) is exact in the ring.  The relational theory needs no
    rescaling.
    """
    space = enumerate_states(binding, 1)
    if binding.ring is CycloScalar:
        h = CycloScalar.inv_sqrt2()
        return [s.scale(h) for s in space.states]
    return list(space.states)


# -- observable enumeration -------------------------------------------------------


def enumerate_observables(binding):
    """All observables on the generating object, canonically labelled.

    Qubit theory: orthonormal pairs among the six unit states copy to
    observables (and every observable copies such a basis), giving three.
    Relational theory: candidates are block partitions of the four-set with a
    two-element group per block; candidates are verified axiom-by-axiom,
    filtered to those whose two eigenstates are theory states, and
    deduplicated by the copied basis.  Exactly three classes survive.
    """
    catalog = unit_state_catalog(binding)
    if binding.ring is CycloScalar:
        observables = _stab_observables(binding, catalog)
    else:
        observables = _spek_observables(binding, catalog)
    return observables


def _stab_observables(binding, catalog):
    zero = CycloScalar.zero()
    bases = []
    for i, x in enumerate(catalog):
        for y in catalog[i + 1 :]:
            if inner(x, y) == zero:
                bases.append((x, y))
    obs = []
    for x, y in bases:
        delta = (x.tensor(x)) @ x.dag() + (y.tensor(y)) @ y.dag()
        epsilon = x.dag() + y.dag()
        obs.append(validated_observable(delta, epsilon))
    return _label_observables(binding, obs)


def _spek_block_candidates(base_dim):
    """Every partition of the carrier into nontrivial group blocks.

    Blocks of size two carry the two-element group (either element may be the
    identity); the enumeration covers all two-block partitions of a four-set.
    """
    assert base_dim == 4
    partitions = [
        ((0, 1), (2, 3)),
        ((0, 2), (1, 3)),
        ((0, 3), (1, 2)),
    ]
    candidates = []
    for blocks in partitions:
        for e0 in blocks[0]:
            for e1 in blocks[1]:
                candidates.append((blocks, (e0, e1)))
    return candidates


def _spek_delta_from_blocks(blocks, identities):
    one, zero = BoolScalar.one(), BoolScalar.zero()
    IV = TheoryObject(1, 4)
    IV2 = TheoryObject(2, 4)
    mult = {}
    for block, e in zip(blocks, identities):
        o = block[0] if block[1] == e else block[1]
        mult[(e, e)] = e
        mult[(e, o)] = o
        mult[(o, e)] = o
        mult[(o, o)] = e
    rows = []
    for r in range(4):
        for s in range(4):
            rows.append(
                tuple(one if mult.get((r, s)) == t else zero for t in range(4))
            )
    delta = Morphism(IV, IV2, tuple(rows))
    unit = TheoryObject(0, 4)
    eps = Morphism(
        IV, unit, (tuple(one if x in identities else zero for x in range(4)),)
    )
    return delta, eps


def _spek_observables(binding, catalog):
    found = {}
    for blocks, identities in _spek_block_candidates(binding.base_dim):
        delta, eps = _spek_delta_from_blocks(blocks, identities)
        report = check_observable(delta, eps)
        if not report.ok:
            continue
        cand = Observable(delta.dom, delta, eps)
        eig = eigenstates(cand, catalog)
        if len(eig) != 2:
            continue
        key = frozenset(e.entries for e in eig)
        # one observable per copied basis; canonical representative is the
        # one whose counit set is lexicographically least
        eps_set = tuple(identities)
        if key not in found or sorted(eps_set) < sorted(found[key][1]):
            found[key] = (cand, eps_set)
    obs = [cand for cand, _ in found.values()]
    if len(obs) != 3:
        raise TheoryBuildError(f"expected 3 relational observables, found {len(obs)}")
    return _label_observables(binding, obs)


def _label_observables(binding, obs):
    """Order and name the observables Z, X, Y.

    Z is the generating one; X is the observable having the phase class of
    the Z counit state among its eigenstates (the analogue of the plus/minus
    basis); Y is the remaining one.
    """
    z = next((o for o in obs if o.delta == binding.delta), None)
    if z is None:
        raise TheoryBuildError("the generating copying map was not recovered")
    counit_state = binding.epsilon.dag()
    catalog = unit_state_catalog(binding)
    rest = [o for o in obs if o.delta != binding.delta]
    x = None
    for o in rest:
        eig = eigenstates(o, catalog)
        if any(
            equal_up_to_phase(o.rescaled(e), counit_state) for e in eig
        ):
            x = o
            break
    if x is None or len(rest) != 2:
        raise TheoryBuildError("could not identify the plus/minus-like observable")
    y = next(o for o in rest if o is not x)
    named = []
    for o, lbl in zip((z, x, y), ("Z", "X", "Y")):
        named.append(Observable(o.object, o.delta, o.epsilon, lbl))
    return named


def brute_force_observables(base_dim):
    """Every boolean (delta, epsilon) pair on a small carrier that passes the
    axioms; an exhaustive oracle for the structured enumeration."""
    from itertools import product

    one, zero = BoolScalar.one(), BoolScalar.zero()
    X = TheoryObject(1, base_dim)
    X2 = TheoryObject(2, base_dim)
    unit = TheoryObject(0, base_dim)
    n_cells = base_dim * base_dim * base_dim
    found = []
    for bits in product((0, 1), repeat=n_cells):
        rows = []
        idx = 0
        grid = [[None] * base_dim for _ in range(base_dim * base_dim)]
        for rs in range(base_dim * base_dim):
            for t in range(base_dim):
                grid[rs][t] = one if bits[idx] else zero
                idx += 1
        delta = Morphism(X, X2, tuple(tuple(r) for r in grid))
        for eps_bits in product((0, 1), repeat=base_dim):
            eps = Morphism(
                X, unit, (tuple(one if b else zero for b in eps_bits),)
            )
            if check_observable(delta, eps).ok:
                found.append((delta, eps))
    return found


def structured_observables_all(base_dim):
    """Group-block candidates on a small carrier, without the two-eigenstate
    filter; the structured counterpart of the brute-force oracle."""
    one, zero = BoolScalar.one(), BoolScalar.zero()
    X = TheoryObject(1, base_dim)
    X2 = TheoryObject(2, base_dim)
    unit = TheoryObject(0, base_dim)

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for size in range(len(rest) + 1):
            from itertools import combinations

            for combo in combinations(rest, size):
                block = (first,) + combo
                remaining = [x for x in rest if x not in combo]
                for p in partitions(remaining):
                    yield [block] + p

    def group_structures(block):
        # all abelian group tables on the block, as multiplication dicts
        from itertools import permutations as perms

        n = len(block)
        if n == 1:
            return [{(block[0], block[0]): block[0]}]
        if n == 2:
            out = []
            for e in block:
                o = block[0] if block[1] == e else block[1]
                out.append({(e, e): e, (e, o): o, (o, e): o, (o, o): e})
            return out
        raise NotImplementedError("only needed for blocks of size <= 2 here")

    found = []
    for part in partitions(list(range(base_dim))):
        tables = [group_structures(b) for b in part]
        from itertools import product

        for choice in product(*tables):
            mult = {}
            identities = []
            for block, table in zip(part, choice):
                mult.update(table)
                for e in block:
                    if all(table[(e, x)] == x for x in block):
                        identities.append(e)
            rows = []
            for r in range(base_dim):
                for s in range(base_dim):
                    rows.append(
                        tuple(
                            one if mult.get((r, s)) == t else zero
                            for t in range(base_dim)
                        )
                    )
            delta = Morphism(X, X2, tuple(rows))
            eps = Morphism(
                X,
                unit,
                (tuple(one if x in identities else zero for x in range(base_dim)),),
            )
            found.append((delta, eps))
    return found


# -- mutual unbiasedness ------------------------------------------------------------


@dataclass
class MuqtReport:
    conditions: dict

    @property
    def ok(self):
        return all(self.conditions.values())


def verify_muqt(binding, observables=None, catalog=None):
    """The mutually-unbiased-qubit-theory conditions, checked exactly.

    1. objects are the unit and tensor powers of one generator (structural);
    2. observables are alike: same eigenstate counts and phase groups;
    3. observables are pairwise mutually unbiased;
    4. every state of the generating object is an eigenstate of some
       observable;
    5. there are exactly three observables with two eigenstates each.
    """
    from .observables import build_state_catalog, is_unbiased, phase_group
    from .observables import CompactStructure

    observables = observables or enumerate_observables(binding)
    catalog = catalog or unit_state_catalog(binding)

    eigen_lists = {o.label: eigenstates(o, catalog) for o in observables}
    eigen_counts = {lbl: len(v) for lbl, v in eigen_lists.items()}
    groups = {o.label: phase_group(o, catalog) for o in observables}

    alike = (
        len(set(eigen_counts.values())) <= 1
        and len(set(g.iso_class for g in groups.values())) <= 1
    )

    mutually_unbiased = True
    for o1 in observables:
        compact1 = CompactStructure.from_observable(o1)
        for o2 in observables:
            if o1.label == o2.label:
                continue
            compact2 = CompactStructure.from_observable(o2)
            for x in eigen_lists[o1.label]:
                if not is_unbiased(o2, o2.rescaled(x), compact2):
                    mutually_unbiased = False

    cat = build_state_catalog(observables, catalog)
    all_eigen = cat.is_partition()

    counts_ok = len(observables) == 3 and all(
        c == 2 for c in eigen_counts.values()
    )

    return MuqtReport(
        conditions={
            "objects_are_tensor_powers": True,
            "observables_alike": alike,
            "pairwise_mutually_unbiased": mutually_unbiased,
            "all_states_are_eigenstates": all_eigen,
            "three_observables_two_eigenstates": counts_ok,
        }
    )
