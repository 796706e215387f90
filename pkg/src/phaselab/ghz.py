"""Tripartite GHZ structures, their axioms, and correlation tables.

A GHZ structure is a symmetric three-party state with an erasing effect,
subject to four axioms (symmetry, Bell marginal, self-conjugacy, maximally
mixed trace-out).  GHZ structures correspond bijectively to observables; the
correlation triples they induce are determined entirely by the phase group,
which this module also checks by generating the table symbolically from an
abstract group and matching it against the concrete one.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import permutations

from .groups import AbelianGroupSpec, classify_table, group_isomorphisms
from .morphisms import (
    Morphism,
    ShapeError,
    TheoryObject,
    equal_up_to_phase,
    identity,
    leg_permutation,
)
from .observables import (
    CompactStructure,
    Observable,
    ObservableAxiomError,
    conjugate_state,
    multiply,
    validated_observable,
)
from .scalars import scalar_div


class GHZAxiomError(ValueError):
    """A claimed GHZ structure fails one of its axioms."""


@dataclass(frozen=True)
class GHZStructure:
    object: TheoryObject
    psi: Morphism  # I -> X (x) X (x) X
    epsilon: Morphism  # X -> I
    label: str = ""

    @property
    def ring(self):
        return self.psi.ring


@dataclass
class GHZReport:
    symmetric: bool
    bell_marginal: bool
    self_conjugate: bool
    trace_out: bool

    @property
    def ok(self):
        return (
            self.symmetric
            and self.bell_marginal
            and self.self_conjugate
            and self.trace_out
        )

    def failed_axioms(self):
        names = ("symmetric", "bell_marginal", "self_conjugate", "trace_out")
        return [n for n in names if not getattr(self, n)]

    def needs_review(self):
        """Passing the first three axioms but failing the reconstructed
        trace-out axiom is flagged for manual review, not silently rejected."""
        return (
            self.symmetric
            and self.bell_marginal
            and self.self_conjugate
            and not self.trace_out
        )


def ghz_from_observable(obs):
    """The three-output spider on the counit: (delta (x) 1) . delta . counit."""
    idx = obs.id()
    psi = (obs.delta.tensor(idx)) @ obs.delta @ obs.epsilon.dag()
    g = GHZStructure(obs.object, psi, obs.epsilon, label=obs.label)
    report = verify_ghz(g)
    if not report.ok:
        raise GHZAxiomError(f"constructed state fails: {report.failed_axioms()}")
    return g


def bell_marginal(g):
    """(epsilon (x) 1 (x) 1) applied to the state: the induced cup."""
    idx = identity(g.object, g.ring)
    return (g.epsilon.tensor(idx).tensor(idx)) @ g.psi


def verify_ghz(g):
    """The four defining axioms, each checked exactly."""
    X = g.object
    ring = g.ring
    if g.psi.dom.power != 0 or g.psi.cod.power != 3 * X.power:
        raise ShapeError("state must have three output legs")
    if g.epsilon.dom != X or g.epsilon.cod.power != 0:
        raise ShapeError("effect must map the carrier to the unit")

    # 1. full leg-permutation symmetry
    symmetric = True
    for perm in permutations(range(3)):
        P = leg_permutation(3, X.base_dim, ring, perm, X.power)
        if P @ g.psi != g.psi:
            symmetric = False
            break

    # 2. the one-leg marginal is a Bell state (snake plus symmetry)
    eta = bell_marginal(g)
    compact = CompactStructure(X, eta)
    marginal_ok = compact.is_valid()

    # 3. state and effect are self-conjugate for the induced cup
    self_conj = False
    if marginal_ok:
        triple = compact.lifted(3)
        psi_conj = conjugate_state(g.psi, triple)
        idx = identity(X, ring)
        eps_conj = eta.dag() @ (idx.tensor(g.epsilon.dag()))
        self_conj = psi_conj == g.psi and eps_conj == g.epsilon

    # 4. tracing out two legs in the doubled picture leaves a positive
    #    multiple of the identity (the boolean identity relation for the
    #    relational theory)
    trace_ok = all(_trace_out_is_mixed(g, keep) for keep in range(3))

    return GHZReport(symmetric, marginal_ok, self_conj, trace_ok)


def _trace_out_is_mixed(g, keep):
    """Contract the doubled state over the two legs other than `keep`."""
    X = g.object
    d = X.dim
    ring = g.ring
    psi = g.psi

    def amp(a, b, c):
        idx = (a * d + b) * d + c
        return psi.entries[idx][0]

    def legs(i, j, x):
        order = [None, None, None]
        others = [t for t in range(3) if t != keep]
        order[keep] = x
        order[others[0]] = i
        order[others[1]] = j
        return tuple(order)

    zero = ring.zero()
    matrix = []
    for x in range(d):
        row = []
        for y in range(d):
            acc = zero
            for i in range(d):
                for j in range(d):
                    acc = acc + amp(*legs(i, j, x)) * amp(*legs(i, j, y)).dagger()
            row.append(acc)
        matrix.append(row)
    diag = matrix[0][0]
    for x in range(d):
        for y in range(d):
            if x == y:
                if matrix[x][y] != diag:
                    return False
            elif not matrix[x][y].is_zero():
                return False
    if hasattr(diag, "is_positive_real"):
        return diag.is_positive_real()
    return not diag.is_zero()


def observable_from_ghz(g):
    """Recover the copying map by bending one leg with the marginal cup."""
    report = verify_ghz(g)
    if not report.ok:
        raise GHZAxiomError(f"axioms fail on re-check: {report.failed_axioms()}")
    X = g.object
    ring = g.ring
    idx = identity(X, ring)
    cap = bell_marginal(g).dag()
    delta = (cap.tensor(idx).tensor(idx)) @ (idx.tensor(g.psi))
    return validated_observable(delta, g.epsilon, label=g.label)


# -- correlation tables -----------------------------------------------------------


@dataclass(frozen=True)
class CorrelationTable:
    labels: tuple  # display names of the canonical states
    classification: tuple  # per state: ("eigen", obs_label) or ("phase", k)
    triples: tuple  # (i, j, k) with third slot proportional to state k
    weights: dict  # (i, j, k) -> proportionality scalar
    zero_pairs: tuple  # (i, j) whose induced third state is the zero state
    forbidden: tuple  # (i, j, k) whose joint amplitude vanishes
    states: tuple = ()  # concrete states when available

    def to_json(self):
        return {
            "states": [
                s.to_json() if hasattr(s, "to_json") else s for s in (self.states or self.labels)
            ],
            "triples": [list(t) for t in self.triples],
            "forbidden": [list(t) for t in self.forbidden],
        }

    def digest(self):
        payload = json.dumps(
            {
                "labels": list(self.labels),
                "triples": sorted(list(t) for t in self.triples),
                "forbidden": sorted(list(t) for t in self.forbidden),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def correlation_triples(g, obs, catalog):
    """The GHZ correlations over the canonical six-state list.

    States enter at squared length dim(X).  For each pair the induced third
    state is matched to a canonical representative up to an exact scalar
    weight; pairs inducing the zero state are flagged, and triples whose
    joint amplitude vanishes populate the forbidden set.
    """
    states, labels, classification = canonical_state_list(obs, catalog)
    n = len(states)
    triples = []
    weights = {}
    zero_pairs = []
    idx3 = identity(g.object, g.ring)
    for i in range(n):
        for j in range(n):
            effect = (states[i].tensor(states[j]).tensor(idx3)).dag()
            y = effect @ g.psi
            if y.is_zero_morphism():
                zero_pairs.append((i, j))
                continue
            for k in range(n):
                w = _state_ratio(y, states[k])
                if w is not None:
                    triples.append((i, j, k))
                    weights[(i, j, k)] = w
                    break
    forbidden = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                amp = (
                    (states[i].tensor(states[j]).tensor(states[k])).dag() @ g.psi
                ).scalar_value()
                if amp.is_zero():
                    forbidden.append((i, j, k))
    return CorrelationTable(
        labels=tuple(labels),
        classification=tuple(classification),
        triples=tuple(triples),
        weights=weights,
        zero_pairs=tuple(zero_pairs),
        forbidden=tuple(forbidden),
        states=tuple(states),
    )


def canonical_state_list(obs, catalog):
    """The six catalog states at length sqrt(dim), canonically ordered.

    Eigenstates of the observable come first, then the phase classes with
    the counit state leading.  Classification tags record which role each
    state plays for the observable driving the GHZ state.
    """
    from .observables import eigenstates, unbiased_states

    eig = eigenstates(obs, catalog)
    eig = sorted(eig, key=_eigen_sort_key)
    phases = unbiased_states(obs, catalog)  # already counit-first
    states = [obs.rescaled(x) for x in eig] + phases
    labels = [f"e{t}" for t in range(len(eig))] + [f"u{t}" for t in range(len(phases))]
    classification = [("eigen", obs.label)] * len(eig) + [
        ("phase", t) for t in range(len(phases))
    ]
    return states, labels, classification


def _eigen_sort_key(x):
    fz = x.first_nonzero()
    return (fz[0], x.sort_key())


def _state_ratio(y, x):
    """w with y == w * x entrywise, or None."""
    fz = x.first_nonzero()
    if fz is None:
        return None
    i = fz[0]
    target = y.entries[i][0]
    if target.is_zero():
        return None
    w = scalar_div(target, fz[2])
    if w is None:
        return None
    return w if x.scale(w) == y else None


# -- the symbolic table generated by a phase group ---------------------------------


def correlations_from_group(spec, partner_involution=None):
    """The correlation table determined by an abstract four-element group.

    States are two abstract eigenstates plus the group elements.  Triples
    follow the three product rules: eigenstates absorb themselves, distinct
    eigenstates annihilate, an eigenstate absorbs any group element, and two
    group elements multiply through the table with conjugation acting as the
    group inverse.  The forbidden set needs to know which group element is
    paired with the identity into an observable; when that partner is given
    the forbidden triples are generated too.
    """
    n = spec.order
    e_labels = ["e0", "e1"]
    u_labels = [f"u{t}" for t in range(n)]
    labels = e_labels + u_labels
    classification = [("eigen", "Z")] * 2 + [("phase", t) for t in range(n)]

    def u(t):
        return 2 + t

    triples = []
    zero_pairs = []
    for i in range(2):
        triples.append((i, i, i))
        for j in range(2):
            if i != j:
                zero_pairs.append((i, j))
        for t in range(n):
            triples.append((i, u(t), i))
            triples.append((u(t), i, i))
    inv = {t: spec.inverse(t) for t in range(n)}
    for s in range(n):
        for t in range(n):
            triples.append((u(s), u(t), u(inv[spec.mul(s, t)])))

    forbidden = []
    if partner_involution is not None:
        pairing = _observable_pairing(spec, partner_involution)
        orthogonal = {0: 1, 1: 0}
        for s, t in pairing.items():
            orthogonal[u(s)] = u(t)
        allowed_third = {}
        for (i, j, k) in triples:
            allowed_third[(i, j)] = k
        m = len(labels)
        for i in range(m):
            for j in range(m):
                if (i, j) in allowed_third:
                    k_good = allowed_third[(i, j)]
                    forbidden.append((i, j, orthogonal[k_good]))
                else:
                    for k in range(m):
                        forbidden.append((i, j, k))

    return CorrelationTable(
        labels=tuple(labels),
        classification=tuple(classification),
        triples=tuple(triples),
        weights={},
        zero_pairs=tuple(zero_pairs),
        forbidden=tuple(forbidden),
    )


def _observable_pairing(spec, partner_involution):
    """Pair group elements into two-eigenstate observables by translation
    with the distinguished involution."""
    a = partner_involution
    if spec.mul(a, a) != spec.identity or a == spec.identity:
        raise ValueError("partner must be an involution distinct from the identity")
    return {t: spec.mul(t, a) for t in range(spec.order)}


def group_spec_from_phase_group(pg):
    return AbelianGroupSpec(
        elements=tuple(f"u{t}" for t in range(pg.order)),
        table=pg.table,
        identity=pg.identity_index,
    )


def tables_isomorphic(concrete, symbolic, pg):
    """Whether a classification-respecting bijection maps one triple set
    exactly onto the other.  The dictionary matches eigenstates to
    eigenstates and phase classes along a group isomorphism."""
    con_eigen = [i for i, c in enumerate(concrete.classification) if c[0] == "eigen"]
    con_phase = {c[1]: i for i, c in enumerate(concrete.classification) if c[0] == "phase"}
    sym_eigen = [i for i, c in enumerate(symbolic.classification) if c[0] == "eigen"]
    sym_phase = {c[1]: i for i, c in enumerate(symbolic.classification) if c[0] == "phase"}
    if len(con_eigen) != len(sym_eigen) or len(con_phase) != len(sym_phase):
        return False
    spec_concrete = group_spec_from_phase_group(pg)
    # symbolic tables are generated from a spec whose element order matches
    # the phase tags, so rebuild that spec from the triples
    sym_spec = _group_from_symbolic(symbolic)
    concrete_triples = set(concrete.triples)
    symbolic_triples = set(symbolic.triples)
    from itertools import permutations as perms

    for eig_map in perms(sym_eigen):
        for iso in group_isomorphisms(spec_concrete, sym_spec):
            mapping = {}
            for pos, i in enumerate(con_eigen):
                mapping[i] = eig_map[pos]
            for tag, i in con_phase.items():
                mapping[i] = sym_phase[iso[tag]]
            image = {(mapping[i], mapping[j], mapping[k]) for i, j, k in concrete_triples}
            if image == symbolic_triples:
                zero_image = {
                    (mapping[i], mapping[j]) for i, j in concrete.zero_pairs
                }
                if zero_image == set(symbolic.zero_pairs):
                    return True
    return False


def _group_from_symbolic(symbolic):
    """Extract the group table back out of a symbolic correlation table."""
    phase_idx = [i for i, c in enumerate(symbolic.classification) if c[0] == "phase"]
    pos = {i: t for t, i in enumerate(phase_idx)}
    n = len(phase_idx)
    prod = {}
    for (i, j, k) in symbolic.triples:
        if i in pos and j in pos and k in pos:
            prod[(pos[i], pos[j])] = pos[k]
    # triples store the conjugated product; invert through the stored table
    # by solving for the identity first: e * e -> e since e is self-inverse
    # in every abelian group of exponent <= 4 used here.  Reconstruct by
    # noting (s, t) -> inv(s * t): apply the map twice to undo inversion.
    inv_table = [[prod[(s, t)] for t in range(n)] for s in range(n)]
    # find identity: the unique e with inv_table[e][t] = inv(t) a bijection
    # and inv_table[t][inv_table[e][t]] = e ... simpler: identity of the
    # underlying group satisfies inv_table[e][e] = e.
    candidates = [e for e in range(n) if inv_table[e][e] == e]
    for e in candidates:
        inv_map = {t: inv_table[e][t] for t in range(n)}
        if sorted(inv_map.values()) != list(range(n)):
            continue
        table = tuple(
            tuple(inv_map[inv_table[s][t]] for t in range(n)) for s in range(n)
        )
        try:
            classify_table(table)
        except Exception:
            continue
        return AbelianGroupSpec(
            elements=tuple(f"u{t}" for t in range(n)), table=table, identity=e
        )
    raise ValueError("symbolic table does not encode a group")
