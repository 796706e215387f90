"""Observables as commutative isometric dagger Frobenius comonoids.

An observable is a copying map delta: X -> X (x) X with its erasing counit
epsilon: X -> I.  This module checks the defining axioms, finds eigenstates
and unbiased states, builds the phase group under the induced multiplication,
derives the self-dual compact structure (and with it conjugates and
transposes), lifts observables along tensor products, and implements the
spider normal form together with its randomised equality test.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import diagrams
from .groups import classify_table, validate_group_table
from .morphisms import (
    Morphism,
    ShapeError,
    TheoryObject,
    equal_up_to_phase,
    identity,
    inner,
    leg_permutation,
    scalar_morphism,
    zero_morphism,
)
from .scalars import CycloScalar, RingError


class ObservableAxiomError(ValueError):
    """A claimed observable fails one of its defining axioms."""


@dataclass(frozen=True)
class Observable:
    object: TheoryObject
    delta: Morphism
    epsilon: Morphism
    label: str = ""

    @property
    def ring(self):
        return self.delta.ring

    @property
    def base_dim(self):
        return self.object.base_dim

    def id(self):
        return identity(self.object, self.ring)

    def wire_swap(self):
        return leg_permutation(2, self.base_dim, self.ring, (1, 0), self.object.power)

    def dim_scalar(self):
        """epsilon . epsilon-dagger, the dimension of the object as a scalar."""
        return (self.epsilon @ self.epsilon.dag()).scalar_value()

    def sqrt_dim_scalar(self):
        """An exact square root of the dimension scalar."""
        d = self.dim_scalar()
        if isinstance(d, CycloScalar):
            value = d.rational_value()
            if value <= 0:
                raise RingError("dimension scalar must be positive")
            num = value.numerator
            t = num.bit_length() - 1
            if value != 2**t:
                raise RingError(f"no exact square root for dimension {value}")
            return CycloScalar.sqrt2().times_sqrt2_pow(t - 1)
        return d  # boolean dimension is 0 or 1 and is its own square root

    def rescaled(self, state):
        """The state scaled to squared length dim(X) (used on the fly)."""
        return state.scale(self.sqrt_dim_scalar())

    def to_json(self):
        return {
            "label": self.label,
            "delta": self.delta.to_json(),
            "epsilon": self.epsilon.to_json(),
        }


@dataclass
class ObservableReport:
    coassociative: bool
    cocommutative: bool
    counit: bool
    isometry: bool
    frobenius: bool
    spider_trials: int = 0
    spider_failures: int = 0

    @property
    def ok(self):
        return (
            self.coassociative
            and self.cocommutative
            and self.counit
            and self.isometry
            and self.frobenius
            and self.spider_failures == 0
        )

    def failed_axioms(self):
        names = ("coassociative", "cocommutative", "counit", "isometry", "frobenius")
        out = [n for n in names if not getattr(self, n)]
        if self.spider_failures:
            out.append("spider")
        return out


def check_observable(delta, epsilon, spider_trials=0, seed=0):
    """Axiom-by-axiom verification of a candidate (delta, epsilon) pair."""
    X = delta.dom
    if delta.cod.power != 2 * X.power:
        raise ShapeError("delta must map X to X (x) X")
    if epsilon.dom != X or epsilon.cod.power != 0:
        raise ShapeError("epsilon must map X to the unit object")
    ring = delta.ring
    idx = identity(X, ring)
    sw = leg_permutation(2, X.base_dim, ring, (1, 0), X.power)

    coassoc = (delta.tensor(idx)) @ delta == (idx.tensor(delta)) @ delta
    cocomm = sw @ delta == delta
    counit = (epsilon.tensor(idx)) @ delta == idx and (idx.tensor(epsilon)) @ delta == idx
    isometry = delta.dag() @ delta == idx
    middle = delta @ delta.dag()
    frob = (
        (idx.tensor(delta.dag())) @ (delta.tensor(idx)) == middle
        and (delta.dag().tensor(idx)) @ (idx.tensor(delta)) == middle
    )
    report = ObservableReport(coassoc, cocomm, counit, isometry, frob)
    if spider_trials and report.ok:
        obs = Observable(X, delta, epsilon)
        spider = spider_property_test(
            obs, trials=spider_trials, seed=seed, shapes=((1, 1), (2, 1), (1, 2), (2, 2))
        )
        report.spider_trials = spider.trials_run
        report.spider_failures = len(spider.failures)
    return report


def validated_observable(delta, epsilon, label=""):
    report = check_observable(delta, epsilon)
    if not report.ok:
        raise ObservableAxiomError(
            f"observable axioms fail: {', '.join(report.failed_axioms())}"
        )
    return Observable(delta.dom, delta, epsilon, label)


# -- compact structure, conjugates, transposes --------------------------------


@dataclass(frozen=True)
class CompactStructure:
    object: TheoryObject
    eta: Morphism  # I -> X (x) X

    @classmethod
    def from_observable(cls, obs):
        eta = obs.delta @ obs.epsilon.dag()
        structure = cls(obs.object, eta)
        if not structure.is_valid():
            raise ObservableAxiomError("induced cup fails the snake or symmetry law")
        return structure

    def is_valid(self):
        ring = self.eta.ring
        idx = identity(self.object, ring)
        sw = leg_permutation(2, self.object.base_dim, ring, (1, 0), self.object.power)
        snake = (self.eta.dag().tensor(idx)) @ (idx.tensor(self.eta)) == idx
        return snake and sw @ self.eta == self.eta

    def lifted(self, n):
        """The induced compact structure on the n-fold tensor power.

        Pairs leg i of the first group with leg i of the second, which is
        valid because eta is symmetric.
        """
        if n == 0:
            return CompactStructure(
                TheoryObject(0, self.object.base_dim),
                scalar_morphism(self.eta.ring.one(), self.object.base_dim),
            )
        out = self.eta
        for _ in range(n - 1):
            out = out.tensor(self.eta)
        p = self.object.power
        # legs currently (a1 b1 a2 b2 ...): regroup to (a1 a2 ... b1 b2 ...)
        perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
        shuffle = leg_permutation(2 * n, self.object.base_dim, self.eta.ring, perm, p)
        return CompactStructure(
            TheoryObject(n * p, self.object.base_dim), shuffle @ out
        )


def transpose(f, compact_dom, compact_cod):
    """f*: B -> A through the cups on A = dom(f) and B = cod(f)."""
    ring = f.ring
    id_a = identity(f.dom, ring)
    id_b = identity(f.cod, ring)
    eta_a = compact_dom.eta
    eta_b = compact_cod.eta
    return (eta_b.dag().tensor(id_a)) @ (id_b.tensor(f).tensor(id_a)) @ (
        id_b.tensor(eta_a)
    )


def conjugate(f, compact_dom, compact_cod):
    """f_*: A -> B, equal to the dagger of the transpose."""
    ring = f.ring
    id_a = identity(f.dom, ring)
    id_b = identity(f.cod, ring)
    eta_a = compact_dom.eta
    eta_b = compact_cod.eta
    return (eta_a.dag().tensor(id_b)) @ (id_a.tensor(f.dag()).tensor(id_b)) @ (
        id_a.tensor(eta_b)
    )


def conjugate_state(x, compact):
    """Conjugate of a state I -> X: (x-dagger (x) 1) . eta."""
    ring = x.ring
    id_x = identity(x.cod, ring)
    return (x.dag().tensor(id_x)) @ compact.eta


# -- eigenstates, the induced multiplication, unbiased states ------------------


def multiply(obs, s, t):
    """The induced commutative product delta-dagger . (s (x) t) on states."""
    return obs.delta.dag() @ s.tensor(t)


def is_eigenstate(obs, x, compact=None):
    """delta copies x, epsilon erases it, and x is self-conjugate."""
    if x.cod != obs.object or x.dom.power != 0:
        return False
    if obs.delta @ x != x.tensor(x):
        return False
    if (obs.epsilon @ x).scalar_value() != obs.ring.one():
        return False
    compact = compact or CompactStructure.from_observable(obs)
    return conjugate_state(x, compact) == x


def eigenstates(obs, catalog):
    """All eigenstates among the phase classes of the catalog states.

    Each catalog state is tried at every global phase because the eigenstate
    conditions pin the phase exactly.
    """
    compact = CompactStructure.from_observable(obs)
    found = []
    for s in catalog:
        for u in obs.ring.phase_units():
            x = s.scale(u)
            if is_eigenstate(obs, x, compact):
                found.append(x)
                break
    return found


def eigenstates_by_search(obs, coeff_bound=1, max_k=1):
    """Independent eigenstate solver: exhaust a small coefficient cell.

    The copying equation is quadratic in the state, so instead of a linear
    solve this enumerates every state whose entries have coefficients within
    the bound, filters by the exact eigenstate conditions, and deduplicates.
    Only meaningful for the cyclotomic ring on low-dimensional objects.
    """
    if obs.ring is not CycloScalar:
        raise ValueError("search solver is for the cyclotomic ring")
    span = range(-coeff_bound, coeff_bound + 1)
    cell = set()
    for a0 in span:
        for a1 in span:
            for a2 in span:
                for a3 in span:
                    for k in range(max_k + 1):
                        cell.add(CycloScalar((a0, a1, a2, a3), k))
    cell = sorted(cell, key=CycloScalar.sort_key_of)
    dim = obs.object.dim
    if dim > 2:
        raise ValueError("search solver only supports two-dimensional objects")
    compact = CompactStructure.from_observable(obs)
    from .morphisms import state_from_entries

    found = []
    for a in cell:
        for b in cell:
            x = state_from_entries(obs.object, (a, b))
            if x.is_zero_morphism():
                continue
            if is_eigenstate(obs, x, compact):
                if x not in found:
                    found.append(x)
    return found


def is_unbiased(obs, psi, compact=None):
    """psi has squared length dim(X) and conj(psi) * psi equals the unit."""
    if psi.cod != obs.object or psi.dom.power != 0:
        return False
    if inner(psi, psi) != obs.dim_scalar():
        return False
    compact = compact or CompactStructure.from_observable(obs)
    return multiply(obs, conjugate_state(psi, compact), psi) == obs.epsilon.dag()


def unbiased_states(obs, catalog):
    """Catalog states that are unbiased for obs, rescaled to length sqrt(dim).

    Canonically ordered: the phase class of the counit state leads, the rest
    follow in matrix order.
    """
    compact = CompactStructure.from_observable(obs)
    out = []
    for s in catalog:
        psi = obs.rescaled(s)
        if is_unbiased(obs, psi, compact):
            out.append(psi)
    unit = obs.epsilon.dag()
    from .morphisms import equal_up_to_phase as _eq_phase

    lead = [u for u in out if _eq_phase(u, unit)]
    rest = sorted((u for u in out if not _eq_phase(u, unit)), key=Morphism.sort_key)
    return lead + rest


class PhaseClosureError(ValueError):
    """The induced product does not close on the unbiased states."""


@dataclass(frozen=True)
class PhaseGroup:
    elements: tuple
    table: tuple
    identity_index: int
    iso_class: str
    invariant_factors: tuple

    @property
    def order(self):
        return len(self.elements)

    def inverse(self, i):
        for j in range(self.order):
            if self.table[i][j] == self.identity_index:
                return j
        raise PhaseClosureError("missing inverse")

    def element_order(self, i):
        x, n = i, 1
        while x != self.identity_index:
            x = self.table[x][i]
            n += 1
        return n

    def to_json(self):
        return {
            "elements": [e.to_json() for e in self.elements],
            "table": [list(r) for r in self.table],
            "iso": self.iso_class,
        }


def phase_group(obs, catalog):
    """The abelian group of unbiased-state phase classes under the product.

    Elements are the stored unbiased representatives; products are matched
    back to representatives up to a global phase, realising the quotient by
    phases as a comparison rather than as a datatype.
    """
    elements = unbiased_states(obs, catalog)
    unit = obs.epsilon.dag()

    def class_index(state):
        for i, e in enumerate(elements):
            if equal_up_to_phase(state, e):
                return i
        return None

    identity_index = class_index(unit)
    if identity_index is None:
        raise PhaseClosureError("the counit state is not among the unbiased states")
    table = []
    for a in elements:
        row = []
        for b in elements:
            k = class_index(multiply(obs, a, b))
            if k is None:
                raise PhaseClosureError(
                    "product of unbiased states left the unbiased set"
                )
            row.append(k)
        table.append(tuple(row))
    table = tuple(table)
    validate_group_table(table)
    factors, label = classify_table(table)
    return PhaseGroup(
        elements=tuple(elements),
        table=table,
        identity_index=identity_index,
        iso_class=label,
        invariant_factors=factors,
    )


def unbiased_action(obs, psi):
    """The action delta-dagger . (psi (x) 1), unitary exactly when psi is unbiased."""
    return obs.delta.dag() @ psi.tensor(obs.id())


def is_unitary(m):
    if m.dom != m.cod:
        return False
    idm = identity(m.dom, m.ring)
    return m.dag() @ m == idm and m @ m.dag() == idm


# -- tensor lifting -------------------------------------------------------------


def lift_tensor(o1, o2):
    """The observable canonically induced on the tensor of two carriers."""
    if o1.base_dim != o2.base_dim:
        raise ShapeError("cannot lift over different base dimensions")
    a, b = o1.object.power, o2.object.power
    ring = o1.ring
    base = o1.base_dim
    # (delta1 (x) delta2) then reshuffle A A B B -> A B A B
    perm = (
        list(range(a))
        + list(range(2 * a, 2 * a + b))
        + list(range(a, 2 * a))
        + list(range(2 * a + b, 2 * a + 2 * b))
    )
    shuffle = leg_permutation(2 * (a + b), base, ring, perm, 1) if a + b else None
    delta = o1.delta.tensor(o2.delta)
    if shuffle is not None:
        delta = shuffle @ delta
    epsilon = o1.epsilon.tensor(o2.epsilon)
    return validated_observable(delta, epsilon, label=f"{o1.label}*{o2.label}")


# -- spiders ---------------------------------------------------------------------


def spider_canonical(m, n, obs):
    """The canonical spider with m inputs and n outputs.

    Built as the n-fold comultiplication after the m-fold multiplication;
    the (0, 0) case is the dimension scalar.
    """
    ring = obs.ring
    idx = obs.id()

    def mult(k):
        if k == 0:
            return obs.epsilon.dag()
        out = idx
        for _ in range(k - 1):
            out = obs.delta.dag() @ (out.tensor(idx))
        return out

    def comult(k):
        if k == 0:
            return obs.epsilon
        out = idx
        for _ in range(k - 1):
            out = (out.tensor(idx)) @ obs.delta
        return out

    return comult(n) @ mult(m)


class _SpiderBinding:
    """Just enough of a theory binding to evaluate delta/epsilon diagrams."""

    def __init__(self, obs):
        self.delta = obs.delta
        self.epsilon = obs.epsilon
        self.ring = obs.ring
        self.base_dim = obs.base_dim

    def generator(self, name):
        raise KeyError(f"spider diagrams have no generator {name!r}")


@dataclass
class SpiderReport:
    shapes: tuple
    trials_per_shape: int
    trials_run: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def spider_property_test(obs, trials, seed, shapes=None, max_gens=8, threads=1):
    """Random connected diagrams with fixed boundaries all equal the spider.

    Trial results merge deterministically (per-trial derived seeds) so the
    report does not depend on execution order.
    """
    if shapes is None:
        shapes = tuple((m, n) for m in range(4) for n in range(4))
    binding = _SpiderBinding(obs)
    max_width = 4 if obs.base_dim == 2 else 3
    canonical = {shape: spider_canonical(shape[0], shape[1], obs) for shape in shapes}

    def run_trial(shape, t):
        m, n = shape
        rng = random.Random(f"{seed}:spider:{m}:{n}:{t}")
        term = diagrams.random_connected_term(
            m, n, rng, max_gens=max_gens, max_width=max(max_width, m, n)
        )
        value = diagrams.evaluate(term, binding)
        return (shape, t, term) if value != canonical[shape] else None

    jobs = [(shape, t) for shape in shapes for t in range(trials)]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda j: run_trial(*j), jobs))
    else:
        results = [run_trial(*j) for j in jobs]
    failures = sorted(
        (r for r in results if r is not None), key=lambda r: (r[0], r[1])
    )
    return SpiderReport(
        shapes=tuple(shapes),
        trials_per_shape=trials,
        trials_run=len(jobs),
        failures=failures,
    )


# -- state catalogs ---------------------------------------------------------------


@dataclass(frozen=True)
class StateClassification:
    eigen_of: str | None
    eigen_rep: Morphism | None
    unbiased_for: tuple


@dataclass(frozen=True)
class StateCatalog:
    states: tuple
    observables: tuple
    classification: tuple  # parallel to states

    @property
    def eigen(self):
        out = {o.label: [] for o in self.observables}
        for cls in self.classification:
            if cls.eigen_of is not None:
                out[cls.eigen_of].append(cls.eigen_rep)
        return out

    @property
    def unbiased(self):
        out = {o.label: [] for o in self.observables}
        for state, cls in zip(self.states, self.classification):
            for label in cls.unbiased_for:
                out[label].append(state)
        return out

    def is_partition(self):
        """Every state is an eigenstate of exactly one observable and
        unbiased for all the others."""
        n_others = len(self.observables) - 1
        return all(
            cls.eigen_of is not None and len(cls.unbiased_for) == n_others
            for cls in self.classification
        )


def build_state_catalog(observables, states):
    """Classify each state against each observable."""
    compacts = {o.label: CompactStructure.from_observable(o) for o in observables}
    classifications = []
    for s in states:
        eigen_of = None
        eigen_rep = None
        unbiased_for = []
        for o in observables:
            matched = False
            for u in o.ring.phase_units():
                x = s.scale(u)
                if is_eigenstate(o, x, compacts[o.label]):
                    matched = True
                    eigen_rep = x
                    break
            if matched:
                if eigen_of is not None:
                    raise ObservableAxiomError(
                        "state is an eigenstate of two observables"
                    )
                eigen_of = o.label
            elif is_unbiased(o, o.rescaled(s), compacts[o.label]):
                unbiased_for.append(o.label)
        classifications.append(
            StateClassification(eigen_of, eigen_rep, tuple(unbiased_for))
        )
    return StateCatalog(tuple(states), tuple(observables), tuple(classifications))
