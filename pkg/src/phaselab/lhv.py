"""Local-realist representability of three-party GHZ statistics.

Three decision routes, all exact:

* probabilistic: a rational linear-feasibility problem over deterministic
  hidden states, solved by the exact phase-1 simplex; feasible instances
  return a measure, infeasible ones a Farkas witness, both re-verified
  independently of the solver;
* possibilistic: the support-cover condition for boolean tables, decided by
  exhaustive scan over the deterministic assignments;
* parity: a GF(2) certificate generator that extracts parity constraints
  from the forbidden triples of a correlation table and derives the
  contradiction when the system is inconsistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .morphisms import identity
from .scalars import BoolScalar, squared_modulus
from . import simplex


@dataclass(frozen=True)
class BornTable:
    """Outcome statistics for every measurement context.

    contexts: tuples of observable indices, one per site.
    outcomes[context][outcome]: probability (Fraction) or possibility (bool),
    with outcomes indexed by per-site eigenstate index tuples.
    """

    n_sites: int
    observable_labels: tuple
    eigen_labels: tuple  # per observable: labels of its two eigenstates
    contexts: tuple
    outcomes: dict
    kind: str  # "prob" or "poss"

    def context_label(self, context):
        return "".join(self.observable_labels[i] for i in context)


class BornTableError(ValueError):
    pass


def born_table(g, observables, catalog, kind="prob"):
    """Measurement statistics of a three-party state for every context.

    Eigenstates enter at length sqrt(dim); probabilistic tables renormalise
    each context to total one so that state-normalisation conventions never
    leak into probabilities.
    """
    from .observables import eigenstates
    from .ghz import _eigen_sort_key
    from .morphisms import equal_up_to_phase

    n_sites = 3
    reference = observables[0].epsilon.dag()  # pins outcome bit zero
    eigen = []
    for o in observables:
        eig = sorted(eigenstates(o, catalog), key=_eigen_sort_key)
        if len(eig) != 2:
            raise BornTableError(f"observable {o.label} must have two eigenstates")
        scaled = [o.rescaled(x) for x in eig]
        # the phase class of the first observable's counit state is always
        # outcome zero where it appears
        scaled.sort(
            key=lambda s: (
                0 if equal_up_to_phase(s, reference) else 1,
                _eigen_sort_key(s),
            )
        )
        eigen.append(scaled)

    n_obs = len(observables)
    contexts = tuple(product(range(n_obs), repeat=n_sites))
    outcomes = {}
    for ctx in contexts:
        raw = {}
        for bits in product(range(2), repeat=n_sites):
            states = [eigen[ctx[s]][bits[s]] for s in range(n_sites)]
            effect = states[0]
            for st in states[1:]:
                effect = effect.tensor(st)
            amp = (effect.dag() @ g.psi).scalar_value()
            raw[bits] = amp
        if kind == "poss":
            outcomes[ctx] = {b: not a.is_zero() for b, a in raw.items()}
            if not any(outcomes[ctx].values()):
                raise BornTableError(f"context {ctx} has no possible outcome")
        else:
            weights = {b: squared_modulus(a) for b, a in raw.items()}
            total = sum(weights.values())
            if total == 0:
                raise BornTableError(f"context {ctx} has all-zero outcomes")
            outcomes[ctx] = {b: w / total for b, w in weights.items()}
    return BornTable(
        n_sites=n_sites,
        observable_labels=tuple(o.label for o in observables),
        eigen_labels=tuple(
            tuple(f"{o.label}{i}" for i in range(2)) for o in observables
        ),
        contexts=contexts,
        outcomes=outcomes,
        kind="poss" if kind == "poss" else "prob",
    )


def uniform_lift(table):
    """Possibilistic table lifted to uniform probabilities over the possible."""
    if table.kind != "poss":
        raise BornTableError("uniform lift expects a possibilistic table")
    outcomes = {}
    for ctx, row in table.outcomes.items():
        possible = [b for b, ok in row.items() if ok]
        p = Fraction(1, len(possible))
        outcomes[ctx] = {b: (p if ok else Fraction(0)) for b, ok in row.items()}
    return BornTable(
        table.n_sites,
        table.observable_labels,
        table.eigen_labels,
        table.contexts,
        outcomes,
        "prob",
    )


def coarsen_to_possibility(table):
    """Probabilities collapsed to possibility bits (p > 0)."""
    if table.kind != "prob":
        raise BornTableError("coarsening expects a probabilistic table")
    outcomes = {
        ctx: {b: p > 0 for b, p in row.items()} for ctx, row in table.outcomes.items()
    }
    return BornTable(
        table.n_sites,
        table.observable_labels,
        table.eigen_labels,
        table.contexts,
        outcomes,
        "poss",
    )


# -- hidden-state machinery ---------------------------------------------------


@dataclass
class LHVInstance:
    """The linear system over deterministic per-site outcome assignments.

    A hidden state assigns one eigenstate index to every observable at every
    site; the constraint matrix has one equality per context-outcome pair
    plus the normalisation row.
    """

    table: BornTable
    n_obs: int
    assignments: tuple  # all hidden states as tuples of per-site tuples
    rows: list
    rhs: list
    row_tags: list

    @property
    def n_hidden(self):
        return len(self.assignments)


def build_instance(table):
    n_obs = len(table.observable_labels)
    n_sites = table.n_sites
    site_assignments = tuple(product(range(2), repeat=n_obs))
    assignments = tuple(product(site_assignments, repeat=n_sites))
    index = {xi: i for i, xi in enumerate(assignments)}
    n = len(assignments)
    rows = []
    rhs = []
    tags = []
    for ctx in table.contexts:
        for bits, p in sorted(table.outcomes[ctx].items()):
            row = [0] * n
            for xi, i in index.items():
                induced = tuple(xi[s][ctx[s]] for s in range(n_sites))
                if induced == bits:
                    row[i] = 1
            rows.append(row)
            rhs.append(Fraction(p) if not isinstance(p, bool) else p)
            tags.append((ctx, bits))
    rows.append([1] * n)
    rhs.append(Fraction(1))
    tags.append(("normalisation", ()))
    return LHVInstance(table, n_obs, assignments, rows, rhs, tags)


@dataclass
class LHVCertificate:
    verdict: str  # "feasible" or "infeasible"
    measure: dict | None = None  # hidden state tuple -> Fraction
    farkas: list | None = None  # Fraction per constraint row
    consistent_set: tuple | None = None  # possibilistic support
    uncovered: tuple | None = None  # (context, outcome) witness
    verified: bool = False
    pivots: int = 0
    row_tags: list | None = None

    @property
    def feasible(self):
        return self.verdict == "feasible"

    def to_json(self):
        from .scalars import rational_to_json

        data = {"verdict": self.verdict, "verified": self.verified}
        if self.measure is not None:
            data["measure"] = {
                "/".join(",".join(map(str, site)) for site in xi): rational_to_json(w)
                for xi, w in sorted(self.measure.items())
            }
        if self.farkas is not None:
            data["farkas"] = [rational_to_json(v) for v in self.farkas]
        if self.consistent_set is not None:
            data["consistent_assignments"] = len(self.consistent_set)
        if self.uncovered is not None:
            data["uncovered"] = [list(self.uncovered[0]), list(self.uncovered[1])]
        return data


def lhv_feasibility(table, instance=None):
    """Exact-rational feasibility of the probabilistic hidden-state system."""
    if table.kind != "prob":
        raise BornTableError("probabilistic mode needs rational probabilities")
    instance = instance or build_instance(table)
    result = simplex.solve_feasibility(instance.rows, instance.rhs)
    if result.feasible:
        measure = {
            instance.assignments[j]: w for j, w in sorted(result.solution.items())
        }
        ok = simplex.verify_solution(instance.rows, instance.rhs, result.solution)
        return LHVCertificate(
            "feasible", measure=measure, verified=ok, pivots=result.pivots,
            row_tags=instance.row_tags,
        )
    ok = simplex.verify_farkas(instance.rows, instance.rhs, result.farkas)
    return LHVCertificate(
        "infeasible", farkas=result.farkas, verified=ok, pivots=result.pivots,
        row_tags=instance.row_tags,
    )


def possibilistic_lhv(table):
    """Support-cover decision for boolean tables.

    The consistent set C holds every deterministic assignment whose induced
    outcome is possible in every context; the table has a local model exactly
    when C covers every possible outcome of every context.
    """
    if table.kind != "poss":
        raise BornTableError("possibilistic mode needs a boolean table")
    n_obs = len(table.observable_labels)
    n_sites = table.n_sites
    site_assignments = tuple(product(range(2), repeat=n_obs))
    assignments = tuple(product(site_assignments, repeat=n_sites))

    def induced(xi, ctx):
        return tuple(xi[s][ctx[s]] for s in range(n_sites))

    consistent = tuple(
        xi
        for xi in assignments
        if all(table.outcomes[ctx][induced(xi, ctx)] for ctx in table.contexts)
    )
    for ctx in table.contexts:
        for bits, ok in sorted(table.outcomes[ctx].items()):
            if not ok:
                continue
            if not any(induced(xi, ctx) == bits for xi in consistent):
                return LHVCertificate(
                    "infeasible",
                    consistent_set=consistent,
                    uncovered=(ctx, bits),
                    verified=True,
                )
    return LHVCertificate("feasible", consistent_set=consistent, verified=True)


# -- parity certificates ---------------------------------------------------------


@dataclass
class ParityCertificate:
    """An inconsistent GF(2) system extracted from forbidden triples.

    variables: one bit per (site, observable) pair.
    equations: (context, coefficient vector, parity bit).
    combination: indices of equations summing to the contradiction 0 = 1.
    """

    variables: tuple
    equations: tuple
    combination: tuple

    def to_json(self):
        return {
            "variables": ["{}@{}".format(o, s) for s, o in self.variables],
            "equations": [
                {
                    "context": list(ctx),
                    "coefficients": list(coeffs),
                    "parity": parity,
                }
                for ctx, coeffs, parity in self.equations
            ],
            "combination": list(self.combination),
        }


class MerminExtractionError(ValueError):
    pass


def mermin_certificate(ct, pg):
    """A GF(2) contradiction among the parity constraints, if one exists.

    The correlation table supplies the allowed and forbidden outcome triples;
    contexts range over the two observables whose eigenstates are phase-group
    elements.  Each context whose allowed outcomes form an affine parity set
    contributes one linear equation; Gaussian elimination over GF(2) finds an
    inconsistent combination or reports none.
    """
    phase_states = [i for i, c in enumerate(ct.classification) if c[0] == "phase"]
    if pg.order != 4 or len(phase_states) != 4:
        raise MerminExtractionError("needs a four-element phase group")

    # pair the phase states into the two non-copied observables via the
    # orthogonality recorded in the forbidden triples: i and j are partners
    # when (identity-ish context) ... derive from forbidden triple pattern:
    # two phase states are partners when every allowed completion of one is
    # forbidden for the other.
    partners = _phase_partners(ct, phase_states)
    identity_state = phase_states[pg.identity_index]
    first_pair = tuple(sorted((identity_state, partners[identity_state])))
    second_pair = tuple(
        sorted(i for i in phase_states if i not in first_pair)
    )
    if partners[second_pair[0]] != second_pair[1]:
        raise MerminExtractionError("phase states do not pair into observables")
    pairs = (first_pair, second_pair)  # index 0: contains the group identity

    allowed = {}
    for (i, j, k) in ct.triples:
        allowed[(i, j)] = k
    forbidden = set(ct.forbidden)

    variables = tuple((site, obs) for site in range(3) for obs in range(2))
    var_index = {v: i for i, v in enumerate(variables)}
    equations = []
    for ctx in product(range(2), repeat=3):
        states_per_site = [pairs[ctx[s]] for s in range(3)]
        table = {}
        undecided = False
        for bits in product(range(2), repeat=3):
            triple = tuple(states_per_site[s][bits[s]] for s in range(3))
            if triple in forbidden:
                table[bits] = False
            else:
                table[bits] = True
        allowed_bits = [b for b, ok in table.items() if ok]
        if len(allowed_bits) != 4:
            continue  # not a parity constraint
        parity = sum(allowed_bits[0]) % 2
        if not all(sum(b) % 2 == parity for b in allowed_bits):
            continue
        coeffs = [0] * len(variables)
        for s in range(3):
            coeffs[var_index[(s, ctx[s])]] = 1
        equations.append((ctx, tuple(coeffs), parity))

    combination = _gf2_inconsistency(equations, len(variables))
    if combination is None:
        return None
    return ParityCertificate(
        variables=variables,
        equations=tuple(equations),
        combination=tuple(combination),
    )


def _phase_partners(ct, phase_states):
    """Partner each phase state with the unique one it is 'orthogonal' to.

    Partners are detected from the forbidden set: k and k' are partners when
    for every pair (i, j) whose allowed completion is k, the triple
    (i, j, k') is forbidden and vice versa, with k' the unique such state.
    """
    allowed = {}
    for (i, j, k) in ct.triples:
        allowed[(i, j)] = k
    forbidden = set(ct.forbidden)
    partners = {}
    for k in phase_states:
        pairs_to_k = [p for p, kk in allowed.items() if kk == k]
        candidates = []
        for k2 in phase_states:
            if k2 == k:
                continue
            if all((p[0], p[1], k2) in forbidden for p in pairs_to_k):
                candidates.append(k2)
        if len(candidates) != 1:
            raise MerminExtractionError(
                f"phase state {k} has {len(candidates)} orthogonality partners"
            )
        partners[k] = candidates[0]
    return partners


def _gf2_inconsistency(equations, n_vars):
    """Indices of equations combining to 0 = 1, or None when consistent.

    Gaussian elimination over GF(2) with combination tracking.
    """
    rows = []
    for idx, (_, coeffs, parity) in enumerate(equations):
        mask = 0
        for i, c in enumerate(coeffs):
            if c:
                mask |= 1 << i
        history = 1 << idx
        rows.append([mask, parity, history])
    pivots = {}
    for row in rows:
        mask, parity, history = row
        while mask:
            low = mask & (-mask)
            if low in pivots:
                pm, pp, ph = pivots[low]
                mask ^= pm
                parity ^= pp
                history ^= ph
            else:
                pivots[low] = (mask, parity, history)
                mask = 0
                parity = None
        if parity == 1:
            return [i for i in range(len(equations)) if history >> i & 1]
    return None


def verify_parity_certificate(cert, ct):
    """Independent check of a parity certificate against the table.

    Every equation must be implied by the forbidden triples (each outcome
    violating it is forbidden) and the chosen combination must sum to the
    contradiction 0 = 1 over GF(2).
    """
    forbidden = set(ct.forbidden)
    phase_states = [i for i, c in enumerate(ct.classification) if c[0] == "phase"]
    partners = _phase_partners(ct, phase_states)
    seen = set()
    pairs = []
    for k in sorted(phase_states):
        if k in seen:
            continue
        pairs.append(tuple(sorted((k, partners[k]))))
        seen.update((k, partners[k]))
    if len(pairs) != 2:
        return False
    pair_of = {}
    for idx, pr in enumerate(pairs):
        for k in pr:
            pair_of[k] = idx

    # swap pair order to match the certificate contexts if needed: equations
    # know only indices 0/1 per site, so check both assignments.
    def implied(eq, pairs_ordered):
        ctx, coeffs, parity = eq
        states_per_site = [pairs_ordered[ctx[s]] for s in range(3)]
        for bits in product(range(2), repeat=3):
            triple = tuple(states_per_site[s][bits[s]] for s in range(3))
            if sum(bits) % 2 != parity and triple not in forbidden:
                return False
        return True

    for ordering in (tuple(pairs), tuple(reversed(pairs))):
        if all(implied(eq, ordering) for eq in cert.equations):
            break
    else:
        return False

    total_mask = 0
    total_parity = 0
    for i in cert.combination:
        _, coeffs, parity = cert.equations[i]
        mask = 0
        for b, c in enumerate(coeffs):
            if c:
                mask ^= 1 << b
        total_mask ^= mask
        total_parity ^= parity
    return total_mask == 0 and total_parity == 1
