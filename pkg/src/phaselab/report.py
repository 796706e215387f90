"""The full comparison pipeline and its machine-readable report.

Builds both theories, enumerates states and observables, verifies the
mutual-unbiasedness conditions, extracts phase groups, constructs the GHZ
states, checks the correlation tables against their group-generated symbolic
form, and runs all three local-realism decision routes.  Every number in the
report is produced by one of those operations; the JSON is byte-reproducible
for a fixed seed and version (timing is only printed in the text rendering,
never stored in the JSON).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import __version__
from .ghz import (
    correlation_triples,
    correlations_from_group,
    ghz_from_observable,
    group_spec_from_phase_group,
    observable_from_ghz,
    tables_isomorphic,
    verify_ghz,
)
from .lhv import (
    born_table,
    coarsen_to_possibility,
    lhv_feasibility,
    mermin_certificate,
    possibilistic_lhv,
    uniform_lift,
    verify_parity_certificate,
)
from .morphisms import dagger_smc_law_suite, equal_up_to_phase
from .observables import phase_group, spider_property_test
from .theories import (
    build_theory,
    enumerate_observables,
    enumerate_states,
    unit_state_catalog,
    verify_muqt,
)

EXPECTED = {
    "stab": {
        "state_counts": {1: 6, 2: 60},
        "phase_group": "Z4",
        "lhv_probabilistic": "infeasible",
        "lhv_possibilistic": "infeasible",
        "mermin_certificate": True,
    },
    "spek": {
        "state_counts": {1: 6, 2: 60},
        "phase_group": "Z2xZ2",
        "lhv_probabilistic": "feasible",
        "lhv_possibilistic": "feasible",
        "mermin_certificate": False,
    },
}


@dataclass
class ComparisonReport:
    seed: int
    data: dict
    checks: list  # (check id, ok)
    runtime_seconds: float = 0.0

    @property
    def ok(self):
        return all(ok for _, ok in self.checks)

    def to_json_bytes(self):
        payload = {
            "schema": "phaselab-report/1",
            "version": __version__,
            "seed": self.seed,
            "theories": self.data,
            "checks": [{"id": cid, "ok": ok} for cid, ok in self.checks],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()

    def render_text(self):
        lines = [
            f"phaselab {__version__} comparison report (seed {self.seed})",
            "",
        ]
        for name, block in self.data.items():
            if name.startswith("_"):
                continue
            lines.append(f"[{name}]")
            lines.append(f"  states by arity     : {block['state_counts']}")
            lines.append(f"  observables         : {block['observable_count']} "
                         f"({', '.join(block['observable_labels'])})")
            lines.append(f"  mutually unbiased   : {block['muqt_ok']}")
            lines.append(f"  phase groups        : {block['phase_groups']}")
            lines.append(f"  ghz axioms          : {block['ghz_axioms_ok']}, "
                         f"round-trip {block['ghz_roundtrip_ok']}")
            lines.append(f"  correlation digest  : {block['correlation_digest'][:16]}…")
            lines.append(f"  group-determined    : {block['correlations_match_group']}")
            lines.append(f"  lhv (probabilistic) : {block['lhv_probabilistic']}"
                         f" (verified {block['lhv_probabilistic_verified']})")
            lines.append(f"  lhv (possibilistic) : {block['lhv_possibilistic']}")
            lines.append(f"  parity certificate  : {block['mermin_certificate']}")
            lines.append("")
        lines.append(f"spider suite         : {self.data_meta('spider')}")
        lines.append(f"dagger-SMC law suite : {self.data_meta('dagger_smc')}")
        lines.append("")
        n_ok = sum(1 for _, ok in self.checks if ok)
        lines.append(f"checks passed        : {n_ok}/{len(self.checks)}")
        for cid, ok in self.checks:
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {cid}")
        lines.append("")
        lines.append(f"total runtime        : {self.runtime_seconds:.1f}s")
        return "\n".join(lines)

    def data_meta(self, key):
        return self.data.get("_suites", {}).get(key, "not run")


def run_full_report(seed, output_path=None, threads=1, spider_trials=200,
                    smc_pairs=500):
    """Execute every comparison check and assemble the report."""
    start = time.time()
    checks = []
    blocks = {}

    def check(cid, ok):
        checks.append((cid, bool(ok)))
        return ok

    suite_meta = {}
    for name in ("stab", "spek"):
        expected = EXPECTED[name]
        binding = build_theory(name)
        spaces = {n: enumerate_states(binding, n) for n in (1, 2)}
        counts = {n: sp.count for n, sp in spaces.items()}
        check(
            f"{name}:state-counts",
            counts == expected["state_counts"]
            and all(sp.fixpoint_reached and sp.depth <= 12 for sp in spaces.values()),
        )

        observables = enumerate_observables(binding)
        catalog = unit_state_catalog(binding)
        check(f"{name}:three-observables", len(observables) == 3)

        muqt = verify_muqt(binding, observables, catalog)
        check(f"{name}:muqt", muqt.ok)

        groups = {o.label: phase_group(o, catalog) for o in observables}
        check(
            f"{name}:phase-groups",
            all(g.iso_class == expected["phase_group"] for g in groups.values()),
        )

        ghz_ok = True
        roundtrip_ok = True
        for o in observables:
            g = ghz_from_observable(o)
            rep = verify_ghz(g)
            ghz_ok = ghz_ok and rep.ok
            back = observable_from_ghz(g)
            roundtrip_ok = roundtrip_ok and (
                back.delta == o.delta and back.epsilon == o.epsilon
            )
        check(f"{name}:ghz-axioms", ghz_ok)
        check(f"{name}:ghz-roundtrip", roundtrip_ok)

        z = observables[0]
        ghz = ghz_from_observable(z)
        pg = groups[z.label]
        ct = correlation_triples(ghz, z, catalog)
        symbolic = correlations_from_group(group_spec_from_phase_group(pg))
        match = tables_isomorphic(ct, symbolic, pg)
        check(f"{name}:correlations-group-determined", match)

        if name == "stab":
            prob_table = born_table(ghz, observables, catalog, kind="prob")
            poss_table = coarsen_to_possibility(prob_table)
        else:
            poss_table = born_table(ghz, observables, catalog, kind="poss")
            prob_table = uniform_lift(poss_table)

        lp = lhv_feasibility(prob_table)
        check(
            f"{name}:lhv-probabilistic",
            lp.verdict == expected["lhv_probabilistic"] and lp.verified,
        )
        poss = possibilistic_lhv(poss_table)
        check(f"{name}:lhv-possibilistic", poss.verdict == expected["lhv_possibilistic"])

        cert = mermin_certificate(ct, pg)
        cert_ok = (cert is not None) == expected["mermin_certificate"]
        if cert is not None:
            cert_ok = cert_ok and verify_parity_certificate(cert, ct)
        check(f"{name}:mermin-certificate", cert_ok)

        blocks[name] = {
            "state_counts": {str(k): v for k, v in counts.items()},
            "fixpoint_depths": {str(n): sp.depth for n, sp in spaces.items()},
            "observable_count": len(observables),
            "observable_labels": [o.label for o in observables],
            "muqt_ok": muqt.ok,
            "muqt_conditions": muqt.conditions,
            "phase_groups": {lbl: g.iso_class for lbl, g in groups.items()},
            "ghz_axioms_ok": ghz_ok,
            "ghz_roundtrip_ok": roundtrip_ok,
            "correlation_digest": ct.digest(),
            "correlation_triples": len(ct.triples),
            "correlation_forbidden": len(ct.forbidden),
            "correlations_match_group": match,
            "lhv_probabilistic": lp.verdict,
            "lhv_probabilistic_verified": lp.verified,
            "lhv_possibilistic": poss.verdict,
            "mermin_certificate": cert is not None,
        }

        spider = spider_property_test(
            z, trials=spider_trials, seed=seed, threads=threads
        )
        check(f"{name}:spider-theorem", spider.ok)
        suite_meta[f"spider:{name}"] = (
            f"{spider.trials_run} diagrams, {len(spider.failures)} failures"
        )

        smc = dagger_smc_law_suite(binding.ring, binding.base_dim, smc_pairs, seed)
        check(f"{name}:dagger-smc-laws", smc.ok)
        suite_meta[f"dagger_smc:{name}"] = (
            f"{smc.checked} law checks, {len(smc.failures)} failures"
        )

    blocks["_suites"] = {
        "spider": "; ".join(suite_meta[k] for k in sorted(suite_meta) if k.startswith("spider")),
        "dagger_smc": "; ".join(
            suite_meta[k] for k in sorted(suite_meta) if k.startswith("dagger_smc")
        ),
    }

    report = ComparisonReport(seed=seed, data=blocks, checks=checks)
    report.runtime_seconds = time.time() - start
    if output_path:
        with open(output_path, "wb") as fh:
            fh.write(report.to_json_bytes())
    return report
