"""Command-line front end.

Subcommands walk the pipeline: theory construction, state enumeration,
observable enumeration, phase groups, GHZ states, correlation tables,
local-realism verdicts, parity certificates, the spider test, and the full
comparison report.  Machine output is JSON (--json); the default rendering
is a small text table derived from the same data.

Exit codes: 0 success (and feasible / no certificate for lhv and mermin),
3 infeasible / certificate found, 2 report mismatch, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import DEFAULT_SEED, __version__


def _seed_from(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PHASELAB_SEED")
    return int(env) if env else DEFAULT_SEED


def _emit(args, data, text_lines):
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _theory_context(name):
    from .theories import build_theory, enumerate_observables, unit_state_catalog

    binding = build_theory(name)
    observables = enumerate_observables(binding)
    catalog = unit_state_catalog(binding)
    return binding, observables, catalog


def cmd_theory(args):
    from .theories import build_theory, enumerate_states, verify_muqt

    if args.action == "build":
        binding = build_theory(args.theory)
        data = {
            "name": binding.name,
            "base_dim": binding.base_dim,
            "scalar_ring": binding.ring.__name__,
            "single_system_gates": len(binding.single_system_gates()),
            "aliases": binding.aliases,
        }
        _emit(args, data, [
            f"theory {binding.name}: base dimension {binding.base_dim}, "
            f"{data['single_system_gates']} single-system gates "
            f"({data['scalar_ring']})",
        ])
        return 0
    if args.action == "states":
        binding = build_theory(args.theory)
        space = enumerate_states(binding, args.arity, args.depth_bound)
        data = {
            "theory": binding.name,
            "arity": space.arity,
            "count": space.count,
            "depth": space.depth,
            "fixpoint_reached": space.fixpoint_reached,
        }
        _emit(args, data, [
            f"{binding.name} arity {space.arity}: {space.count} states "
            f"(closure depth {space.depth}, fixpoint={space.fixpoint_reached})",
        ])
        return 0 if space.fixpoint_reached else 1
    if args.action == "verify-muqt":
        binding, observables, catalog = _theory_context(args.theory)
        rep = verify_muqt(binding, observables, catalog)
        data = {"theory": binding.name, "ok": rep.ok, "conditions": rep.conditions}
        lines = [f"{binding.name}: mutually unbiased qubit theory = {rep.ok}"]
        lines += [f"  {k}: {v}" for k, v in rep.conditions.items()]
        _emit(args, data, lines)
        return 0 if rep.ok else 1
    if args.action == "observables":
        return cmd_observables(args)
    raise ValueError(f"unknown theory action {args.action}")


def cmd_observables(args):
    from .observables import check_observable, eigenstates

    binding, observables, catalog = _theory_context(args.theory)
    rows = []
    for o in observables:
        rep = check_observable(o.delta, o.epsilon)
        eig = eigenstates(o, catalog)
        rows.append({
            "label": o.label,
            "axioms_ok": rep.ok,
            "eigenstates": len(eig),
        })
    data = {"theory": binding.name, "observables": rows}
    lines = [f"{binding.name}: {len(rows)} observables"] + [
        f"  {r['label']}: axioms={'pass' if r['axioms_ok'] else 'FAIL'}, "
        f"{r['eigenstates']} eigenstates"
        for r in rows
    ]
    _emit(args, data, lines)
    return 0


def cmd_phase_group(args):
    from .observables import phase_group

    binding, observables, catalog = _theory_context(args.theory)
    rows = {}
    for o in observables:
        pg = phase_group(o, catalog)
        rows[o.label] = {"iso": pg.iso_class, "order": pg.order}
    data = {"theory": binding.name, "phase_groups": rows}
    lines = [f"{binding.name} phase groups:"] + [
        f"  {lbl}: {info['iso']} (order {info['order']})" for lbl, info in rows.items()
    ]
    _emit(args, data, lines)
    return 0


def cmd_ghz(args):
    from .ghz import ghz_from_observable, observable_from_ghz, verify_ghz

    binding, observables, catalog = _theory_context(args.theory)
    rows = []
    for o in observables:
        g = ghz_from_observable(o)
        rep = verify_ghz(g)
        back = observable_from_ghz(g)
        rows.append({
            "label": o.label,
            "axioms": {
                "symmetric": rep.symmetric,
                "bell_marginal": rep.bell_marginal,
                "self_conjugate": rep.self_conjugate,
                "trace_out": rep.trace_out,
            },
            "roundtrip_ok": back.delta == o.delta and back.epsilon == o.epsilon,
        })
    data = {"theory": binding.name, "ghz": rows}
    lines = [f"{binding.name} GHZ structures:"] + [
        f"  {r['label']}: axioms "
        f"{'pass' if all(r['axioms'].values()) else r['axioms']}, "
        f"round-trip {'ok' if r['roundtrip_ok'] else 'FAIL'}"
        for r in rows
    ]
    _emit(args, data, lines)
    return 0


def cmd_correlations(args):
    from .ghz import (
        correlation_triples,
        correlations_from_group,
        ghz_from_observable,
        group_spec_from_phase_group,
        tables_isomorphic,
    )
    from .observables import phase_group

    binding, observables, catalog = _theory_context(args.theory)
    z = observables[0]
    g = ghz_from_observable(z)
    pg = phase_group(z, catalog)
    ct = correlation_triples(g, z, catalog)
    symbolic = correlations_from_group(group_spec_from_phase_group(pg))
    match = tables_isomorphic(ct, symbolic, pg)
    data = ct.to_json()
    data.update({
        "theory": binding.name,
        "digest": ct.digest(),
        "matches_group_table": match,
    })
    _emit(args, data, [
        f"{binding.name} GHZ correlations over {len(ct.labels)} states:",
        f"  triples   : {len(ct.triples)}",
        f"  forbidden : {len(ct.forbidden)}",
        f"  determined by phase group: {match}",
        f"  digest    : {ct.digest()}",
    ])
    return 0


def cmd_lhv(args):
    from .ghz import ghz_from_observable
    from .lhv import (
        born_table,
        coarsen_to_possibility,
        lhv_feasibility,
        possibilistic_lhv,
        uniform_lift,
    )

    binding, observables, catalog = _theory_context(args.theory)
    g = ghz_from_observable(observables[0])
    if binding.ring.__name__ == "CycloScalar":
        prob = born_table(g, observables, catalog, kind="prob")
        poss = coarsen_to_possibility(prob)
    else:
        poss = born_table(g, observables, catalog, kind="poss")
        prob = uniform_lift(poss)
    if args.mode == "prob":
        cert = lhv_feasibility(prob)
    else:
        cert = possibilistic_lhv(poss)
    data = {"theory": binding.name, "mode": args.mode}
    data.update(cert.to_json())
    _emit(args, data, [
        f"{binding.name} local-realist representability ({args.mode}): "
        f"{cert.verdict} (certificate verified: {cert.verified})",
    ])
    return 0 if cert.feasible else 3


def cmd_mermin(args):
    from .ghz import correlation_triples, ghz_from_observable
    from .lhv import mermin_certificate, verify_parity_certificate
    from .observables import phase_group

    binding, observables, catalog = _theory_context(args.theory)
    z = observables[0]
    g = ghz_from_observable(z)
    pg = phase_group(z, catalog)
    ct = correlation_triples(g, z, catalog)
    cert = mermin_certificate(ct, pg)
    if cert is None:
        _emit(args, {"theory": binding.name, "certificate": None}, [
            f"{binding.name}: parity system consistent, no certificate "
            f"(phase group {pg.iso_class})",
        ])
        return 0
    ok = verify_parity_certificate(cert, ct)
    data = {"theory": binding.name, "certificate": cert.to_json(), "verified": ok}
    _emit(args, data, [
        f"{binding.name}: GF(2) contradiction from {len(cert.combination)} "
        f"parity constraints (phase group {pg.iso_class}); verified: {ok}",
    ])
    return 3


def cmd_spider_test(args):
    from .observables import spider_property_test

    seed = _seed_from(args)
    binding, observables, catalog = _theory_context(args.theory)
    rep = spider_property_test(
        observables[0], trials=args.trials, seed=seed, threads=args.threads
    )
    data = {
        "theory": binding.name,
        "seed": seed,
        "trials_per_shape": rep.trials_per_shape,
        "diagrams": rep.trials_run,
        "failures": len(rep.failures),
    }
    _emit(args, data, [
        f"{binding.name} spider test: {rep.trials_run} random connected diagrams, "
        f"{len(rep.failures)} failures (seed {seed})",
    ])
    return 0 if rep.ok else 1


def cmd_report(args):
    from .report import run_full_report

    seed = _seed_from(args)
    report = run_full_report(
        seed,
        output_path=args.out,
        threads=args.threads,
        spider_trials=args.trials,
    )
    if args.json:
        sys.stdout.buffer.write(report.to_json_bytes())
        sys.stdout.write("\n")
    else:
        print(report.render_text())
    if args.out and not args.json:
        print(f"json written to {args.out}")
    return 0 if report.ok else 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="phaselab",
        description="exact comparison of stabiliser and toy-bit theories",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, theory=True):
        if theory:
            p.add_argument("--theory", choices=("stab", "spek"), required=True)
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)

    p_theory = sub.add_parser("theory", help="build and inspect a theory")
    tsub = p_theory.add_subparsers(dest="action", required=True)
    p_build = tsub.add_parser("build")
    p_build.add_argument("theory", choices=("stab", "spek"))
    common(p_build, theory=False)
    p_states = tsub.add_parser("states")
    common(p_states)
    p_states.add_argument("--arity", type=int, default=1)
    p_states.add_argument("--depth-bound", type=int, default=12)
    p_obs = tsub.add_parser("observables")
    common(p_obs)
    p_muqt = tsub.add_parser("verify-muqt")
    common(p_muqt)

    for name, fn in (
        ("observables", cmd_observables),
        ("phase-group", cmd_phase_group),
        ("ghz", cmd_ghz),
        ("correlations", cmd_correlations),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(func=fn)

    p_lhv = sub.add_parser("lhv", help="local-realist representability")
    common(p_lhv)
    p_lhv.add_argument("--mode", choices=("prob", "poss"), default="prob")
    p_lhv.set_defaults(func=cmd_lhv)

    p_mermin = sub.add_parser("mermin", help="GF(2) parity certificate")
    common(p_mermin)
    p_mermin.set_defaults(func=cmd_mermin)

    p_spider = sub.add_parser("spider-test")
    common(p_spider)
    p_spider.add_argument("--trials", type=int, default=200)
    p_spider.set_defaults(func=cmd_spider_test)

    p_report = sub.add_parser("report", help="run the full comparison")
    common(p_report, theory=False)
    p_report.add_argument("--out", default=None, help="write the JSON report here")
    p_report.add_argument("--trials", type=int, default=200)
    p_report.set_defaults(func=cmd_report)

    p_theory.set_defaults(func=cmd_theory)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:  # pragma: no cover
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
