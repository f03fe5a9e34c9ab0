"""Command-line front end.

Every command prints one JSON report ``{command, instance_digest, results,
timing}`` (``gen`` prints the instance itself).  Exit codes: 0 for success
or an affirmative verdict, 2 for a negative verdict (unstable, infeasible,
not in the core), 1 for usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import games, instances, io, solvers, stabilizer
from .auxiliary import build_auxiliary
from .graph import Instance, InstanceError, edge_key, is_c_matching, is_fractional_c_matching, remove_vertices, weight

OK, NEGATIVE, INPUT_ERROR = 0, 2, 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(spec: str) -> Instance:
    if spec.startswith("fixtures:"):
        try:
            return instances.fixtures(spec.split(":", 1)[1])
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    if spec == "-":
        try:
            return io.load_instance(json.load(sys.stdin))
        except json.JSONDecodeError as exc:
            raise InstanceError([f"malformed JSON: {exc}"]) from None
    return io.read_instance(spec)


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError([f"malformed JSON in {path}: {exc}"]) from None


def _digest(instance: Instance) -> str:
    text = json.dumps(io.dump_instance(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _write(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(io.to_jsonable(payload), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _matching_list(graph, matching) -> list:
    return [list(map(str, graph.endpoints(k))) for k in graph.sorted_edges(matching)]


def _vector(graph, x) -> dict:
    return {io.edge_name(k): x[k] for k in graph.sorted_edges(x)}


# -- commands -------------------------------------------------------------------

def cmd_solve(args, inst):
    g = inst.graph
    matching, value = solvers.max_weight_c_matching(g)
    if not is_c_matching(g, matching) or weight(g, matching) != value:
        raise AssertionError("integral witness failed re-validation")
    return OK, {"value": value, "witness": _matching_list(g, matching)}


def _fractional_report(g, certificate: bool) -> dict:
    x, value, cover = solvers.fractional_c_matching_with_cover(g)
    if not is_fractional_c_matching(g, x) or weight(g, x) != value:
        raise AssertionError("fractional witness failed re-validation")
    out = {"value": value, "witness": _vector(g, x)}
    if certificate:
        feasible, dual_value = solvers.verify_fractional_vertex_cover(g, cover)
        out["certificate"] = {
            "cover": {"y": {str(v): cover.y[v] for v in g.sorted_vertices(cover.y)},
                      "z": {io.edge_name(k): cover.z[k] for k in g.sorted_edges(cover.z)}},
            "cover_feasible": feasible,
            "cover_value": dual_value,
            "weak_duality": value <= dual_value,
            "complementary_slackness": solvers.check_complementary_slackness(g, x, cover),
        }
    return out


def cmd_fractional(args, inst):
    return OK, _fractional_report(inst.graph, args.certificate)


def cmd_stability(args, inst):
    g = inst.graph
    cert = solvers.is_stable_graph(g)
    out = {"nuC": cert.nu_c, "nuFC": cert.nu_fc, "stable": cert.stable,
           "integral_witness": _matching_list(g, cert.matching),
           "fractional_witness": _vector(g, cert.fractional)}
    if args.certificate:
        out["certificate"] = _fractional_report(g, True)["certificate"]
    return (OK if cert.stable else NEGATIVE), out


def cmd_stabilize_m(args, inst):
    g = inst.graph
    notes = []
    if inst.matching is None:
        matching, _ = solvers.max_weight_c_matching(g)
        inst = Instance(g, matching)
        notes.append("instance carried no matching; a maximum-weight one was computed")
    if args.emit_aux:
        _write(args.emit_aux, build_auxiliary(inst).to_json())
    if args.allow_nonmax:
        result = stabilizer.m_vertex_stabilizer_relaxed(inst)
        algorithm = "relaxed"
    else:
        if not args.trust_maximal and not solvers.is_maximum_c_matching(g, inst.matching):
            raise InstanceError(["matching is not maximum-weight (use --allow-nonmax)"])
        result = stabilizer.m_vertex_stabilizer(inst, trust_maximal=True)
        algorithm = "exact"
    if result.stabilized and not stabilizer.is_stable_instance(inst, result.removed):
        raise AssertionError("stabilizer output failed re-validation")
    if args.trace:
        _write(args.trace, result.trace)
    out = {"algorithm": algorithm, "matching": _matching_list(g, inst.matching), "notes": notes}
    out.update(result.to_json())
    out["removed"] = sorted(out["removed"], key=lambda v: g.vertex_index(v))
    del out["trace"]
    out["iterations"] = len(result.trace)
    return (OK if result.stabilized else NEGATIVE), out


def cmd_stabilize(args, inst):
    g = inst.graph
    if g.n > args.max_vertices:
        raise InstanceError([f"exhaustive search is limited to {args.max_vertices} vertices"])
    best = stabilizer.vertex_stabilizer_bruteforce(g)
    rest = remove_vertices(g, best, reclamp=False)
    cert = solvers.is_stable_graph(rest)
    if not cert.stable:
        raise AssertionError("stabilizer output failed re-validation")
    return OK, {"removed": g.sorted_vertices(best), "size": len(best), "nuC_after": cert.nu_c, "nuFC_after": cert.nu_fc}


def cmd_core_check(args, inst):
    g = inst.graph
    raw = _read_json(args.allocation)
    if not isinstance(raw, dict):
        raise InstanceError(["allocation must be an object mapping vertex ids to values"])
    try:
        y = {str(k): Fraction(str(v)) for k, v in raw.items()}
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError([f"bad allocation value: {exc}"]) from None
    try:
        in_core, violation = games.check_core_allocation(g, y)
    except (KeyError, ValueError) as exc:
        raise InstanceError([str(exc.args[0])]) from None
    return (OK if in_core else NEGATIVE), {"in_core": in_core, "violation": violation}


def _load_outcome(g, inst, path):
    if path is None:
        matching = inst.matching
        if matching is None:
            matching, _ = solvers.max_weight_c_matching(g)
        split = {}
        for k in matching:
            u, v = g.endpoints(k)
            split[(u, v)] = split[(v, u)] = g.w(k) / 2
        return games.Outcome(frozenset(matching), split)
    raw = _read_json(path)
    try:
        matching = frozenset(edge_key(str(a), str(b)) for a, b in raw["matching"])
        split = {(str(u), str(v)): Fraction(str(a)) for u, v, a in raw["split"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError([f"bad outcome file: {exc}"]) from None
    for k in matching:
        if not g.has_edge(k):
            raise InstanceError([f"outcome deal {io.edge_name(k)} is not an edge"])
    return games.Outcome(matching, split)


def cmd_verify(args, inst):
    g = inst.graph
    outcome = _load_outcome(g, inst, args.outcome)
    rep = games.verify_outcome(g, outcome)
    out = {"consistent": rep.consistent, "stable": rep.stable, "problems": rep.problems,
           "outside_options": {str(v): rep.options[v] for v in g.vertices},
           "matching": _matching_list(g, outcome.matching)}
    return (OK if rep.stable else NEGATIVE), out


def cmd_demo(args, inst):
    if args.name != "divergence":
        raise UsageError(f"unknown demo {args.name!r}")
    return OK, games.divergence_demo()


def cmd_gen(args):
    if args.kind == "fixture":
        if not args.name:
            raise UsageError("gen fixture needs a fixture name")
        try:
            inst = instances.fixtures(args.name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    elif args.kind == "random":
        if args.seed is None:
            raise UsageError("gen random requires --seed")
        try:
            weights = [Fraction(w) for w in args.weights.split(",")]
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad --weights {args.weights!r}") from None
        try:
            g = instances.gen_random(args.n, args.density, tuple(args.caps), weights, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        matching = None
        if args.with_matching:
            matching, _ = solvers.max_weight_c_matching(g)
        inst = Instance(g, matching)
    elif args.kind == "planted":
        if args.seed is None:
            raise UsageError("gen planted requires --seed")
        inst = instances.gen_planted(args.seed)
    else:  # mids
        if not args.source:
            raise UsageError("gen mids requires --source")
        raw = _read_json(args.source)
        try:
            src = instances.MidsInstance([str(v) for v in raw["vertices"]],
                                         [(str(a), str(b)) for a, b in raw["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError([f"bad source graph: {exc}"]) from None
        inst = Instance(instances.build_mids_reduction(src).graph)
    return io.dump_instance(inst)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="capstab", description="Stability tools for capacitated matching games.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_instance(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("instance", help="JSON file, '-' for stdin, or fixtures:<name>")
        return sp

    with_instance("solve", "maximum-weight c-matching")
    sp = with_instance("fractional", "fractional optimum")
    sp.add_argument("--certificate", action="store_true", help="add the dual cover and slackness report")
    sp = with_instance("stability", "compare integral and fractional optima")
    sp.add_argument("--certificate", action="store_true")
    sp = with_instance("stabilize-m", "minimum stabilizer keeping the instance's matching")
    sp.add_argument("--allow-nonmax", action="store_true", help="accept a non-maximum matching (2-approximation)")
    sp.add_argument("--trust-maximal", action="store_true", help="skip the maximality check")
    sp.add_argument("--trace", metavar="FILE", help="write the iteration log")
    sp.add_argument("--emit-aux", metavar="FILE", help="write the copy graph")
    sp = with_instance("stabilize", "minimum vertex stabilizer by exhaustive search")
    sp.add_argument("--max-vertices", type=int, default=16)
    sp = with_instance("core-check", "core membership of an allocation")
    sp.add_argument("--allocation", required=True, metavar="FILE")
    sp = with_instance("verify", "consistency and stability of a bargaining outcome")
    sp.add_argument("--outcome", metavar="FILE", help="outcome JSON; default splits the instance matching evenly")
    sp = sub.add_parser("demo", help="worked examples")
    sp.add_argument("name", choices=["divergence"])
    sp = sub.add_parser("gen", help="emit an instance")
    sp.add_argument("kind", choices=["fixture", "random", "planted", "mids"])
    sp.add_argument("name", nargs="?", help="fixture name")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--caps", type=int, nargs=2, default=[1, 3], metavar=("LO", "HI"))
    sp.add_argument("--weights", default="1/2,1,2")
    sp.add_argument("--with-matching", action="store_true")
    sp.add_argument("--source", metavar="FILE")
    return p


COMMANDS = {
    "solve": cmd_solve, "fractional": cmd_fractional, "stability": cmd_stability,
    "stabilize-m": cmd_stabilize_m, "stabilize": cmd_stabilize, "core-check": cmd_core_check,
    "verify": cmd_verify, "demo": cmd_demo,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gen":
            payload = cmd_gen(args)
        else:
            inst = None if args.command == "demo" else _load(args.instance)
            started = time.perf_counter()
            code, results = COMMANDS[args.command](args, inst)
            payload = {
                "command": args.command,
                "instance_digest": None if inst is None else _digest(inst),
                "results": results,
                "timing": {"seconds": round(time.perf_counter() - started, 6)},
            }
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return INPUT_ERROR
    except stabilizer.NotMaximumError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except InstanceError as exc:
        for v in exc.violations:
            print(f"input error: {v}", file=sys.stderr)
        return INPUT_ERROR
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    json.dump(io.to_jsonable(payload), out, sort_keys=True, indent=2)
    out.write("\n")
    return OK if args.command == "gen" else code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
