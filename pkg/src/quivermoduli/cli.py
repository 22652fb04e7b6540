"""Batch command-line front end.

Every invocation loads one scenario file, dispatches a single command
from the fixed command set, and emits one deterministic JSON report:
identical scenario + seed + command always produce an identical
results payload (timing is reported but excluded from the digest).

Exit codes: 0 success (honest not-found/incomplete results included),
1 domain error, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import linalg, representation, stability, stratum, walls
from .errors import QuiverModuliError, ScenarioError, UnknownCommandError
from .lattice import classify, find_isotropic, pairing, signature, square
from .quiver import (
    enumerate_positive_roots,
    expected_dimension,
    num_parameters,
    pairwise_merge_check,
    quadratic_form,
    simple_rep_exists,
)
from .scenario import Scenario, frac_to_str, gauss_to_obj, load_scenario
from .stability import WeightedFiltration, normalize
from .stratum import HyperbolicPair, analyze_stratum, detect_totally_semistable


@dataclass
class Overrides:
    seed: Optional[int] = None
    budget: Optional[int] = None
    bound: Optional[int] = None


@dataclass
class Report:
    command: str
    args: dict
    scenario_digest: str
    results: dict
    trace: list
    timing_ms: float

    def payload(self) -> dict:
        return {
            "command": self.command,
            "args": self.args,
            "scenario_digest": self.scenario_digest,
            "results": self.results,
            "trace": self.trace,
        }

    def results_digest(self) -> str:
        blob = json.dumps(self.results, sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()

    def as_json(self, pretty: bool = False) -> str:
        doc = dict(self.payload(), timing_ms=self.timing_ms,
                   results_digest=self.results_digest())
        if pretty:
            return json.dumps(doc, indent=2, sort_keys=True)
        return json.dumps(doc, sort_keys=True)


def _vec(scenario: Scenario, name: str):
    if name not in scenario.vectors:
        raise UnknownCommandError(f"unknown vector {name!r}")
    return scenario.vectors[name]


def _zfun(scenario: Scenario, name: str):
    if name not in scenario.stability:
        raise UnknownCommandError(f"unknown stability function {name!r}")
    return scenario.stability[name]


def _char(scenario: Scenario, name: str):
    if name not in scenario.characters:
        raise UnknownCommandError(f"unknown character {name!r}")
    return scenario.characters[name]


def _rep(scenario: Scenario, name: str):
    if name not in scenario.representations:
        raise UnknownCommandError(f"unknown representation {name!r}")
    return scenario.representations[name]


def _decomp(scenario: Scenario):
    if scenario.decomposition is None:
        raise UnknownCommandError("scenario has no decomposition")
    return scenario.decomposition


def _filtration(scenario: Scenario, name: str) -> WeightedFiltration:
    if name not in scenario.filtrations:
        raise UnknownCommandError(f"unknown filtration {name!r}")
    steps = tuple(
        (w, _vec(scenario, vname)) for w, vname in scenario.filtrations[name]
    )
    return WeightedFiltration(steps)


def _dimvec(scenario: Scenario, args: dict):
    if args.get("n"):
        return tuple(int(x) for x in args["n"].split(","))
    return _decomp(scenario).multiplicities


def _mat_obj(m) -> list:
    return [[frac_to_str(x) for x in row] for row in m]


def _witness_obj(witness) -> list:
    return [_mat_obj(span) for span in witness.spans]


# --- handlers ---------------------------------------------------------------


def _h_lattice_pair(sc, args, ov):
    return {"value": pairing(_vec(sc, args["a"]), _vec(sc, args["b"]))}, []


def _h_lattice_square(sc, args, ov):
    return {"value": square(_vec(sc, args["v"]))}, []


def _h_lattice_classify(sc, args, ov):
    return {"kind": classify(_vec(sc, args["v"])).value}, []


def _h_lattice_signature(sc, args, ov):
    pos, neg, zero = signature(sc.lattice)
    return {"positive": pos, "negative": neg, "zero": zero}, []


def _h_lattice_isotropic(sc, args, ov):
    bound = ov.bound if ov.bound is not None else sc.budgets["box_bound"]
    found = find_isotropic(sc.lattice, bound)
    return {
        "found": found is not None,
        "vector": list(found.coords) if found is not None else None,
        "searched_bound": bound,
    }, []


def _h_quiver_build(sc, args, ov):
    q = sc.effective_quiver()
    return {
        "vertices": q.num_vertices,
        "loops": list(q.loops),
        "arrows": [list(a) for a in q.arrows],
        "neg_cartan": [list(row) for row in q.neg_cartan()],
    }, []


def _h_quiver_dim(sc, args, ov):
    q = sc.effective_quiver()
    n = _dimvec(sc, args)
    return {
        "n": list(n),
        "quadratic_form": quadratic_form(q, n),
        "expected_dimension": expected_dimension(q, n),
        "num_parameters": num_parameters(q, n),
        "degenerate": all(x == 0 for x in n),
    }, []


def _h_quiver_roots(sc, args, ov):
    q = sc.effective_quiver()
    n = _dimvec(sc, args)
    budget = ov.budget if ov.budget is not None else sc.budgets["root_budget"]
    roots = enumerate_positive_roots(q, n, budget=budget)
    return {"n": list(n), "roots": [list(r) for r in roots]}, []


def _h_quiver_simple_exists(sc, args, ov):
    q = sc.effective_quiver()
    n = _dimvec(sc, args)
    budget = ov.budget if ov.budget is not None else sc.budgets["root_budget"]
    verdict = simple_rep_exists(q, n, budget=budget)
    return {
        "exists": verdict.exists,
        "reason": verdict.reason,
        "violating_parts": (
            [list(p) for p in verdict.violating_parts]
            if verdict.violating_parts
            else None
        ),
    }, []


def _h_quiver_merge_check(sc, args, ov):
    return {
        "merges": pairwise_merge_check(_vec(sc, args["a"]), _vec(sc, args["b"]))
    }, []


def _h_rep_moment_map(sc, args, ov):
    rep = _rep(sc, args["rep"])
    blocks = representation.moment_map(rep)
    total = sum((linalg.trace(b) for b in blocks), Fraction(0))
    return {
        "blocks": [_mat_obj(b) for b in blocks],
        "trace_sum": frac_to_str(total),
    }, []


def _h_rep_check_fiber(sc, args, ov):
    rep = _rep(sc, args["rep"])
    return {"in_zero_fiber": representation.in_zero_fiber(rep)}, []


def _h_rep_destabilize(sc, args, ov):
    rep = _rep(sc, args["rep"])
    theta = _char(sc, args["theta"])
    limits = sc.search_limits(seed=ov.seed, budget=ov.budget)
    result = representation.destabilizer_search(rep, theta, limits)
    results = {"found": result.found}
    if result.found:
        results["witness"] = _witness_obj(result.witness)
        results["slope"] = frac_to_str(result.slope)
    else:
        results["certificate"] = {
            "seeds_tried": [list(t) for t in result.certificate.seeds_tried],
            "budget_used": result.certificate.budget_used,
        }
    return results, []


def _h_rep_jh(sc, args, ov):
    rep = _rep(sc, args["rep"])
    theta = _char(sc, args["theta"])
    limits = sc.search_limits(seed=ov.seed, budget=ov.budget)
    result = representation.jordan_holder_search(rep, theta, limits)
    results = {"complete": result.complete}
    if result.complete:
        results["steps"] = [_witness_obj(w) for w in result.steps]
        results["graded_dims"] = [list(d) for d in result.graded_dims]
    else:
        results["reason"] = result.reason
    return results, []


def _h_stab_normalize(sc, args, ov):
    z = normalize(_zfun(sc, args["z"]), _vec(sc, args["v"]))
    return {"values": [gauss_to_obj(x) for x in z.values]}, []


def _h_stab_phase(sc, args, ov):
    ph = stability.phase(_zfun(sc, args["z"]), _vec(sc, args["v"]))
    value = ph.as_fraction
    return {
        "direction": list(ph.direction),
        "value": frac_to_str(value) if value is not None else None,
    }, []


def _h_stab_slope(sc, args, ov):
    sl = stability.slope(_zfun(sc, args["z"]), _vec(sc, args["v"]))
    if sl is stability.INFINITE_SLOPE:
        return {"slope": "infinite"}, []
    return {"slope": frac_to_str(sl)}, []


def _h_stab_weight(sc, args, ov):
    filt = _filtration(sc, args["filtration"])
    value = stability.filtration_weight(_zfun(sc, args["z"]), filt)
    return {"weight": frac_to_str(value)}, []


def _h_stab_theta_unstable(sc, args, ov):
    z = _zfun(sc, args["z"])
    total = _vec(sc, args["v"])
    names = [n for n in args["classes"].split(",") if n]
    classes = [_vec(sc, n) for n in names]
    verdict = stability.theta_unstable(z, total, classes)
    results = {"unstable": verdict.unstable}
    if verdict.unstable:
        results["weight"] = frac_to_str(verdict.weight)
        results["witness_steps"] = [
            {"weight": w, "class": list(v.coords)} for w, v in verdict.witness.steps
        ]
    return results, []


def _h_stab_chi_sigma(sc, args, ov):
    exps = stability.character_exponents(_zfun(sc, args["z"]), _decomp(sc))
    return {"exponents": [frac_to_str(e) for e in exps]}, []


def _h_stab_classical_weight(sc, args, ov):
    terms = json.loads(args["terms"])
    value = stability.classical_git_weight(
        [(int(w), [int(c) for c in coeffs]) for w, coeffs in terms],
        int(args["ell"]),
    )
    return {"value": value}, []


def _h_stab_kclass(sc, args, ov):
    filt = _filtration(sc, args["filtration"])
    kc = stability.k_class(filt)
    return {
        "terms": [{"exponent": e, "class": list(v.coords)} for e, v in kc.terms],
        "at_one": list(kc.at_one().coords),
    }, []


def _h_walls_enumerate(sc, args, ov):
    q = sc.effective_quiver()
    n = _dimvec(sc, args)
    budget = ov.budget if ov.budget is not None else sc.budgets["root_budget"]
    found = walls.enumerate_walls(q, n, budget=budget)
    return {
        "walls": [
            {
                "alpha": list(w.alpha),
                "degenerate": w.degenerate,
                "at_bound": w.at_bound,
            }
            for w in found
        ]
    }, []


def _h_walls_locate(sc, args, ov):
    q = sc.effective_quiver()
    n = _dimvec(sc, args)
    budget = ov.budget if ov.budget is not None else sc.budgets["root_budget"]
    found = walls.enumerate_walls(q, n, budget=budget)
    theta = walls.CharacterPoint(_char(sc, args["theta"]), n)
    sig = walls.locate_chamber(theta, found)
    return {
        "signature": sig.as_string(),
        "open_chamber": sig.open_chamber,
        "walls": [list(w.alpha) for w in found],
    }, []


def _z0_value(sc, args):
    decomp = _decomp(sc)
    z0 = _zfun(sc, args.get("z0") or "Z0")
    return z0(decomp.total())


def _h_walls_gamma(sc, args, ov):
    degrees = walls.degree_vector(
        _zfun(sc, args["z"]), _z0_value(sc, args), _decomp(sc)
    )
    return {"degrees": [frac_to_str(d) for d in degrees]}, []


def _h_walls_slice_check(sc, args, ov):
    ok = walls.on_slice(_zfun(sc, args["z"]), _z0_value(sc, args), _decomp(sc))
    return {"on_slice": ok}, []


def _h_walls_xi(sc, args, ov):
    theta = walls.to_character(
        _zfun(sc, args["z"]), _z0_value(sc, args), _decomp(sc)
    )
    return {
        "theta": [frac_to_str(t) for t in theta.theta],
        "n": list(theta.n),
    }, []


def _h_walls_correspondence(sc, args, ov):
    alpha = tuple(int(x) for x in args["alpha"].split(","))
    samples = [_zfun(sc, name) for name in args["samples"].split(",") if name]
    holds = walls.wall_correspondence_holds(
        alpha, samples, _z0_value(sc, args), _decomp(sc)
    )
    return {"alpha": list(alpha), "holds": holds}, []


def _h_wall_classify_tss(sc, args, ov):
    v = _vec(sc, args["v"])
    hp = HyperbolicPair(sc.lattice, v)
    z0 = _zfun(sc, args.get("z0") or "Z0")
    bound = ov.bound if ov.bound is not None else sc.budgets["box_bound"]
    result = detect_totally_semistable(hp, z0, bound)
    results = {"detected": result.detected}
    if result.detected:
        results["criterion"] = result.witness.criterion
        results["witness"] = list(result.witness.witness.coords)
    else:
        results["searched_bound"] = result.searched_bound
    return results, []


def _verdict_obj(verdict) -> dict:
    if isinstance(verdict, stratum.HasStableDeformation):
        return {
            "kind": verdict.kind,
            "summands": list(verdict.summand_indices),
            "via": verdict.via,
        }
    if isinstance(verdict, stratum.TotallySemistableShape):
        return {
            "kind": verdict.kind,
            "w": list(verdict.w.coords) if verdict.w is not None else None,
            "spheres": [list(s.coords) for s in verdict.spheres],
            "leaf": list(verdict.leaf.coords) if verdict.leaf is not None else None,
        }
    if isinstance(verdict, stratum.ProductSplit):
        return {
            "kind": verdict.kind,
            "factors": [_factor_obj(f) for f in verdict.factors],
        }
    return {"kind": verdict.kind, "reason": verdict.reason}


def _factor_obj(factor) -> dict:
    return {
        "kind": factor.kind,
        "class": list(factor.v.coords),
        "multiplicity": factor.multiplicity,
    }


def _h_stratum_analyze(sc, args, ov):
    report = analyze_stratum(_decomp(sc))
    return {"verdict": _verdict_obj(report.verdict)}, list(report.trace)


def _h_stratum_product_shape(sc, args, ov):
    report = analyze_stratum(_decomp(sc))
    factors = stratum.product_shape(report)
    return {"factors": [_factor_obj(f) for f in factors]}, list(report.trace)


def _h_stratum_simple_bridge(sc, args, ov):
    budget = ov.budget if ov.budget is not None else sc.budgets["root_budget"]
    return {
        "stable_deformation": stratum.stable_deformation_exists(
            _decomp(sc), budget=budget
        )
    }, []


Handler = Callable[[Scenario, dict, Overrides], tuple[dict, list]]

# command -> (handler, positional argument names, optional flag names)
COMMANDS: dict[str, tuple[Handler, tuple[str, ...], tuple[str, ...]]] = {
    "lattice pair": (_h_lattice_pair, ("a", "b"), ()),
    "lattice square": (_h_lattice_square, ("v",), ()),
    "lattice classify": (_h_lattice_classify, ("v",), ()),
    "lattice signature": (_h_lattice_signature, (), ()),
    "lattice isotropic": (_h_lattice_isotropic, (), ()),
    "quiver build": (_h_quiver_build, (), ()),
    "quiver dim": (_h_quiver_dim, (), ("n",)),
    "quiver roots": (_h_quiver_roots, (), ("n",)),
    "quiver simple-exists": (_h_quiver_simple_exists, (), ("n",)),
    "quiver merge-check": (_h_quiver_merge_check, ("a", "b"), ()),
    "rep moment-map": (_h_rep_moment_map, ("rep",), ()),
    "rep check-fiber": (_h_rep_check_fiber, ("rep",), ()),
    "rep destabilize": (_h_rep_destabilize, ("rep", "theta"), ()),
    "rep jh": (_h_rep_jh, ("rep", "theta"), ()),
    "stability normalize": (_h_stab_normalize, ("z", "v"), ()),
    "stability phase": (_h_stab_phase, ("z", "v"), ()),
    "stability slope": (_h_stab_slope, ("z", "v"), ()),
    "stability weight": (_h_stab_weight, ("z", "filtration"), ()),
    "stability theta-unstable": (
        _h_stab_theta_unstable, ("z", "v", "classes"), ()),
    "stability chi-sigma": (_h_stab_chi_sigma, ("z",), ()),
    "stability classical-weight": (
        _h_stab_classical_weight, ("terms", "ell"), ()),
    "stability kclass": (_h_stab_kclass, ("filtration",), ()),
    "walls enumerate": (_h_walls_enumerate, (), ("n",)),
    "walls locate": (_h_walls_locate, ("theta",), ("n",)),
    "walls xi": (_h_walls_xi, ("z",), ("z0",)),
    "walls gamma": (_h_walls_gamma, ("z",), ("z0",)),
    "walls slice-check": (_h_walls_slice_check, ("z",), ("z0",)),
    "walls correspondence": (
        _h_walls_correspondence, ("alpha", "samples"), ("z0",)),
    "wall classify-tss": (_h_wall_classify_tss, ("v",), ("z0",)),
    "stratum analyze": (_h_stratum_analyze, (), ()),
    "stratum product-shape": (_h_stratum_product_shape, (), ()),
    "stratum simple-bridge": (_h_stratum_simple_bridge, (), ()),
}


def run_command(
    scenario: Scenario,
    command: str,
    args: Optional[dict] = None,
    overrides: Optional[Overrides] = None,
) -> Report:
    """Dispatch one command against a loaded scenario."""
    if command not in COMMANDS:
        raise UnknownCommandError(f"unknown command {command!r}")
    handler, positionals, flags = COMMANDS[command]
    args = dict(args or {})
    overrides = overrides or Overrides()
    missing = [p for p in positionals if p not in args]
    if missing:
        raise UnknownCommandError(
            f"command {command!r} is missing arguments: {', '.join(missing)}"
        )
    start = time.perf_counter()
    results, trace = handler(scenario, args, overrides)
    elapsed = (time.perf_counter() - start) * 1000.0
    shown_args = {k: args[k] for k in sorted(args) if args[k] is not None}
    return Report(
        command=command,
        args=shown_args,
        scenario_digest=scenario.digest(),
        results=results,
        trace=trace,
        timing_ms=elapsed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quivermoduli",
        description="Exact lattice / quiver / wall computations over scenario files",
    )
    parser.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    parser.add_argument("--out", default=None, help="write the report here (default stdout)")
    parser.add_argument("--seed", type=int, default=None, help="override the PRNG seed")
    parser.add_argument("--budget", type=int, default=None, help="override the search/root budget")
    parser.add_argument("--bound", type=int, default=None, help="override the box bound")
    style = parser.add_mutually_exclusive_group()
    style.add_argument("--json", action="store_true", help="compact JSON output (default)")
    style.add_argument("--pretty", action="store_true", help="indented JSON output")

    groups = parser.add_subparsers(dest="group", required=True)
    tree: dict[str, list[str]] = {}
    for command in COMMANDS:
        group, action = command.split(" ", 1)
        tree.setdefault(group, []).append(action)
    for group, actions in tree.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="action", required=True)
        for action in actions:
            handler, positionals, flags = COMMANDS[f"{group} {action}"]
            ap = sub.add_parser(action)
            for pos in positionals:
                ap.add_argument(pos)
            for flag in flags:
                ap.add_argument(f"--{flag}", default=None)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    command = f"{ns.group} {ns.action}"
    handler, positionals, flags = COMMANDS[command]
    args = {name: getattr(ns, name) for name in positionals}
    for flag in flags:
        value = getattr(ns, flag, None)
        if value is not None:
            args[flag] = value
    overrides = Overrides(seed=ns.seed, budget=ns.budget, bound=ns.bound)
    try:
        scenario = load_scenario(ns.scenario)
        report = run_command(scenario, command, args, overrides)
    except ScenarioError as exc:
        print(json.dumps({"error": "schema", "violations": exc.violations}),
              file=sys.stderr)
        return 2
    except UnknownCommandError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return 2
    except QuiverModuliError as exc:
        print(json.dumps({"error": "domain", "message": str(exc)}), file=sys.stderr)
        return 1
    except (ValueError, json.JSONDecodeError) as exc:
        # Malformed inline arguments (numbers, comma lists, JSON terms).
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return 2
    text = report.as_json(pretty=ns.pretty)
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
