"""``pctc`` command-line entry point.

Output is JSON by default (sorted keys, floats at 12 significant digits);
``--format csv`` is available for commands whose result is a distribution.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

import argparse
import json
import sys

import numpy as np

from . import config
from .algorithms import WitnessProblem, factor, np_conp_solve, read_dimacs, sat_solve
from .dctc import dctc_demo
from .distinguish import ROUTES, bb84_demo, build_c, distinguish
from .engine import CTC, PctcCircuit, InducedMap, apply_mixed, apply_pure, induced_map, retro_demo
from .ensembles import (
    LabeledEnsemble,
    apply_proper,
    apply_purified,
    apply_true_density,
    compare_semantics,
    labeled_mixture,
    purify,
)
from .errors import PctcError
from .gadget import GeneralizedMeasurement, postselect
from .linalg import RegisterLayout, qubits_for
from .selftest import DEFAULT_SEED, run_selftest
from .serialize import (
    density_from_json,
    dumps,
    load_json,
    operator_from_json,
    operator_to_json,
    state_from_json,
    state_to_json,
    to_jsonable,
)

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized sweeps and sampling")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--tolerance-paradox", type=_positive_float, metavar="X", help="relative paradox threshold")
    p.add_argument("--max-qubits", type=_positive_int, metavar="N", help="dense capacity limit")
    return p


def _parse_layout(text, dim):
    if text is None:
        n = qubits_for(dim)
        if n < 2 or 2**n != dim:
            raise UsageError("--layout is required unless the unitary acts on at least two qubits")
        return RegisterLayout.of(("SYS", n - 1), (CTC, 1))
    regs = []
    for part in text.split(","):
        name, _, width = part.partition(":")
        if not width:
            raise UsageError(f"--layout entries look like NAME:WIDTH, got {part!r}")
        regs.append((name.strip(), int(width)))
    return RegisterLayout(tuple(regs))


def _circuit(args):
    u = operator_from_json(load_json(args.unitary))
    return PctcCircuit(_parse_layout(args.layout, u.shape[0]), u)


def _map(args):
    if args.map:
        c = operator_from_json(load_json(args.map))
        return InducedMap(c, RegisterLayout.of(("SYS", qubits_for(c.shape[0]))))
    if args.unitary:
        return induced_map(_circuit(args))
    raise UsageError("give --map or --unitary")


def cmd_induce(args):
    cmap = induced_map(_circuit(args))
    return {"operator": operator_to_json(cmap.c), "sigma_max": cmap.sigma_max}


def cmd_apply(args):
    cmap = _map(args)
    obj = load_json(args.state)
    if "entries" in obj:
        out = apply_mixed(cmap, density_from_json(obj))
        return {"state": out}
    out = apply_pure(cmap, state_from_json(obj))
    return {"state": state_to_json(out), "distribution": out.distribution()}


def cmd_retro_demo(args):
    return {"coupling": args.coupling, "distribution": retro_demo(args.coupling)}


def cmd_gadget(args):
    meas = GeneralizedMeasurement(tuple(operator_from_json(o) for o in load_json(args.measurement)))
    state = state_from_json(load_json(args.state))
    result = postselect(meas, args.accept, state)
    return {
        "distribution": {str(k): p for k, p in result.probabilities.items()},
        "states": {str(k): v for k, v in result.states.items()},
    }


def _vectors(path):
    return [state_from_json(o).amplitudes for o in load_json(path)]


def cmd_distinguish(args):
    states = _vectors(args.states)
    if not 0 <= args.input < len(states):
        raise UsageError(f"--input must index the state set (0..{len(states) - 1})")
    dist = distinguish(states, args.input, args.route)
    return {"route": args.route, "input": args.input, "distribution": {str(k): p for k, p in dist.items()}}


def cmd_bb84_demo(args):
    report = bb84_demo()
    report["preserved"] = report["max_overlap_change"] <= 1e-10
    return report


def _ensemble(path):
    entries = load_json(path)
    return LabeledEnsemble(
        tuple(float(e["p"]) for e in entries),
        tuple(state_from_json(e["state"]) for e in entries),
        tuple(e.get("label", i) for i, e in enumerate(entries)),
    )


def cmd_mixture(args):
    e = _ensemble(args.ensemble)
    if args.map:
        c = operator_from_json(load_json(args.map))
        cmap = InducedMap(c, e.layout)
    else:
        d = e.layout.dim
        cmap = build_c([s.amplitudes for s in e.states])
        if cmap.layout.dim != d:
            raise UsageError("ensemble states must be given at the padded dimension of their distinguisher")
        cmap = InducedMap(cmap.c, e.layout)
    if args.semantics == "proper":
        out = apply_proper(cmap, e)
        return {
            "semantics": "proper",
            "ensemble": [
                {"p": p, "label": label, "state": state_to_json(s)}
                for p, label, s in zip(out.probabilities, out.labels, out.states)
            ],
        }
    if args.semantics == "density":
        return {"semantics": "density", "state": apply_true_density(cmap, labeled_mixture(e))}
    if args.semantics == "purified":
        return {"semantics": "purified", "state": state_to_json(apply_purified(cmap, purify(e)))}
    report = compare_semantics(cmap, e)
    report["semantics"] = "compare"
    return report


def cmd_dctc_demo(args):
    return dctc_demo()


def cmd_factor(args):
    dist = factor(args.q, exclude_trivial=args.exclude_trivial, method=args.method)
    keys = sorted(dist)
    sample = keys[np.random.default_rng(args.seed).choice(len(keys), p=[dist[k] for k in keys])]
    return {"answer": int(sample, 2), "witness": sample, "distribution": dist}


def cmd_sat(args):
    result = sat_solve(read_dimacs(args.file), k=args.k, method=args.method, seed=args.seed)
    return {"answer": result.answer, "witness": result.witness, "distribution": result.distribution, "p_no": result.p_no}


def cmd_npconp(args):
    spec = load_json(args.spec)
    prob = WitnessProblem.from_sets(int(spec["n_bits"]), spec.get("yes", []), spec.get("no", []))
    result = np_conp_solve(prob, method=args.method, seed=args.seed)
    return {
        "answer": result.answer,
        "witness": result.witness,
        "distribution": result.distribution,
        "promise_violation": result.promise_violation,
    }


def cmd_selftest(args):
    return run_selftest(args.seed)


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="pctc", description="Postselected closed timelike curve simulator.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    p = add("induce", cmd_induce, "induced operator of a circuit unitary")
    p.add_argument("--unitary", required=True, metavar="FILE")
    p.add_argument("--layout", metavar="NAME:W,...", help="registers; one must be named CTC")

    p = add("apply", cmd_apply, "apply an induced map to a state")
    p.add_argument("--state", required=True, metavar="FILE")
    p.add_argument("--map", metavar="FILE", help="induced operator JSON")
    p.add_argument("--unitary", metavar="FILE", help="circuit unitary JSON (traced over CTC)")
    p.add_argument("--layout", metavar="NAME:W,...")

    p = add("retro-demo", cmd_retro_demo, "Bell pair with a later CTC coupling")
    p.add_argument("--coupling", choices=["cnot", "anti", "none"], default="cnot")

    p = add("gadget", cmd_gadget, "postselect a generalized measurement")
    p.add_argument("--measurement", required=True, metavar="FILE")
    p.add_argument("--accept", required=True, type=_int_list, metavar="K,...")
    p.add_argument("--state", required=True, metavar="FILE")

    p = add("distinguish", cmd_distinguish, "identify a member of a linearly independent set")
    p.add_argument("--states", required=True, metavar="FILE")
    p.add_argument("--route", choices=list(ROUTES), default="direct")
    p.add_argument("--input", required=True, type=int, metavar="K")

    add("bb84-demo", cmd_bb84_demo, "BB84 states through a P-CTC map")

    p = add("mixture", cmd_mixture, "labeled-mixture semantics")
    p.add_argument("--ensemble", required=True, metavar="FILE")
    p.add_argument("--semantics", choices=["proper", "density", "purified", "compare"], default="compare")
    p.add_argument("--map", metavar="FILE", help="induced operator; default is the ensemble's distinguisher")

    add("dctc-demo", cmd_dctc_demo, "Deutsch versus postselected CTC on one circuit")

    p = add("factor", cmd_factor, "factoring circuit")
    p.add_argument("q", type=int, metavar="Q")
    p.add_argument("--exclude-trivial", action="store_true")
    p.add_argument("--method", choices=["auto", "dense", "structured"], default="auto")

    p = add("sat", cmd_sat, "SAT circuit on a DIMACS CNF file")
    p.add_argument("file", metavar="FILE.cnf")
    p.add_argument("-k", type=_positive_int, default=1, metavar="ROUNDS")
    p.add_argument("--method", choices=["auto", "dense", "structured"], default="auto")

    p = add("npconp", cmd_npconp, "promise problem with YES and NO witnesses")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--method", choices=["auto", "dense", "structured"], default="auto")

    add("selftest", cmd_selftest, "seeded invariant suite")
    return parser


def _csv(result):
    dist = result.get("distribution") if isinstance(result, dict) else None
    if dist is None:
        raise UsageError("--format csv is only available for commands that produce a distribution")
    lines = ["outcome,probability"]
    for key in sorted(dist):
        lines.append(f"{key},{to_jsonable(dist[key])!r}")
    return "\n".join(lines) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        with config.override(max_qubits=args.max_qubits, paradox_tol=args.tolerance_paradox):
            result = args.func(args)
            text = _csv(result) if args.format == "csv" else dumps(result)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"pctc {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"pctc {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (PctcError, ValueError, KeyError, json.JSONDecodeError) as exc:
        code = getattr(exc, "code", "invalid-input")
        message = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        _emit(dumps({"error": {"code": code, "message": message}}), args.out)
        return 1
    _emit(text, args.out)
    if args.command == "selftest" and result["failed"]:
        return 1
    if args.command == "bb84-demo" and not result["preserved"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
