"""Command-line front end.

Exit codes: 0 success/consistent, 1 usage or validation error,
2 falsification or counterexample, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import bounds
from .bounds import TheoremParams
from .combinatorics import KSet, format_rational, lex_compare, lex_rank, lex_unrank, parse_rational
from .errors import BudgetExceeded, GroundMismatch, ParameterError
from .exploration import (
    COUNTEREXAMPLE,
    BUDGET_EXHAUSTED,
    ProblemInstance,
    alternating_maximization,
    construction_values,
    exhaustive_search,
)
from .families import (
    Family,
    compress,
    disjointness_shadow,
    l_initial,
    maximal_partner,
    p_family,
    r_family,
)
from .io import format_family, format_families, parse_families

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParameterError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget", type=int,
                        default=int(os.environ.get("CROSSINT_MAX_CANDIDATES", 1 << 22)),
                        help="ceiling on enumerated candidates (env CROSSINT_MAX_CANDIDATES)")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit timestamp and wall-time fields (byte-stable output)")
    common.add_argument("--max-witnesses", type=int, default=20)
    common.add_argument("--witness-file", help="write witness families here")

    def nums(p, *names):
        for name in names:
            p.add_argument(f"-{name}", type=int, required=False)

    parser = _Parser(prog="crossint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", parents=[common], help="evaluate a closed-form bound")
    b.add_argument("--theorem", required=True,
                   choices=("main", "ekr", "hilton", "hm", "corollary", "ft", "stability",
                            "fk", "wz", "problem"))
    nums(b, "n", "k", "l", "r", "t", "q")
    b.add_argument("-c", type=_rational, default=Fraction(1))
    b.add_argument("--problem", type=int, choices=(1, 2, 3))
    b.add_argument("--sizes", type=_sizes)
    b.add_argument("--sweep", help="PARAM=LO:HI, one row per value (use with --format csv)")

    v = sub.add_parser("verify", parents=[common], help="run a verification engine")
    v.add_argument("target", choices=("main", "hm", "kk", "fm", "bipartite", "corollary",
                                      "inequalities", "classify"))
    nums(v, "n", "k", "l", "r", "s", "t")
    v.add_argument("-c", type=_rational, default=Fraction(1))
    v.add_argument("--mode", default=None)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--max-n", type=int, default=40)
    v.add_argument("--input", help="family file (classify: first family A, second B)")
    v.add_argument("--sweep", help="PARAM=LO:HI, one row per value (use with --format csv)")

    e = sub.add_parser("explore", parents=[common], help="search the open problems")
    e.add_argument("problem", choices=("problem1", "problem2", "problem3"))
    nums(e, "n", "t", "q", "k")
    e.add_argument("--sizes", type=_sizes)
    e.add_argument("--restarts", type=int, default=100)
    e.add_argument("--method", choices=("auto", "raw", "matching", "compressed",
                                        "alternating"), default="auto")

    lx = sub.add_parser("lex", parents=[common], help="lex rank / unrank / compare")
    lx.add_argument("action", choices=("rank", "unrank", "compare"))
    nums(lx, "n", "k")
    lx.add_argument("--set", dest="sets", action="append", type=_sizes, default=[])
    lx.add_argument("--rank", type=int)

    sh = sub.add_parser("shadow", parents=[common], help="disjointness shadow of a family")
    sh.add_argument("-j", type=int, required=True)
    sh.add_argument("--input", required=True)

    fa = sub.add_parser("family", parents=[common], help="build canonical families")
    fa.add_argument("kind", choices=("p", "r", "initial", "partner", "compress"))
    nums(fa, "n", "k", "i", "m")
    fa.add_argument("--input")
    return parser


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("-" + m for m in missing))


def run_config(args) -> dict:
    skip = {"format", "output", "workers", "seed", "budget", "no_timestamp", "command"}
    params = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        if isinstance(val, Fraction):
            val = format_rational(val)
        elif isinstance(val, tuple):
            val = ",".join(map(str, val))
        elif isinstance(val, list):
            val = [",".join(map(str, x)) if isinstance(x, tuple) else x for x in val]
        params[key] = val
    return {"command": args.command, "parameters": params, "budget": args.budget,
            "output_format": args.format, "output_path": args.output,
            "rng_seed": args.seed, "workers": args.workers}


# --- command handlers: return (record, exit_code) --------------------------

def _bound_report(args):
    th = args.theorem
    if th == "main":
        _need(args, "n", "k", "l", "r")
        return bounds.main_bound(TheoremParams(args.n, args.k, args.l, args.r, args.c)).to_record()
    if th == "corollary":
        _need(args, "n", "k", "t")
        return bounds.corollary_bound(args.n, args.k, args.t).to_record()
    if th == "hilton":
        _need(args, "n", "k", "t")
        return bounds.hilton_report(args.n, args.k, args.t).to_record()
    if th == "problem":
        _need(args, "problem", "n", "sizes")
        return bounds.problem_bound(args.problem, args.n, args.sizes, args.q or 1).to_record()
    simple = {
        "ekr": (bounds.ekr_bound, ("n", "k")),
        "hm": (bounds.hm_bound, ("n", "k")),
        "ft": (bounds.ft_bound, ("n", "k", "l")),
        "stability": (bounds.hm_stability_bound, ("n", "k")),
        "fk": (bounds.fk_bound, ("n", "k", "q")),
        "wz": (bounds.wz_bound, ("n", "k", "l", "q")),
    }
    fn, names = simple[th]
    _need(args, *names)
    value = fn(*(getattr(args, x) for x in names))
    rec = {"theorem": th, **{x: getattr(args, x) for x in names}}
    rec["max"] = format_rational(value)
    return rec


def cmd_bound(args):
    return _bound_report(args), EXIT_OK


def _write_witnesses(args, fams):
    if args.witness_file and fams:
        with open(args.witness_file, "w") as fh:
            fh.write(format_families(fams))


def cmd_verify(args):
    from . import verification as V
    timing = not args.no_timestamp
    tgt = args.target
    if tgt == "main":
        _need(args, "n", "k", "l", "r")
        p = TheoremParams(args.n, args.k, args.l, args.r, args.c)
        verdict = V.verify_main_theorem(p, args.mode or "both", workers=args.workers)
        if verdict.primary.witness_count:
            _write_witnesses(args, list(verdict.primary.witness(0)))
        return verdict.to_record(args.max_witnesses, timing), \
            EXIT_OK if verdict.ok else EXIT_FALSIFIED
    if tgt == "hm":
        _need(args, "n", "k")
        l = args.l if args.l is not None else args.k
        res = V.verify_nonempty_bound(args.n, args.k, l, workers=args.workers)
        rec = res.to_record(args.max_witnesses, timing)
        rec["command"] = "verify hm"
        rec["status"] = "matched" if res.matched else "FALSIFIED"
        if res.witness_count:
            _write_witnesses(args, list(res.witness(0)))
        return rec, EXIT_OK if res.matched else EXIT_FALSIFIED
    if tgt == "kk":
        _need(args, "n", "k", "l")
        res = V.verify_kk_preservation(args.n, args.k, args.l, args.trials,
                                       0 if args.seed is None else args.seed)
        if res.counterexample:
            _write_witnesses(args, list(res.counterexample))
        return res.to_record(), EXIT_OK if res.ok else EXIT_FALSIFIED
    if tgt == "fm":
        _need(args, "n", "k", "l", "r")
        res = V.verify_proposition_fm(args.n, args.k, args.l, args.r, max_families=args.budget)
        return res.to_record(), EXIT_OK if res.ok else EXIT_FALSIFIED
    if tgt == "bipartite":
        _need(args, "n", "k", "l", "s")
        res = V.verify_bipartite_lemma(args.n, args.k, args.l, args.s, args.c)
        return res.to_record(), EXIT_OK if res.ok else EXIT_FALSIFIED
    if tgt == "corollary":
        _need(args, "n", "k", "t")
        res = V.verify_corollary(args.n, args.k, args.t, args.mode or "construction",
                                 max_candidates=args.budget)
        return res.to_record(), EXIT_OK if res.ok else EXIT_FALSIFIED
    if tgt == "inequalities":
        res = V.scan_inequalities(args.max_n)
        return res.to_record(), EXIT_OK if res.ok else EXIT_FALSIFIED
    if tgt == "classify":
        _need(args, "r", "input")
        with open(args.input) as fh:
            fams = parse_families(fh.read())
        if len(fams) != 2:
            raise UsageError("classify expects exactly two families (A then B)")
        a, b = fams
        p = TheoremParams(a.ground_n, a.set_size, b.set_size, args.r, args.c)
        cl = V.classify_extremal(a, b, p)
        return {"command": "verify classify", "params": p.as_record(), **cl.to_record()}, \
            EXIT_OK
    raise UsageError(f"unknown target {tgt}")


def cmd_explore(args):
    pid = int(args.problem[-1])
    _need(args, "n")
    if args.sizes is None:
        _need(args, "k", "t")
        sizes = (args.k,) * args.t
    else:
        sizes = args.sizes
        if args.t is not None and args.t != len(sizes):
            raise UsageError(f"-t {args.t} does not match --sizes {sizes}")
    inst = ProblemInstance(pid, args.n, sizes, args.q or 1)
    seed = 0 if args.seed is None else args.seed
    if args.method == "alternating":
        out = alternating_maximization(inst, args.restarts, seed)
    else:
        out = exhaustive_search(inst, args.method, budget=args.budget)
        if out.status != BUDGET_EXHAUSTED:
            alt = alternating_maximization(inst, args.restarts, seed)
            if alt.best_found > out.best_found:
                out = alt
            else:
                out.notes.append(f"alternating search ({args.restarts} restarts, seed {seed}) "
                                 f"best {format_rational(alt.best_found)}")
                out.seed = seed
    b1, b2, ok = construction_values(inst)
    rec = out.to_record(timing=not args.no_timestamp)
    rec["constructions"] = {"construction-branch": b1, "star-branch": b2, "validated": ok}
    _write_witnesses(args, out.witness)
    if out.status == COUNTEREXAMPLE:
        return rec, EXIT_FALSIFIED
    if out.status == BUDGET_EXHAUSTED:
        return rec, EXIT_BUDGET
    return rec, EXIT_OK


def cmd_lex(args):
    if args.action == "unrank":
        _need(args, "n", "k", "rank")
        s = lex_unrank(args.n, args.k, args.rank)
        return {"n": args.n, "k": args.k, "rank": args.rank, "set": list(s.elements)}, EXIT_OK
    _need(args, "n")
    sets = [KSet.of(args.n, s) for s in args.sets]
    if args.action == "rank":
        if len(sets) != 1:
            raise UsageError("rank needs exactly one --set")
        return {"n": args.n, "set": list(sets[0].elements), "rank": lex_rank(sets[0])}, EXIT_OK
    if len(sets) != 2:
        raise UsageError("compare needs exactly two --set")
    order = {-1: "less", 0: "equal", 1: "greater"}[lex_compare(*sets)]
    return {"n": args.n, "a": list(sets[0].elements), "b": list(sets[1].elements),
            "order": order}, EXIT_OK


def _read_one(path) -> Family:
    with open(path) as fh:
        fams = parse_families(fh.read())
    if len(fams) != 1:
        raise UsageError(f"{path}: expected one family, found {len(fams)}")
    return fams[0]


def cmd_shadow(args):
    f = _read_one(args.input)
    d = disjointness_shadow(f, args.j)
    return {"j": args.j, "input_size": len(f), "size": len(d), "family": format_family(d)}, \
        EXIT_OK


def cmd_family(args):
    kind = args.kind
    if kind == "p":
        _need(args, "n", "k", "i")
        f = p_family(args.n, args.k, args.i)
    elif kind == "r":
        _need(args, "n", "k", "i")
        f = r_family(args.n, args.k, args.i)
    elif kind == "initial":
        _need(args, "n", "k", "m")
        f = l_initial(args.n, args.k, args.m)
    elif kind == "partner":
        _need(args, "k", "input")
        f = maximal_partner(_read_one(args.input), args.k)
    else:
        _need(args, "input")
        f = compress(_read_one(args.input))
    return {"size": len(f), "family": format_family(f)}, EXIT_OK


HANDLERS = {"bound": cmd_bound, "verify": cmd_verify, "explore": cmd_explore,
            "lex": cmd_lex, "shadow": cmd_shadow, "family": cmd_family}


# --- rendering -------------------------------------------------------------

def _flatten(rec, prefix=""):
    flat = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten(val, name + "."))
        elif isinstance(val, list):
            items = [json.dumps(x, sort_keys=True) if isinstance(x, (dict, list)) else str(x)
                     for x in val]
            # multi-line items (family blocks) stay one per line
            sep = "\n" if any("\n" in x for x in items) else ";"
            flat[name] = sep.join(items)
        else:
            flat[name] = val
    return flat


def render(rows: list[dict], fmt: str, config: dict, timestamp: bool) -> str:
    if fmt == "json":
        doc = {"config": config, "results": rows if len(rows) != 1 else rows[0]}
        if timestamp:
            doc["timestamp"] = datetime.now(timezone.utc).isoformat()
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        flat = [_flatten(r) for r in rows]
        fields = []
        for r in flat:
            fields.extend(k for k in r if k not in fields)
        buf = _io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat)
        return buf.getvalue()
    out = []
    for r in rows:
        for key, val in _flatten(r).items():
            text = str(val)
            if "\n" in text:
                out.append(f"{key}:")
                out.extend("  " + line for line in text.splitlines())
            else:
                out.append(f"{key}: {text}")
        out.append("")
    return "\n".join(out)


def _sweep_values(spec: str):
    try:
        name, rng = spec.split("=")
        lo, hi = (int(x) for x in rng.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad --sweep {spec!r}; use PARAM=LO:HI") from exc
    return name.strip(), range(lo, hi + 1)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = HANDLERS[args.command]
        rows, code = [], EXIT_OK
        sweep = getattr(args, "sweep", None)
        if sweep:
            name, values = _sweep_values(sweep)
            if not hasattr(args, name):
                raise UsageError(f"cannot sweep unknown parameter {name!r}")
            for value in values:
                setattr(args, name, value)
                try:
                    rec, c = handler(args)
                except ParameterError as exc:
                    rec, c = {name: value, "error": str(exc)}, EXIT_OK
                rows.append(rec)
                code = max(code, c)
            setattr(args, name, None)
            args.sweep = sweep
        else:
            rec, code = handler(args)
            rows.append(rec)
        if args.format == "text" and args.command in ("family", "shadow") and len(rows) == 1:
            # plain family file, so the output can be fed back through --input
            text = rows[0]["family"] + "\n"
        else:
            text = render(rows, args.format, run_config(args), not args.no_timestamp)
    except UsageError as exc:
        print(f"crossint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, GroundMismatch, ValueError) as exc:
        print(f"crossint: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"crossint: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
