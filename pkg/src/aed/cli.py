"""Command-line entry point ``aed``.

Exit codes: 0 success, 1 usage or capacity error, 2 when ``check`` finds a
detection failure (the witness is printed as JSON).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .bounds import all_bounds
from .congruence import (
    CongruenceCode, best_index, count, density, enumerate_code, max_index,
)
from .detector import format_code, is_aed, min_hamming_distance, read_code
from .error_model import enumerate_out
from .params import CapacityError, ChannelParams, Mode, ParameterError, normalize
from .search import Budget, expand_grid, search, sweep, sweep_csv
from .simulator import Adversary, run

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA = 1
log = logging.getLogger("aed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digest(path: str) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _params(args) -> ChannelParams:
    return normalize(ChannelParams.parse(args.params, args.mode))


def _word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"malformed word {text!r}") from None


class Run:
    """Collects the result and manifest of one invocation and writes them out."""

    def __init__(self, args, argv):
        self.args = args
        self.manifest = {
            "subcommand": args.command if args.command != "code" else f"code {args.action}",
            "params": None,
            "mode": getattr(args, "mode", None),
            "inputs": {},
            "output": args.out,
            "seed": getattr(args, "seed", None),
            "version": __version__,
            "argv": list(argv),
        }

    def set_params(self, p: ChannelParams) -> ChannelParams:
        self.manifest["params"] = p.format()
        self.manifest["mode"] = p.mode.value
        return p

    def add_input(self, path: str) -> None:
        self.manifest["inputs"][path] = _digest(path)

    def emit(self, result, text: str | None = None) -> None:
        """Write JSON (manifest embedded) or ``text`` with a sidecar manifest."""
        fmt = self.args.format
        if fmt == "json" or text is None:
            body = json.dumps({"schema": SCHEMA, "manifest": self.manifest, "result": result},
                              indent=2, sort_keys=True) + "\n"
            sidecar = False
        else:
            body, sidecar = text, True
        if self.args.out:
            Path(self.args.out).write_text(body, encoding="utf-8")
            if sidecar:
                Path(self.args.out + ".manifest.json").write_text(
                    json.dumps({"schema": SCHEMA, **self.manifest}, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8",
                )
        else:
            sys.stdout.write(body)
            if sidecar:
                print("# manifest " + json.dumps(self.manifest, sort_keys=True), file=sys.stderr)


def cmd_out(args, run_):
    p = run_.set_params(_params(args))
    region = enumerate_out(_word(args.x), p)
    if args.plot:
        from .plotting import plot_out_region
        plot_out_region(region, args.plot)
    members = [list(m) for m in region.members]
    run_.emit({"base": list(region.base), "size": len(members), "members": members},
              format_code(region.members))
    return 0


def cmd_code(args, run_):
    p = run_.set_params(_params(args))
    if args.action == "density":
        if p.mode is not Mode.INTEGER:
            raise UsageError("density needs --mode integer")
        code = CongruenceCode(p.n, p.t)
        rep = density(code, args.k)
        if args.plot:
            from .plotting import plot_density
            ks = sorted({max(1, round(args.k * f)) for f in (0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0)})
            plot_density(code, ks, args.plot)
        d = rep.to_dict()
        run_.emit(d, f"exact {d['exact']}\nempirical {d['empirical']}\nwindow_k {d['window_k']}\n")
        return 0
    if p.mode is Mode.INTEGER:
        raise UsageError(f"code {args.action} needs a finite or cyclic alphabet")
    jstar = max_index(p.q, p.n, p.t)
    if args.action == "jstar":
        counts = [count(CongruenceCode(p.n, p.t, j, p.q, p.mode)) for j in range(p.t + 1)]
        best = best_index(p.q, p.n, p.t)
        run_.emit({"jstar": jstar, "best_index": best, "counts": counts,
                   "jstar_is_maximizer": counts[jstar] == max(counts)}, f"{jstar}\n")
        return 0
    j = jstar if args.j is None else args.j
    code = CongruenceCode(p.n, p.t, j, p.q, p.mode)
    if args.action == "count":
        c = count(code)
        run_.emit({"j": j, "count": c}, f"{c}\n")
    else:
        words = list(enumerate_code(code))
        run_.emit({"j": j, "words": [list(w) for w in words]}, format_code(words))
    return 0


def cmd_check(args, run_):
    p = run_.set_params(_params(args))
    run_.add_input(args.code)
    code = read_code(args.code, p.q)
    verdict = is_aed(code, p, workers=args.threads)
    d = verdict.to_dict()
    text = "AED\n" if verdict.holds else json.dumps(d, sort_keys=True) + "\n"
    run_.emit(d, text)
    return 0 if verdict.holds else 2


def cmd_mindist(args, run_):
    run_.add_input(args.code)
    code = read_code(args.code)
    d = min_hamming_distance(code)
    run_.emit({"min_hamming_distance": d, "size": len(code)}, f"{d}\n")
    return 0


def cmd_bounds(args, run_):
    p = run_.set_params(_params(args))
    reps = [b.to_dict() for b in all_bounds(p)]
    text = "".join(f"{r['name']}\t{r['value']}\t{'yes' if r['applicable'] else 'no'}\t{r['reason']}\n"
                   for r in reps)
    run_.emit(reps, text)
    return 0


def _budget(args) -> Budget:
    return Budget(nodes=args.budget_nodes, seconds=args.budget_secs)


def cmd_search(args, run_):
    p = run_.set_params(_params(args))
    res = search(p, _budget(args), use_bounds=not args.no_theorem_bounds)
    log.info("search finished in %.3fs", res.stats["wall_time"])
    run_.emit(res.to_dict(), format_code(res.witness))
    return 0


def _load_grid(path: str) -> dict:
    raw = Path(path).read_bytes()
    if path.endswith(".toml"):
        return tomllib.loads(raw.decode("utf-8"))
    return json.loads(raw)


def cmd_sweep(args, run_):
    run_.add_input(args.grid)
    grid = expand_grid(_load_grid(args.grid))
    rows = sweep(grid, _budget(args), use_bounds=not args.no_theorem_bounds)
    if args.plot:
        from .plotting import plot_sweep
        plot_sweep(rows, args.plot)
    run_.emit([r.as_row() for r in rows], sweep_csv(rows))
    return 0


def cmd_sim(args, run_):
    p = run_.set_params(_params(args))
    if args.code:
        run_.add_input(args.code)
        code = read_code(args.code, p.q)
    else:
        fam = args.code_family or f"j={max_index(p.q, p.n, p.t)}"
        if not fam.startswith("j="):
            raise UsageError("--code-family takes j=<residue>")
        code = CongruenceCode(p.n, p.t, int(fam[2:]), p.q, p.mode)
    adversary = Adversary.parse(args.adversary) if args.adversary else None
    rep = run(code, p, args.trials, args.seed, adversary, workers=args.threads)
    d = rep.to_dict()
    run_.emit(d, "".join(f"{k} {v}\n" for k, v in d.items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"),
                        help="default json; csv for sweep")
    common.add_argument("--out", help="write the result here (manifest alongside)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    def with_params(sp, required=True):
        sp.add_argument("--params", required=required, help="q,n,a,h,t with '.' for wildcards")
        sp.add_argument("--mode", choices=[m.value for m in Mode], default="finite")

    def with_budget(sp):
        sp.add_argument("--budget-nodes", type=int)
        sp.add_argument("--budget-secs", type=float)
        sp.add_argument("--no-theorem-bounds", action="store_true",
                        help="prune with clique covers only")

    parser = _Parser(prog="aed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("out", parents=[common], help="list Out(x)")
    with_params(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--plot")
    sp.set_defaults(func=cmd_out)

    sp = sub.add_parser("code", parents=[common], help="congruence codes")
    sp.add_argument("action", choices=("count", "enumerate", "jstar", "density"))
    with_params(sp)
    sp.add_argument("--j", type=int)
    sp.add_argument("--k", type=int, default=1000, help="window radius for density")
    sp.add_argument("--plot")
    sp.set_defaults(func=cmd_code)

    sp = sub.add_parser("check", parents=[common], help="exhaustive detection check")
    with_params(sp)
    sp.add_argument("--code", required=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("mindist", parents=[common], help="minimum Hamming distance")
    sp.add_argument("--code", required=True)
    sp.set_defaults(func=cmd_mindist)

    sp = sub.add_parser("bounds", parents=[common], help="upper bounds")
    with_params(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("search", parents=[common], help="exact optimal code size")
    with_params(sp)
    with_budget(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("sweep", parents=[common], help="optimal sizes over a grid")
    sp.add_argument("--grid", required=True, help="JSON or TOML grid file")
    with_budget(sp)
    sp.add_argument("--plot")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("sim", parents=[common], help="Monte Carlo channel simulation")
    with_params(sp)
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--code-family", help="j=<residue>")
    src.add_argument("--code")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--adversary", help="weight=<w>[,coord=<i>]")
    sp.set_defaults(func=cmd_sim)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"aed: {exc}", file=sys.stderr)
        return 1
    if args.format is None:
        # parents share Action objects, so a per-subparser default would leak
        args.format = "csv" if args.command == "sweep" else "json"
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args, Run(args, argv))
    except (UsageError, ParameterError, CapacityError, ValueError, OSError) as exc:
        print(f"aed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
