"""Command-line entry point: ``abelsum <command> ...``.

Exit codes: 0 success, 1 a checked claim or design failed, 2 usage error,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .cache import CacheError, CacheRecord, ResultCache
from .combinatorics import a_closed, q_bound
from .constructions import FamilyRangeError, family_indep, family_span, q3_branch
from .groups import AbelianGroup, BudgetExceeded, GroupMismatch
from .search import DEFAULT_NODE_BUDGET, p_min, q_max
from .spanind import (
    Claim,
    NotSpanning,
    certify,
    independence_number,
    is_s_spanning,
    minimal_relation,
    reach_layers,
    spanning_number,
)
from .spherical import (
    MOMENT_TOL,
    Infeasible,
    OffSphereError,
    PointSet,
    corollary_construct,
    dgs_bound,
    lift,
    polygon,
    verify_design,
    verify_lift_exact,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

ENV_CACHE = "ABELSUM_CACHE"
ENV_JOBS = "ABELSUM_JOBS"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    jobs: int = 1
    cache_path: Path | None = None
    output_format: str = "json"
    tolerance: float = MOMENT_TOL
    node_budget: int = DEFAULT_NODE_BUDGET
    fresh: bool = False

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cache = getattr(args, "cache", None) or os.environ.get(ENV_CACHE)
        if getattr(args, "no_cache", False):
            cache = None
        elif cache is None:
            cache = str(Path.home() / ".cache" / "abelsum" / "results.jsonl")
        jobs = getattr(args, "jobs", None) or int(os.environ.get(ENV_JOBS, "1"))
        return cls(
            command=args.command,
            jobs=jobs,
            cache_path=Path(cache) if cache else None,
            output_format=args.format,
            tolerance=getattr(args, "tol", MOMENT_TOL),
            node_budget=getattr(args, "budget", DEFAULT_NODE_BUDGET),
            fresh=getattr(args, "fresh", False),
        )


# -- output -------------------------------------------------------------------


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def emit(obj, fmt: str, out, text: str | None = None) -> None:
    if fmt == "json" or text is None:
        out.write(dump_json(obj) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _jsonable(v):
    return v.value if hasattr(v, "value") and not isinstance(v, (int, float, str)) else v


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    group_arg = argparse.ArgumentParser(add_help=False)
    group_arg.add_argument("-g", "--group", required=True, help='invariant factors, e.g. "25" or "2,4"')
    group_arg.add_argument("-A", "--set", default="", help='elements, e.g. "1,4,6" or "1,3;0,2"')

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    search.add_argument("--symmetry", action="store_true", help="unit-orbit reduction (cyclic groups)")
    search.add_argument("--cache", help=f"results file (default ${ENV_CACHE} or ~/.cache/abelsum)")
    search.add_argument("--no-cache", action="store_true")
    search.add_argument("--fresh", action="store_true", help="ignore cached results")

    p = argparse.ArgumentParser(prog="abelsum", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("span", parents=[common, group_arg], help="spanning number span(A)")
    sub.add_parser("ind", parents=[common, group_arg], help="independence number ind(A)")
    c = sub.add_parser("check", parents=[common, group_arg], help="check a claim on A")
    c.add_argument("--claim", required=True, help="spanning:s | independent:t | perfect:s | tight:t")

    c = sub.add_parser("construct", parents=[common], help="build a known family")
    c.add_argument("--family", required=True)
    for flag in ("--n", "--s", "--t", "--p", "--m"):
        c.add_argument(flag, type=int)

    c = sub.add_parser("q3", parents=[common], help="exact q(Z_n, 3)")
    c.add_argument("--n", type=int, required=True)

    c = sub.add_parser("bound", parents=[common], help="a(m,s) or q(m,t)")
    c.add_argument("which", choices=("a", "q"))
    c.add_argument("m", type=int)
    c.add_argument("k", type=int, metavar="s_or_t")

    c = sub.add_parser("pmin", parents=[common, search], help="minimum s-spanning set size")
    c.add_argument("-g", "--group", required=True)
    c.add_argument("-s", type=int, required=True)
    c = sub.add_parser("qmax", parents=[common, search], help="maximum t-independent set size")
    c.add_argument("-g", "--group", required=True)
    c.add_argument("-t", type=int, required=True)

    c = sub.add_parser("table", parents=[common, search], help="p or q over cyclic groups Z_n")
    c.add_argument("mode", choices=("p", "q"))
    c.add_argument("--param", type=int, required=True)
    c.add_argument("--from", dest="n_from", type=int, required=True)
    c.add_argument("--to", dest="n_to", type=int, required=True)
    c.add_argument("--jobs", type=int)

    d = sub.add_parser("design", help="spherical designs")
    dsub = d.add_subparsers(dest="design_command", required=True)
    c = dsub.add_parser("gen", parents=[common], help="write lift(A, n) as CSV")
    c.add_argument("-A", "--set", required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--out")
    c = dsub.add_parser("verify", parents=[common], help="check the design property")
    c.add_argument("--in", dest="infile")
    c.add_argument("-A", "--set", help="verify lift(A, n) directly instead of a file")
    c.add_argument("-n", type=int)
    c.add_argument("--exact", action="store_true", help="exact arithmetic (needs -A and -n)")
    c.add_argument("-t", type=int, required=True)
    c.add_argument("--tol", type=float, default=MOMENT_TOL)
    c = dsub.add_parser("dgs", parents=[common], help="DGS lower bound")
    c.add_argument("-t", type=int, required=True)
    c.add_argument("-d", type=int, required=True)
    c = dsub.add_parser("polygon", parents=[common], help="regular n-gon as CSV")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--out")
    c = dsub.add_parser("corollary", parents=[common], help="explicit t-design for t <= 3, d odd")
    c.add_argument("-t", type=int, required=True)
    c.add_argument("-d", type=int, required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--out")
    return p


# -- commands -----------------------------------------------------------------


def _group_and_set(args):
    G = AbelianGroup.parse(args.group)
    return G, G.parse_elements(args.set)


def cmd_span(args, cfg, out) -> int:
    G, A = _group_and_set(args)
    s = spanning_number(G, A)
    if s is NotSpanning:
        reached = reach_layers(G, A, G.order)[-1]
        missing = G.from_index(min(set(range(G.order)) - reached))
        obj = {"value": s.value, "span": s.value, "witness": {"unreached": missing.to_json()}, "certificate": None}
        emit(obj, cfg.output_format, out, f"not-spanning (unreached {missing})")
        return EXIT_OK
    witness = None
    if s > 0:
        v = is_s_spanning(G, A, s - 1)
        witness = {"radius": s - 1, "unreached": v.witness.to_json()}
    cert = certify(G, A, Claim("spanning", s))
    obj = {"value": s, "span": s, "witness": witness, "certificate": cert.to_json()}
    emit(obj, cfg.output_format, out, str(s))
    return EXIT_OK


def cmd_ind(args, cfg, out) -> int:
    G, A = _group_and_set(args)
    t = independence_number(G, A)
    if not isinstance(t, int):
        obj = {"value": t.value, "ind": t.value, "witness": None, "certificate": None}
        emit(obj, cfg.output_format, out, t.value)
        return EXIT_OK
    rel = minimal_relation(G, A)
    cert = certify(G, A, Claim("independent", t))
    obj = {"value": t, "ind": t, "witness": rel.to_json(), "certificate": cert.to_json()}
    emit(obj, cfg.output_format, out, f"{t} (relation {rel.to_json()})")
    return EXIT_OK


def cmd_check(args, cfg, out) -> int:
    G, A = _group_and_set(args)
    try:
        claim = Claim.parse(args.claim)
    except ValueError as exc:
        raise UsageError(f"bad claim {args.claim!r}: {exc}") from exc
    cert = certify(G, A, claim)
    emit({"certificate": cert.to_json(), "value": cert.holds}, cfg.output_format, out, str(cert.holds).lower())
    return EXIT_OK if cert.holds else EXIT_FAIL


def cmd_construct(args, cfg, out) -> int:
    try:
        if args.family in ("single", "consec", "alt", "halfrange"):
            cert = family_span(args.family, n=args.n, s=args.s, m=args.m)
        else:
            cert = family_indep(args.family, n=args.n, t=args.t, p=args.p, m=args.m)
    except FamilyRangeError as exc:
        raise UsageError(str(exc)) from exc
    emit({"certificate": cert.to_json()}, cfg.output_format, out, " ".join(map(str, cert.values())))
    return EXIT_OK


def cmd_q3(args, cfg, out) -> int:
    branch, value = q3_branch(args.n)
    emit({"n": args.n, "value": value, "branch": branch}, cfg.output_format, out, f"{value} ({branch})")
    return EXIT_OK


def cmd_bound(args, cfg, out) -> int:
    if args.m < 0 or args.k < 0:
        raise UsageError("m and s/t must be non-negative")
    if args.which == "a":
        v = a_closed(args.m, args.k)
    else:
        if args.k < 2:
            print(f"warning: q(m,t) is only a theorem for t >= 2; t={args.k} uses the extension", file=sys.stderr)
        v = q_bound(args.m, args.k)
    emit({"value": v}, cfg.output_format, out, str(v))
    return EXIT_OK


def _open_cache(cfg: RunConfig) -> ResultCache | None:
    if cfg.cache_path is None:
        return None
    try:
        return ResultCache(cfg.cache_path)
    except OSError as exc:
        raise UsageError(f"cannot read cache {cfg.cache_path}: {exc}") from exc


def _search(G: AbelianGroup, mode: str, param: int, cfg: RunConfig, symmetry: bool, cache) -> dict:
    if cache is not None and not cfg.fresh:
        rec = cache.get(str(G), mode, param)
        if rec is not None and rec.proved:
            return {"group": rec.group, "mode": mode, "param": param, "value": rec.value,
                    "certificate": rec.certificate, "proved": True, "cached": True}
    res = (p_min if mode == "p" else q_max)(G, param, cfg.node_budget, symmetry)
    if cache is not None:
        try:
            cache.append(CacheRecord.from_result(res))
        except CacheError as exc:
            raise UsageError(str(exc)) from exc
    obj = res.to_json()
    obj.pop("nodes", None)
    obj["cached"] = False
    return obj


def cmd_pmin_qmax(args, cfg, out) -> int:
    G = AbelianGroup.parse(args.group)
    mode, param = ("p", args.s) if args.command == "pmin" else ("q", args.t)
    if mode == "p" and param < 1 and G.order > 1:
        raise UsageError("s must be >= 1")
    if mode == "q" and param < 2:
        print(f"warning: t={param} is below the range of the order bound; search is plain", file=sys.stderr)
    obj = _search(G, mode, param, cfg, args.symmetry, _open_cache(cfg))
    emit(obj, cfg.output_format, out, f"{obj['value']}")
    return EXIT_OK if obj["proved"] else EXIT_BUDGET


def _table_row(job) -> dict:
    mode, param, n, budget, symmetry = job
    G = AbelianGroup.cyclic(n)
    res = (p_min if mode == "p" else q_max)(G, param, budget, symmetry)
    obj = res.to_json()
    obj.pop("nodes", None)
    return obj


def _row_view(obj: dict) -> dict:
    cert = obj.get("certificate") or {}
    flag = cert.get("perfect") if obj["mode"] == "p" else cert.get("tight")
    return {
        "n": int(obj["group"]),
        "value": obj["value"],
        "extremal": bool(flag),
        "set": cert.get("set"),
        "proved": obj["proved"],
    }


def compute_table(mode: str, param: int, n_from: int, n_to: int, cfg: RunConfig, symmetry: bool = False) -> list[dict]:
    if n_from < 1 or n_to < n_from:
        raise UsageError("need 1 <= --from <= --to")
    if mode == "p" and param < 1:
        raise UsageError("spanning tables need s >= 1")
    cache = _open_cache(cfg)
    rows: dict[int, dict] = {}
    todo = []
    for n in range(n_from, n_to + 1):
        rec = None if (cache is None or cfg.fresh) else cache.get(str(n), mode, param)
        if rec is not None and rec.proved:
            rows[n] = {"group": rec.group, "mode": mode, "param": param, "value": rec.value,
                       "certificate": rec.certificate, "proved": True}
        else:
            todo.append((mode, param, n, cfg.node_budget, symmetry))
    if cfg.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            done = list(pool.map(_table_row, todo))
    else:
        done = [_table_row(j) for j in todo]
    for job, obj in zip(todo, done):
        rows[job[2]] = obj
        if cache is not None:
            cache.append(CacheRecord(obj["group"], mode, param, obj["value"], obj["certificate"], obj["proved"]))
    return [_row_view(rows[n]) for n in sorted(rows)]


def cmd_table(args, cfg, out) -> int:
    rows = compute_table(args.mode, args.param, args.n_from, args.n_to, cfg, args.symmetry)
    if cfg.output_format == "json":
        out.write(dump_json({"mode": args.mode, "param": args.param, "rows": rows}) + "\n")
    elif cfg.output_format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "value", "extremal", "proved", "set"])
        for r in rows:
            w.writerow([r["n"], r["value"], int(r["extremal"]), int(r["proved"]), " ".join(map(str, r["set"] or []))])
    else:
        for r in rows:
            mark = "*" if r["extremal"] else " "
            out.write(f"{r['n']:>5} {r['value']!s:>3}{mark} {r['set']}\n")
    return EXIT_OK if all(r["proved"] for r in rows) else EXIT_BUDGET


def _write_points(X: PointSet, dest, out) -> None:
    if dest:
        Path(dest).write_text(X.to_csv())
    else:
        out.write(X.to_csv())


def cmd_design(args, cfg, out) -> int:
    dc = args.design_command
    if dc == "gen":
        A = [int(a) for a in args.set.split(",")]
        _write_points(lift(A, args.n), args.out, out)
        return EXIT_OK
    if dc == "polygon":
        _write_points(polygon(args.n), args.out, out)
        return EXIT_OK
    if dc == "dgs":
        v = dgs_bound(args.t, args.d)
        emit({"value": v}, cfg.output_format, out, str(v))
        return EXIT_OK
    if dc == "corollary":
        try:
            X = corollary_construct(args.t, args.d, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if isinstance(X, Infeasible):
            emit({"feasible": False, "reason": X.reason}, cfg.output_format, out, X.reason)
            return EXIT_FAIL
        if args.out or cfg.output_format == "csv":
            _write_points(X, args.out, out)
        else:
            emit({"feasible": True, "frequencies": list(X.frequencies), "n": X.n}, cfg.output_format, out,
                 ",".join(map(str, X.frequencies)))
        return EXIT_OK
    # verify
    if args.exact:
        if not args.set or not args.n:
            raise UsageError("--exact needs -A and -n")
        rep = verify_lift_exact([int(a) for a in args.set.split(",")], args.n, args.t)
    else:
        if args.infile:
            X = PointSet.from_csv(Path(args.infile).read_text())
        elif args.set and args.n:
            X = lift([int(a) for a in args.set.split(",")], args.n)
        else:
            raise UsageError("design verify needs --in FILE or -A and -n")
        try:
            rep = verify_design(X, args.t, args.tol)
        except OffSphereError as exc:
            raise UsageError(str(exc)) from exc
    emit(rep.to_json(), cfg.output_format, out, "pass" if rep.passed else f"fail (strength {rep.strength})")
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "span": cmd_span,
    "ind": cmd_ind,
    "check": cmd_check,
    "construct": cmd_construct,
    "q3": cmd_q3,
    "bound": cmd_bound,
    "pmin": cmd_pmin_qmax,
    "qmax": cmd_pmin_qmax,
    "table": cmd_table,
    "design": cmd_design,
}


def dispatch(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "format"):
        args.format = "json"
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](args, cfg, out)
    except (UsageError, GroupMismatch, ValueError) as exc:
        print(f"abelsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"abelsum: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def run(argv: list[str]) -> tuple[int, str]:
    """Dispatch and capture stdout; handy for scripting and tests."""
    buf = io.StringIO()
    code = dispatch(argv, buf)
    return code, buf.getvalue()


def main() -> int:
    return dispatch(sys.argv[1:])
