"""Command-line front end: one subcommand per experiment, CSV/JSON/text output.

Every output carries a ``#`` metadata header (tool version, config, seed,
wall-clock) and a trailing checksum of the data lines.  The checksum ignores
the header, so identical configs give identical checksums.

Exit codes: 0 on success (findings that contradict a claimed bound are
reported in the data, not as errors), 2 on a bad configuration, 3 when a
budget cap would be exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from ._budget import BudgetExceeded, check_budget
from .channel_model import (
    DEFAULT_SEED,
    SUBSTREAM_RULE,
    Regime,
    capacity_gap_threshold,
    parse_model,
    substream,
)
from .erasure_lab import affine_span_probability, mc_erasure_success, mc_span_success
from .error_lab import (
    check_erasures_to_errors,
    collision_witness,
    companion_matrix,
    companion_UB,
    mc_bsc_success,
    point_syndrome,
    random_independent_points,
)
from .gf2_linalg import format_matrix, select_rows
from .rm_core import Monomial, RmCode, binom_sum, eval_matrix, generator_tensor, monomials, tensor_order
from .spectrum import (
    binomial_identity_check,
    bsc_union_bound,
    enumerate_weights,
    gaussian_binomial,
    ghw,
    ghw_bruteforce,
    klp_bound,
)

DEFAULT_BUDGET_CODEWORDS = 1 << 26
DEFAULT_BUDGET_PATTERNS = 1 << 22
DEFAULT_BUDGET_CELLS = 1 << 26


class ConfigError(ValueError):
    pass


class Result:
    """Tabular output of one subcommand."""

    def __init__(self, columns: Sequence[str], rows: list[Sequence[Any]] | None = None, text: str | None = None):
        self.columns = list(columns)
        self.rows = rows or []
        self.text = text
        self.notes: list[str] = []


def _cell(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _json_cell(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def _data_csv(res: Result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(res.columns)
    for row in res.rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def render(res: Result, fmt: str, meta: dict[str, Any]) -> str:
    if fmt == "text":
        if res.text is None:
            raise ConfigError("text format is only available for the matrix subcommand")
        data = res.text
    else:
        data = _data_csv(res)
    checksum = "sha256:" + hashlib.sha256(data.encode()).hexdigest()
    if fmt == "json":
        doc = dict(meta)
        doc["notes"] = res.notes
        doc["columns"] = res.columns
        doc["rows"] = [[_json_cell(x) for x in row] for row in res.rows]
        doc["checksum"] = checksum
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    head = [f"# {key}: {json.dumps(value, sort_keys=True) if isinstance(value, dict) else value}" for key, value in meta.items()]
    head += [f"# note: {n}" for n in res.notes]
    return "\n".join(head) + "\n" + data + f"# checksum: {checksum}\n"


# -- subcommands ------------------------------------------------------------------------


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required for {args.command}")


def _code(args) -> RmCode:
    _need(args, "m", "r")
    return RmCode(args.m, args.r)


def cmd_matrix(args) -> Result:
    _need(args, "m", "r")
    m, r = args.m, args.r
    if args.kind == "eval":
        check_budget("matrix cells", binom_sum(m, r) << m, args.budget_cells)
        M = eval_matrix(m, r, max_cells=None)
        masks = [mon.vars for mon in monomials(m, r)]
        if args.order == "tensor":
            perm = tensor_order(m, r)
            M = select_rows(M, perm)
            masks = [masks[i] for i in perm]
        labels = [str(Monomial(v)) for v in masks]
    elif args.kind == "gen":
        check_budget("matrix cells", binom_sum(m, r) << m, args.budget_cells)
        M = generator_tensor(m, r)
        labels = [f"g{i}" for i in range(M.nrows)]
    else:
        k_dual = binom_sum(m, m - r - 1) if r < m else 0
        check_budget("matrix cells", k_dual << m, args.budget_cells)
        M = eval_matrix(m, m - r - 1, max_cells=None)
        labels = [str(mon) for mon in monomials(m, m - r - 1)]
    rows = [(i, labels[i], str(M.row(i))) for i in range(M.nrows)]
    return Result(["row", "label", "bits"], rows, text=format_matrix(M))


def cmd_erasure_sim(args) -> Result:
    code = _code(args)
    _need(args, "model")
    model = parse_model(args.model)
    f, hw = mc_erasure_success(code, model, args.trials, args.seed, max_n=args.budget_patterns)
    param = model.s if hasattr(model, "s") else model.p
    successes = round(f * args.trials)
    row = (code.m, code.r, str(model), param, args.trials, successes, f, hw, args.seed)
    res = Result(["m", "r", "model", "s_or_p", "trials", "successes", "fraction", "halfwidth", "seed"], [row])
    res.notes.append(f"substreams: {SUBSTREAM_RULE}")
    return res


def cmd_span_sim(args) -> Result:
    _need(args, "m", "r", "s")
    f = mc_span_success(args.m, args.r, args.s, args.trials, args.seed, max_n=args.budget_patterns)
    successes = round(f * args.trials)
    hw = 1.96 * (f * (1 - f) / args.trials) ** 0.5
    exact = str(affine_span_probability(args.m, args.s)) if args.r == 1 else ""
    row = (args.m, args.r, args.s, args.trials, successes, f, hw, exact, args.seed)
    res = Result(["m", "r", "s", "trials", "successes", "fraction", "halfwidth", "exact_r1", "seed"], [row])
    res.notes.append(f"substreams: {SUBSTREAM_RULE}")
    return res


def cmd_bsc_sim(args) -> Result:
    code = _code(args)
    _need(args, "model")
    model = parse_model(args.model)
    budget = args.budget_codewords if args.method == "ml" else args.budget_patterns
    f, hw = mc_bsc_success(code, model, args.trials, args.seed, args.method, budget)
    param = model.s if hasattr(model, "s") else model.p
    row = (code.m, code.r, str(model), param, args.method, args.trials, round(f * args.trials), f, hw, args.seed)
    res = Result(
        ["m", "r", "model", "s_or_p", "method", "trials", "successes", "fraction", "halfwidth", "seed"], [row]
    )
    res.notes.append(f"substreams: {SUBSTREAM_RULE}")
    return res


def cmd_reduction_check(args) -> Result:
    _need(args, "m", "r")
    rep = check_erasures_to_errors(
        args.m, args.r, args.s_max, budget=args.budget_patterns, seed=args.seed, samples=args.trials
    )
    s_max = args.m if args.s_max is None else args.s_max
    row = (args.m, args.r, 2 * args.r + 1, s_max, rep.checked, rep.skipped, rep.violations, rep.sampled)
    res = Result(["m", "r", "check_degree", "s_max", "checked", "skipped", "violations", "sampled"], [row])
    for u, v in rep.witnesses:
        res.notes.append(f"violation: U={list(u)} V={list(v)}")
    if rep.sampled:
        res.notes.append(f"substreams: random sets drawn from stream 0; {SUBSTREAM_RULE}")
    return res


def cmd_counterexample(args) -> Result:
    _need(args, "m", "s")
    m, s = args.m, args.s
    if s > m:
        raise ConfigError(f"need s <= m for independent columns, got s={s}, m={m}")
    U = random_independent_points(m, s, substream(args.seed, 0))
    B = companion_matrix(s)
    V = companion_UB(U)
    su, sv = point_syndrome(U, 2), point_syndrome(V, 2)
    differs = U.as_set() != V.as_set()
    res = Result(["field", "value"])
    res.rows += [
        ("m", m),
        ("s", s),
        ("seed", args.seed),
        ("U", " ".join(map(str, U.columns))),
        ("B", " ".join(str(B.row(i)) for i in range(s))),
        ("V", " ".join(map(str, V.columns))),
        ("syndrome_U", str(su)),
        ("syndrome_V", str(sv)),
        ("syndromes_equal", su == sv),
        ("V_differs_from_U", differs),
    ]
    if differs and len(V.as_set()) == s:
        # a full decodability verdict needs a collision search; only attempt it within budget
        try:
            Vp = V.to_pattern()
            w = collision_witness(eval_matrix(m, 2), U.to_pattern(), budget=args.budget_patterns)
            res.rows.append(("unique_error_decodable", w is None))
            res.rows.append(("partner_weight", Vp.weight))
        except BudgetExceeded:
            res.rows.append(("unique_error_decodable", "not decided (budget)"))
    res.rows.append(("verdict", "collision" if su == sv and differs else "no collision"))
    res.notes.append(f"U drawn from stream 0; {SUBSTREAM_RULE}")
    return res


def cmd_weights(args) -> Result:
    _need(args, "m", "r")
    check_budget("codewords", 1 << binom_sum(args.m, args.r), args.budget_codewords)
    dist = enumerate_weights(args.m, args.r, budget=args.budget_codewords)
    return Result(["w", "count"], [(w, c) for w, c in dist.items()])


def cmd_ghw(args) -> Result:
    _need(args, "m", "r")
    k = binom_sum(args.m, args.r)
    rows = []
    for a in range(1, k + 1):
        bf: Any = ""
        if args.bruteforce and gaussian_binomial(k, a) <= args.budget_patterns:
            bf = ghw_bruteforce(args.m, args.r, a, budget=args.budget_patterns)
        rows.append((a, ghw(args.m, args.r, a), bf))
    return Result(["a", "d_a", "d_a_bruteforce"], rows)


def cmd_bound(args) -> Result:
    _need(args, "m", "r")
    if args.kind == "klp":
        _need(args, "ell", "eps")
        b = klp_bound(args.m, args.r, args.ell, Fraction(args.eps), Fraction(args.c))
        row = (args.m, args.r, args.ell, args.eps, args.c, str(b.multiplier), b.log2_bound)
        return Result(["m", "r", "ell", "eps", "c", "multiplier", "log2_bound"], [row])
    _need(args, "s")
    check_budget("codewords", 1 << binom_sum(args.m, args.r), args.budget_codewords)
    dist = enumerate_weights(args.m, args.r, budget=args.budget_codewords)
    ub = bsc_union_bound(args.m, args.r, args.s, dist)
    return Result(["m", "r", "s", "union_bound", "union_bound_float"], [(args.m, args.r, args.s, str(ub), float(ub))])


def cmd_identity_sweep(args) -> Result:
    top = 20 if args.m is None else args.m
    rows = []
    for m in range(1, top + 1):
        for r in range(1, m + 1):
            for t in range(m + 1):
                rows.append((m, r, t, binomial_identity_check(m, r, t)))
    res = Result(["m", "r", "t", "pass"], rows)
    res.notes.append(f"failures: {sum(1 for row in rows if not row[3])}")
    return res


def cmd_capacity(args) -> Result:
    regimes = [Regime(args.regime)] if args.regime else list(Regime)
    rates = [args.R] if args.R is not None else [0.1, 0.25, 0.5, 0.75, 0.9]
    rows = []
    for reg in regimes:
        for R in rates:
            try:
                p: Any = capacity_gap_threshold(reg, R, args.eps)
            except ValueError:
                p = ""
            rows.append((reg.value, R, args.eps, p))
    return Result(["regime", "R", "eps", "p"], rows)


COMMANDS = {
    "matrix": cmd_matrix,
    "erasure-sim": cmd_erasure_sim,
    "span-sim": cmd_span_sim,
    "bsc-sim": cmd_bsc_sim,
    "reduction-check": cmd_reduction_check,
    "counterexample": cmd_counterexample,
    "weights": cmd_weights,
    "ghw": cmd_ghw,
    "bound": cmd_bound,
    "identity-sweep": cmd_identity_sweep,
    "capacity": cmd_capacity,
}


def _positive(text: str) -> int:
    value = int(text, 0)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--model", help="uniform:s=<s> or iid:p=<p>")
    common.add_argument("--trials", type=_positive, default=1000)
    common.add_argument("--seed", type=lambda t: int(t, 0), default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
    common.add_argument("--budget-codewords", type=_positive, default=DEFAULT_BUDGET_CODEWORDS)
    common.add_argument("--budget-patterns", type=_positive, default=DEFAULT_BUDGET_PATTERNS)
    common.add_argument("--budget-cells", type=_positive, default=DEFAULT_BUDGET_CELLS)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json", "text"], default="csv")

    parser = argparse.ArgumentParser(prog="rmlab", description="Reed-Muller erasure/error experiments.")
    parser.add_argument("--version", action="version", version=f"rmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matrix", parents=[common], help="dump E(m,r), G(m,r) or the parity-check matrix")
    p.add_argument("--kind", choices=["eval", "gen", "check"], default="eval")
    p.add_argument(
        "--order",
        choices=["canonical", "tensor"],
        default="canonical",
        help="row order for --kind eval: by degree, or by monomial bitmask (Kronecker order)",
    )
    sub.add_parser("erasure-sim", parents=[common], help="Monte-Carlo erasure decoding")
    p = sub.add_parser("span-sim", parents=[common], help="do s random points give spanning evaluation vectors")
    p.add_argument("--s", type=int)
    p = sub.add_parser("bsc-sim", parents=[common], help="Monte-Carlo unique error decoding")
    p.add_argument("--method", choices=["syndrome", "ml"], default="syndrome")
    p = sub.add_parser("reduction-check", parents=[common], help="independent sets of E(m,r) under E(m,2r+1)")
    p.add_argument("--s-max", type=int)
    p = sub.add_parser("counterexample", parents=[common], help="colliding pair U, U*B under E(m,2)")
    p.add_argument("--s", type=int, default=6)
    sub.add_parser("weights", parents=[common], help="exact weight distribution")
    p = sub.add_parser("ghw", parents=[common], help="generalized Hamming weights")
    p.add_argument("--bruteforce", action="store_true", help="also brute-force d_a within --budget-patterns subcodes")
    p = sub.add_parser("bound", parents=[common], help="weight-count bound or BSC union bound")
    p.add_argument("--kind", choices=["klp", "union"], default="klp")
    p.add_argument("--ell", type=int)
    p.add_argument("--eps", type=str)
    p.add_argument("--c", type=str, default="1")
    p.add_argument("--s", type=int)
    p = sub.add_parser("identity-sweep", parents=[common], help="binomial identity for all m <= --m (default 20)")
    p = sub.add_parser("capacity", parents=[common], help="capacity-gap thresholds")
    p.add_argument("--regime", choices=[g.value for g in Regime])
    p.add_argument("--R", type=float)
    p.add_argument("--eps", type=float, default=0.0)
    return parser


def _config(args) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on a malformed command line
    start = time.perf_counter()
    try:
        res = COMMANDS[args.command](args)
        meta = {
            "tool": f"rmlab {__version__}",
            "config": _config(args),
            "seed": args.seed,
            "wall_clock_s": round(time.perf_counter() - start, 6),
        }
        out = render(res, args.format, meta)
    except BudgetExceeded as exc:
        print(f"rmlab: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, ArithmeticError) as exc:
        print(f"rmlab: configuration error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
