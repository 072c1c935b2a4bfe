"""Command-line interface: ``inaccessible <group> <command> [flags]``.

Output goes to stdout as JSON (floats in shortest round-trip form), CSV or
DOT. Exit status is 0 when the requested check passes, 1 when it fails and 2
for usage errors or invalid input.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys
from pathlib import Path

import numpy as np

from . import inaccessibility, lattice, mes, models, quasiprob, qubit, verify
from .lattice import Statement

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL = 1e-9


class UsageError(ValueError):
    pass


# --- input parsing -----------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def evaluate(expr: str) -> float:
    """Evaluate a constant expression: numbers, ``+ - * /``, parentheses and ``sqrt``."""

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](walk(node.operand))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt"
            and len(node.args) == 1
            and not node.keywords
        ):
            return math.sqrt(walk(node.args[0]))
        raise UsageError(f"unsupported expression: {expr!r}")

    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {expr!r}") from exc
    try:
        return walk(tree)
    except ZeroDivisionError as exc:
        raise UsageError(f"division by zero in {expr!r}") from exc


def parse_vector(text: str) -> np.ndarray:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("empty vector")
    return np.array([evaluate(p) for p in parts])


def parse_matrix(text: str) -> np.ndarray:
    """Rows separated by ``;``, entries by ``,``."""
    rows = [parse_vector(r) for r in text.split(";") if r.strip()]
    if len({len(r) for r in rows}) != 1:
        raise UsageError("matrix rows differ in length")
    return np.array(rows)


def parse_indices(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "bottom", "⊥"):
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"atom indices must be integers, got {text!r}") from exc


def parse_statement(text: str, D: int) -> Statement:
    if text.strip() in ("top", "⊤"):
        return Statement.top(D)
    idx = parse_indices(text)
    if any(not 0 <= i < D for i in idx):
        raise UsageError(f"atom index out of range for D={D}: {text!r}")
    return Statement.of(idx, D)


def load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def vector_arg(args, name: str = "q") -> np.ndarray:
    inline = getattr(args, name, None)
    if inline is not None:
        return parse_vector(inline)
    if getattr(args, "file", None):
        data = load_json(args.file)
        if isinstance(data, dict):
            data = data.get(name)
        if data is None:
            raise UsageError(f"{args.file} holds no {name!r} vector")
        return np.array([evaluate(str(v)) for v in data])
    raise UsageError(f"--{name} or --file is required")


_NAMED_RHO = {
    "identity/2": (0.0, 0.0, 0.0),
    "0": (0.0, 0.0, 1.0),
    "1": (0.0, 0.0, -1.0),
    "+": (1.0, 0.0, 0.0),
    "-": (-1.0, 0.0, 0.0),
    "+i": (0.0, 1.0, 0.0),
    "-i": (0.0, -1.0, 0.0),
}


def rho_arg(args) -> np.ndarray:
    if args.rho is not None:
        text = args.rho.strip()
        if text in _NAMED_RHO:
            return qubit.from_bloch(_NAMED_RHO[text])
        if text.startswith("bloch:"):
            r = parse_vector(text[len("bloch:"):])
            if r.shape != (3,):
                raise UsageError("bloch: needs three components")
            return qubit.from_bloch(r)
        raise UsageError(f"unknown state {text!r}; use a named state, bloch:x,y,z or --file")
    if args.file:
        return qubit.density_from_dict(load_json(args.file))
    raise UsageError("--rho or --file is required")


def model_arg(args) -> mes.MesModel:
    return mes.build(args.d)


# --- output ------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Statement):
        return list(obj.indices)
    return obj


def emit(obj) -> None:
    sys.stdout.write(json.dumps(_plain(obj), separators=(",", ":"), ensure_ascii=False) + "\n")


def _status(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAIL


# --- lattice -----------------------------------------------------------------


def _configuration(args) -> lattice.Configuration:
    if args.accessible is None:
        return lattice.ideal_configuration(args.D, args.d)
    gens = [parse_statement(g, args.D) for g in args.accessible.split(";") if g.strip()]
    return lattice.configuration_from_generators(args.D, args.d, gens)


def cmd_lattice_show(args) -> int:
    cfg = _configuration(args)
    if args.D > lattice.DOT_MAX_D:
        emit({"D": args.D, "d": args.d, "blocks": cfg.accessible_at_level(args.d)})
        return EXIT_OK
    rows = [
        {"statement": s, "level": s.level, "label": cfg.label(s)}
        for s in sorted(lattice.all_statements(args.D), key=lambda s: (s.level, s.indices))
    ]
    emit({"D": args.D, "d": args.d, "block_count": cfg.block_count, "statements": rows})
    return EXIT_OK


def cmd_lattice_check(args) -> int:
    cfg = _configuration(args)
    ok, violations = lattice.is_admissible_access(cfg)
    emit(
        {
            "admissible": ok,
            "violations": [{"kind": v.kind, "statements": list(v.statements), "message": v.message} for v in violations],
        }
    )
    return _status(ok)


def cmd_lattice_dot(args) -> int:
    sys.stdout.write(lattice.to_dot(_configuration(args)))
    return EXIT_OK


# --- model -------------------------------------------------------------------


def _class_dict(mc: models.ModelClass) -> dict:
    return {"kind": mc.tag.value, "m": mc.m}


def cmd_model_classify(args) -> int:
    model = models.Model(args.D, args.d)
    emit({"model": [model.D, model.d], **_class_dict(models.classify(model))})
    return EXIT_OK


def cmd_model_compose(args) -> int:
    comp = models.compose(models.Model(args.D, args.d), models.Model(args.D2, args.d2))
    D = comp.model.D
    emit(
        {
            "model": [D, comp.model.d],
            "pairing": [[i, j, k] for (i, j), k in sorted(comp.pairing.items())],
            "blocks": [Statement(b, D) for b in comp.blocks],
        }
    )
    return EXIT_OK


def cmd_model_inflate(args) -> int:
    model = models.inflate(args.m, args.c)
    emit({"m": args.m, "c": args.c, "model": [model.D, model.d], **_class_dict(models.classify(model))})
    return EXIT_OK


def cmd_model_inflations(args) -> int:
    emit(
        {
            "m": args.m,
            "d": args.d,
            "allowed": models.allowed_inflations(args.m, args.d),
            "literal_formula": models.printed_inflation_set(args.m, args.d),
        }
    )
    return EXIT_OK


# --- mes ---------------------------------------------------------------------


def cmd_mes_build(args) -> int:
    emit(model_arg(args).to_dict())
    return EXIT_OK


def cmd_mes_marginals(args) -> int:
    m = model_arg(args)
    emit({"marginals": mes.marginals(m, vector_arg(args))})
    return EXIT_OK


def cmd_mes_reconstruct(args) -> int:
    m = model_arg(args)
    if args.marginals is not None:
        am = parse_matrix(args.marginals)
    elif args.file:
        am = np.array([[evaluate(str(v)) for v in row] for row in load_json(args.file)["marginals"]])
    else:
        raise UsageError("--marginals or --file is required")
    emit({"q": mes.reconstruct(m, am, args.tol)})
    return EXIT_OK


def cmd_mes_member(args) -> int:
    m = model_arg(args)
    q = vector_arg(args)
    mode = mes.Mode(args.mode)
    member = mes.in_mes_set(m, q, mode, args.tol)
    sums = mes.marginals(m, q)
    emit(
        {
            "mode": mode.value,
            "member": member,
            "in_state_space": mes.in_state_space(m, q, args.tol),
            "chi": inaccessibility.chi(q),
            "min_block_sum": float(sums.min()),
            "max_block_sum": float(sums.max()),
        }
    )
    return _status(member)


def cmd_mes_sample(args) -> int:
    m = model_arg(args)
    states = mes.sample(m, args.n, args.seed)
    if args.format == "csv":
        sys.stdout.write(mes.samples_to_csv(m, states, args.tol))
    else:
        emit([{"q": q, "chi": inaccessibility.chi(q), "pure": mes.is_pure(m, q, args.tol)} for q in states])
    return EXIT_OK


# --- chi ---------------------------------------------------------------------


def cmd_chi_eval(args) -> int:
    p = vector_arg(args, "p")
    out = {"c": args.c, "chi_c": inaccessibility.chi_c(p, args.c)}
    out.update(inaccessibility.entropy_bridge(p, args.c))
    emit(out)
    return EXIT_OK


def cmd_chi_recursive(args) -> int:
    m = model_arg(args)
    q = vector_arg(args)
    value = inaccessibility.chi_c_recursive(m, q, args.c)
    out = {"d": args.d, "c": args.c, "recursive": value}
    if np.all(q >= -args.tol):
        out["direct"] = inaccessibility.chi_c(np.clip(q, 0, None), args.c)
    emit(out)
    return EXIT_OK


def cmd_chi_properties(args) -> int:
    report = inaccessibility.property_report(trials=args.n, seed=args.seed, tol=args.tol)
    emit(report)
    return _status(all(entry["passed"] for entry in report.values()))


# --- qp ----------------------------------------------------------------------


def _valuation(args) -> quasiprob.Valuation:
    return quasiprob.Valuation.of(vector_arg(args))


def cmd_qp_value(args) -> int:
    v = _valuation(args)
    s = parse_statement(args.s, v.dim)
    emit({"statement": s, "value": quasiprob.value(v, s)})
    return EXIT_OK


def cmd_qp_conditional(args) -> int:
    v = _valuation(args)
    y, x = parse_statement(args.y, v.dim), parse_statement(args.x, v.dim)
    emit({"y": y, "x": x, "conditional": quasiprob.conditional(v, y, x, args.tol)})
    return EXIT_OK


def cmd_qp_rules(args) -> int:
    v = _valuation(args)
    tol = args.rule_tol
    stats = quasiprob.check_rules(v, args.n, args.seed, tol=tol)
    emit(stats.as_dict(tol))
    return _status(stats.passed(tol))


def cmd_qp_counterexample(args) -> int:
    x = evaluate(args.x)
    g = quasiprob.g_counterexample(x)
    emit({"x": g.x, "q": g.q, "Q(A&B|C)": g.qab_c, "Q(B|C)": g.qb_c, "Q(A|B&C)": g.qa_bc})
    return EXIT_OK


# --- qubit -------------------------------------------------------------------


def cmd_qubit_to_q(args) -> int:
    emit({"q": qubit.rho_to_q(rho_arg(args), args.tol)})
    return EXIT_OK


def cmd_qubit_to_rho(args) -> int:
    rho = qubit.q_to_rho(vector_arg(args), args.tol)
    emit({"rho": qubit.density_to_dict(rho), "psd": qubit.is_psd(rho, args.tol)})
    return EXIT_OK


def cmd_qubit_purity(args) -> int:
    emit(qubit.purity_relation(rho_arg(args)))
    return EXIT_OK


def cmd_qubit_roundtrip(args) -> int:
    rho = rho_arg(args)
    q = qubit.rho_to_q(rho, args.tol)
    back = qubit.q_to_rho(q, args.tol)
    err = float(np.max(np.abs(back - rho)))
    emit({"q": q, "rho": qubit.density_to_dict(rho), "rho_back": qubit.density_to_dict(back), "max_error": err})
    return _status(err <= args.tol)


# --- verify ------------------------------------------------------------------


def cmd_verify_all(args) -> int:
    reports = verify.run_all(args.max_d, args.seed)
    for r in reports:
        r.elapsed = 0.0  # keep stdout identical across runs
    emit([r.to_dict() for r in reports])
    for r in reports:
        if not r.passed:
            print(f"{r.id} failed: {r.counterexample}", file=sys.stderr)
    return _status(all(r.passed for r in reports))


# --- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance for membership tests (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--file", help="JSON input file")
    common.add_argument("--format", choices=("json", "csv", "dot"), default="json", help="output format (default json)")

    parser = _Parser(prog="inaccessible", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def command(group, name, fn, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    def lattice_flags(p):
        p.add_argument("--D", type=int, required=True, help="number of atoms")
        p.add_argument("--d", type=int, default=1, help="accessibility depth (default 1)")
        p.add_argument(
            "--accessible", help='generators labelled A, e.g. "0,1;2,3" (default: the ideal configuration)'
        )

    g = groups.add_parser("lattice", help="statement lattices and accessibility labels").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    lattice_flags(command(g, "show", cmd_lattice_show, "list statements with labels"))
    lattice_flags(command(g, "check", cmd_lattice_check, "check admissibility (exit 1 if violated)"))
    lattice_flags(command(g, "dot", cmd_lattice_dot, "Graphviz Hasse diagram"))

    g = groups.add_parser("model", help="classification, composition, inflation").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = command(g, "classify", cmd_model_classify, "classical, useless or nontrivial")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p = command(g, "compose", cmd_model_compose, "product of two models")
    for flag in ("--D", "--d", "--D2", "--d2"):
        p.add_argument(flag, type=int, required=True)
    p = command(g, "inflate", cmd_model_inflate, "standard inflation of order c")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=int, default=1)
    p = command(g, "inflations", cmd_model_inflations, "dimensions an m-block model embeds into at depth d")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    g = groups.add_parser("mes", help="MES quasi-probability models").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )

    def mes_flags(p, state=True):
        p.add_argument("--d", type=int, required=True, help="prime depth")
        if state:
            p.add_argument("--q", help="comma-separated state; accepts p/q and sqrt(...); write --q=-0.1,... when it starts with a minus")

    mes_flags(command(g, "build", cmd_mes_build, "partitions of the model"), state=False)
    mes_flags(command(g, "marginals", cmd_mes_marginals, "accessible marginals of a state"))
    p = command(g, "reconstruct", cmd_mes_reconstruct, "state from accessible marginals")
    mes_flags(p, state=False)
    p.add_argument("--marginals", help='rows separated by ";", e.g. "1/2,1/2;1,0;0,1"')
    p = command(g, "member", cmd_mes_member, "block-constraint membership (exit 1 if outside)")
    mes_flags(p)
    p.add_argument("--mode", choices=[m.value for m in mes.Mode], default=mes.Mode.BLOCKS_ONLY.value)
    p = command(g, "sample", cmd_mes_sample, "sample admissible states")
    mes_flags(p, state=False)
    p.add_argument("--n", type=int, default=10, help="number of samples (default 10)")

    g = groups.add_parser("chi", help="inaccessibility measures").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = command(g, "eval", cmd_chi_eval, "order-c inaccessibility of a probability vector")
    p.add_argument("--p", help="comma-separated probability vector")
    p.add_argument("--c", type=float, default=2.0)
    p = command(g, "recursive", cmd_chi_recursive, "order-c inaccessibility from marginals only")
    mes_flags(p)
    p.add_argument("--c", type=int, default=2)
    p = command(g, "properties", cmd_chi_properties, "sampled property report (exit 1 on failure)")
    p.add_argument("--n", type=int, default=200, help="trials (default 200)")

    g = groups.add_parser("qp", help="quasi-probability valuations").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = command(g, "value", cmd_qp_value, "value of a statement")
    p.add_argument("--q")
    p.add_argument("--s", required=True, help='atom indices, e.g. "0,2", or "top"')
    p = command(g, "conditional", cmd_qp_conditional, "Q(y | x)")
    p.add_argument("--q")
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)
    p = command(g, "rules", cmd_qp_rules, "sum, product and Bayes rules on random triples")
    p.add_argument("--q")
    p.add_argument("--n", type=int, default=1000, help="triples (default 1000)")
    p.add_argument("--rule-tol", type=float, default=1e-12, help="residual tolerance (default 1e-12)")
    p = command(g, "counterexample", cmd_qp_counterexample, "four-atom non-monotone product-rule family")
    p.add_argument("--x", required=True, help="parameter in [1-sqrt(3), 1+sqrt(3)], x != 1")

    g = groups.add_parser("qubit", help="qubit frame correspondence").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    rho_help = 'identity/2, 0, 1, +, -, +i, -i or bloch:x,y,z'
    for name, fn, text in (
        ("to-q", cmd_qubit_to_q, "density matrix to quasi-probability state"),
        ("purity", cmd_qubit_purity, "compare chi(q) with 2/tr(rho^2)"),
        ("roundtrip", cmd_qubit_roundtrip, "rho -> q -> rho"),
    ):
        command(g, name, fn, text).add_argument("--rho", help=rho_help)
    command(g, "to-rho", cmd_qubit_to_rho, "quasi-probability state to matrix").add_argument("--q")

    g = groups.add_parser("verify", help="reproduce the structural results").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = command(g, "all", cmd_verify_all, "run every check; exit 1 on any failure")
    p.add_argument("--max-d", type=int, default=8, help=f"largest D for the lattice sweeps (<= {verify.MAX_D})")
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
