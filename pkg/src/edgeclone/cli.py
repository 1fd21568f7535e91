"""Command-line front end.

Exit codes: 0 success, 1 negative decision, 2 input error, 3 resource cap.
Files use 0-based element values; words and pairs typed on the command line
are 1-based, as are elements in the text reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import words as W
from .clone import (
    clone_layer,
    compute_m,
    find_edge,
    find_malcev,
    find_nu,
    is_term_function,
    lambda_member,
    phi,
)
from .config import Config, ContractError, DomainError, ResourceLimitError
from .core import OperationTable, Relation
from .galois import (
    CounterexampleError,
    combine_relations,
    pol_layer,
    preserves,
    rep_check,
    subuniverses,
    verify_determination,
)
from .io import InputError, algebra_from_json, dumps, load, op_from_json, op_to_json, ops_from_json, relation_from_json, relation_to_json
from .ppgroup import GroupTable, InsufficientRelationError, build_pp_formula, eval_pp_formula

OK, NO, BAD_INPUT, RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _word(text: str, t: int | None = None) -> W.Word:
    try:
        letters = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse word {text!r}: {exc.msg}") from exc
    if not isinstance(letters, list) or not all(isinstance(v, int) for v in letters):
        raise InputError(f"word {text!r} must be a JSON list of integers")
    word = tuple(v - 1 for v in letters)
    return W.check_word(word, t)


def _show(word: Sequence[int]) -> list[int]:
    return [v + 1 for v in word]


def _pairs_text(pairs) -> str:
    return "{" + ", ".join(f"({c + 1},{d + 1})" for c, d in sorted(pairs)) + "}"


def _gens(args) -> tuple[int | None, tuple[OperationTable, ...]]:
    size, ops = None, ()
    for path in args.gens or []:
        s, more = ops_from_json(load(path), path)
        if size is not None and s is not None and s != size:
            raise InputError(f"{path}: domain size {s} differs from {size}")
        size = size if s is None else s
        ops += more
    if getattr(args, "algebra", None):
        alg = algebra_from_json(load(args.algebra), args.algebra)
        if size is not None and alg.size != size:
            raise InputError(f"{args.algebra}: domain size {alg.size} differs from {size}")
        size, ops = alg.size, ops + alg.basic_ops
    if getattr(args, "domain_size", None):
        if size is not None and size != args.domain_size:
            raise InputError("--domain-size disagrees with the generator files")
        size = args.domain_size
    if size is None:
        raise InputError("give --algebra, --gens, or --domain-size")
    return size, ops


def _relations(paths) -> list[Relation]:
    return [relation_from_json(load(p), p) for p in paths or []]


def _table_text(f: OperationTable) -> str:
    return " ".join(str(v + 1) for v in f.values)


class Report:
    def __init__(self, as_json: bool, out):
        self.as_json = as_json
        self.out = out

    def emit(self, doc: dict, text: str) -> None:
        self.out.write((dumps(doc) if self.as_json else text) + "\n")


# --- subcommands -----------------------------------------------------------


def cmd_closure(args, cfg, rep):
    t, ops = _gens(args)
    layer = clone_layer(ops, args.arity, t, cfg)
    lines = [f"clone layer of arity {args.arity} on {t} elements: {len(layer)} operations"]
    lines += [f"  {_table_text(f)}" for f in layer]
    rep.emit({"domain_size": t, "arity": args.arity, "size": len(layer), "operations": [op_to_json(f) for f in layer]}, "\n".join(lines))
    return OK


def cmd_find_term(args, cfg, rep):
    t, ops = _gens(args)
    if args.kind == "malcev":
        f = find_malcev(ops, t, cfg)
    elif args.kind == "edge":
        f = find_edge(ops, args.k, t, cfg)
    else:
        f = find_nu(ops, args.k, t, cfg)
    label = args.kind if args.kind == "malcev" else f"{args.kind} (k={args.k})"
    if f is None:
        rep.emit({"kind": args.kind, "k": args.k, "found": False}, f"no {label} term")
        return NO
    rep.emit({"kind": args.kind, "k": args.k, "found": True, "operation": op_to_json(f)}, f"{label} term: {_table_text(f)}")
    return OK


def cmd_phi(args, cfg, rep):
    t, ops = _gens(args)
    a = _word(args.word, t)
    pairs = phi(clone_layer(ops, len(a), t, cfg), a)
    rep.emit({"word": _show(a), "pairs": sorted(list(p) for p in pairs)}, f"phi at {_show(a)} = {_pairs_text(pairs)}")
    return OK


def cmd_lambda(args, cfg, rep):
    t, ops = _gens(args)
    a = _word(args.word, t)
    c, d = _word(args.pair, t)
    member = lambda_member(ops, (c, d), a, t, cfg)
    verdict = "in" if member else "not in"
    rep.emit({"word": _show(a), "pair": [c, d], "member": member}, f"{_show(a)} is {verdict} lambda({c + 1},{d + 1})")
    return OK if member else NO


def cmd_compute_m(args, cfg, rep):
    t, ops = _gens(args)
    report = compute_m(ops, args.max_len, t, cfg)
    lines = [f"m = {report.m}" + ("" if report.all_closed else " (lower bound: some frontier did not close)")]
    for pair in sorted(report.minimals):
        mins = ", ".join(str(_show(w)) for w in report.minimals[pair]) or "none"
        lines.append(f"  ({pair[0] + 1},{pair[1] + 1}): minimals {mins}; frontier closed: {report.frontier_closed[pair]}")
    doc = report.to_dict()
    for p in doc["pairs"]:
        p["minimals"] = [_show(w) for w in p["minimals"]]
    rep.emit(doc, "\n".join(lines))
    return OK


def cmd_is_term_function(args, cfg, rep):
    t, ops = _gens(args)
    f = op_from_json(load(args.fn), t, args.fn)
    mode = "exhaustive" if args.mode == "exhaustive" else "relations"
    rels = _relations(args.relation)
    if mode == "relations" and not rels:
        raise InputError("--mode relations needs at least one --relation")
    member = is_term_function(ops, f, mode, rels, cfg)
    rep.emit({"mode": mode, "member": member}, "term function" if member else "not a term function")
    return OK if member else NO


def cmd_pol(args, cfg, rep):
    rels = _relations(args.relation)
    t = args.domain_size or (rels[0].size if rels else None)
    if t is None:
        raise InputError("give --relation or --domain-size")
    ops = pol_layer(rels, args.arity, t, cfg)
    lines = [f"{len(ops)} operations of arity {args.arity} preserve the relations"] + [f"  {_table_text(f)}" for f in ops]
    rep.emit({"arity": args.arity, "size": len(ops), "operations": [op_to_json(f) for f in ops]}, "\n".join(lines))
    return OK


def cmd_preserves(args, cfg, rep):
    rels = _relations(args.relation)
    f = op_from_json(load(args.fn), rels[0].size if rels else None, args.fn)
    ok = all(preserves(f, r) for r in rels)
    rep.emit({"preserves": ok}, "preserves" if ok else "does not preserve")
    return OK if ok else NO


def cmd_subuniverses(args, cfg, rep):
    alg = algebra_from_json(load(args.algebra), args.algebra)
    fam = subuniverses(alg, args.power, cfg)
    lines = [f"{len(fam)} subuniverses of the power {args.power}"]
    lines += ["  {" + ", ".join(str(_show(x)) for x in r.sorted()) + "}" for r in fam]
    rep.emit({"power": args.power, "count": len(fam), "subuniverses": [relation_to_json(r) for r in fam]}, "\n".join(lines))
    return OK


def cmd_rep_check(args, cfg, rep):
    alg = algebra_from_json(load(args.algebra), args.algebra)
    F = relation_from_json(load(args.F), args.F)
    G = relation_from_json(load(args.G), args.G)
    v = rep_check(F, G, alg, args.k, cfg)
    text = (
        f"hypotheses hold: {v.hypotheses_hold} (projections {v.projections_agree}, forks {v.forks_contained}); "
        f"F = G: {v.conclusion_holds}; {args.k}-edge term: {v.has_edge_term}"
    )
    rep.emit(v.to_dict(), text)
    return OK


def cmd_combine(args, cfg, rep):
    rels = _relations(args.relation)
    if not rels:
        raise InputError("give at least one --relation")
    R = combine_relations(rels)
    rep.emit(relation_to_json(R), json.dumps(relation_to_json(R)))
    return OK


def cmd_verify(args, cfg, rep):
    t, ops = _gens(args)
    rels = _relations(args.relation)
    ok = verify_determination(ops, rels, args.arity, t, cfg)
    rep.emit({"arity": args.arity, "determined": ok}, f"relations {'determine' if ok else 'do not determine'} the clone at arity {args.arity}")
    return OK if ok else NO


def cmd_pp_formula(args, cfg, rep):
    _, ops = ops_from_json(load(args.group), args.group)
    mul = next((f for f in ops if f.arity == 2), None)
    inv = next((f for f in ops if f.arity == 1), None)
    if mul is None or inv is None:
        raise InputError(f"{args.group}: a group needs one binary and one unary operation")
    G = GroupTable.from_ops(mul, inv)
    S = relation_from_json(load(args.subgroup), args.subgroup)
    H = relation_from_json(load(args.relation), args.relation) if args.relation else G.graph()
    formula = build_pp_formula(G, H, S, cfg)
    defined = eval_pp_formula(formula, G, S.arity, cfg)
    doc = formula.to_dict()
    doc["defines_S"] = defined == S
    rep.emit(doc, f"l = {formula.l}, m = {formula.m_count}, k = {formula.k}\n{formula.render()}\ndefines S: {defined == S}")
    return OK if defined == S else NO


def cmd_wpo(args, cfg, rep):
    t = args.domain_size
    if args.wpo_cmd == "embeds":
        a, b = _word(args.a, t), _word(args.b, t)
        h = W.embeds(a, b)
        if h is None:
            rep.emit({"a": _show(a), "b": _show(b), "witness": None}, "no witness")
            return NO
        rep.emit({"a": _show(a), "b": _show(b), "witness": _show(h)}, f"witness h = {_show(h)}")
        return OK
    if args.wpo_cmd == "first-occ":
        a = _word(args.a, t)
        (b,) = _word(f"[{args.letter}]", t)
        i = W.first_occ(a, b)
        pos = 0 if i is None else i + 1
        rep.emit({"a": _show(a), "letter": b + 1, "first_occ": pos}, str(pos))
        return OK
    if args.wpo_cmd == "t-map":
        a, b = _word(args.a, t), _word(args.b, t)
        x = _word(args.x, t)
        h = tuple(v - 1 for v in json.loads(args.witness)) if args.witness else W.embeds(a, b)
        if h is None:
            raise ContractError(f"{_show(a)} does not embed into {_show(b)}")
        y = W.t_map(a, b, h, x)
        rep.emit({"a": _show(a), "b": _show(b), "witness": _show(h), "x": _show(x), "image": _show(y)}, str(_show(y)))
        return OK
    if args.wpo_cmd == "predecessors":
        a = _word(args.a, t)
        ps = W.predecessors(a)
        rep.emit({"a": _show(a), "predecessors": [_show(p) for p in ps]}, "\n".join(str(_show(p)) for p in ps) or "none")
        return OK
    if args.wpo_cmd == "minimals":
        size, ops = _gens(args)
        c, d = _word(args.pair, size)
        mins, closed = W.minimal_elements(lambda w: lambda_member(ops, (c, d), w, size, cfg), size, args.max_len)
        lines = [f"minimal words of lambda({c + 1},{d + 1}) up to length {args.max_len}:"]
        lines += [f"  {_show(w)} (length {len(w)})" for w in mins]
        lines.append(f"frontier closed: {closed}")
        rep.emit({"pair": [c, d], "minimals": [_show(w) for w in mins], "lengths": [len(w) for w in mins], "frontier_closed": closed}, "\n".join(lines))
        return OK
    raise UsageError("unknown wpo command")


def cmd_selftest(args, cfg, rep):
    from .acceptance import run_all

    outcomes = run_all(cfg, echo=None if rep.as_json else (lambda s: rep.out.write(s + "\n")))
    passed = all(o.passed for o in outcomes)
    if rep.as_json:
        rep.emit({"passed": passed, "criteria": [{"number": o.number, "title": o.title, "passed": o.passed, "detail": o.detail} for o in outcomes]}, "")
    else:
        rep.out.write(f"{sum(o.passed for o in outcomes)}/{len(outcomes)} criteria passed\n")
    return OK if passed else NO


# --- argument parsing -------------------------------------------------------


def _add_gens(p, algebra=True):
    if algebra:
        p.add_argument("--algebra", help="algebra JSON; its operations are the generators")
    p.add_argument("--gens", action="append", help="algebra, function, or list-of-functions JSON (repeatable)")
    p.add_argument("--domain-size", type=int, help="needed only when there are no generators")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edgeclone", description="Finite clone computations.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--config", help="config JSON (default: $EDGECLONE_CONFIG)")
    parser.add_argument("--threads", type=int, help="override thread_count")
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)

    p = sub.add_parser("closure", help="n-ary layer of the generated clone")
    _add_gens(p)
    p.add_argument("--arity", "-n", type=int, required=True)
    p.set_defaults(handler=cmd_closure)

    p = sub.add_parser("find-term", help="search for a Malcev, edge or near-unanimity term")
    _add_gens(p)
    p.add_argument("--kind", choices=["malcev", "edge", "nu"], required=True)
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(handler=cmd_find_term)

    p = sub.add_parser("phi", help="the relation phi(C, a)")
    _add_gens(p)
    p.add_argument("--word", required=True, help='1-based word, e.g. "[1,2,2]"')
    p.set_defaults(handler=cmd_phi)

    p = sub.add_parser("lambda", help="is the word in lambda(C, (c,d))?")
    _add_gens(p)
    p.add_argument("--pair", required=True, help='1-based pair, e.g. "[1,2]"')
    p.add_argument("--word", required=True)
    p.set_defaults(handler=cmd_lambda)

    p = sub.add_parser("compute-m", help="bounded search for minimal words of every lambda set")
    _add_gens(p)
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(handler=cmd_compute_m)

    p = sub.add_parser("is-term-function", help="clone membership")
    _add_gens(p)
    p.add_argument("--fn", required=True)
    p.add_argument("--mode", choices=["exhaustive", "relations"], default="exhaustive")
    p.add_argument("--relation", action="append")
    p.set_defaults(handler=cmd_is_term_function)

    p = sub.add_parser("pol", help="n-ary polymorphisms of relations")
    p.add_argument("--relation", action="append")
    p.add_argument("--arity", "-n", type=int, required=True)
    p.add_argument("--domain-size", type=int)
    p.set_defaults(handler=cmd_pol)

    p = sub.add_parser("preserves", help="does a function preserve the relations?")
    p.add_argument("--fn", required=True)
    p.add_argument("--relation", action="append", required=True)
    p.set_defaults(handler=cmd_preserves)

    p = sub.add_parser("subuniverses", help="all subuniverses of a small power")
    p.add_argument("--algebra", required=True)
    p.add_argument("--power", "-j", type=int, required=True)
    p.set_defaults(handler=cmd_subuniverses)

    p = sub.add_parser("rep-check", help="representation lemma hypotheses for F inside G")
    p.add_argument("--algebra", required=True)
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(handler=cmd_rep_check)

    p = sub.add_parser("combine-relations", help="one relation with the same polymorphisms")
    p.add_argument("--relation", action="append", required=True)
    p.set_defaults(handler=cmd_combine)

    p = sub.add_parser("verify-determination", help="Pol layer equals clone layer?")
    _add_gens(p)
    p.add_argument("--relation", action="append")
    p.add_argument("--arity", "-n", type=int, required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("pp-formula", help="pp-definition of a subgroup over H")
    p.add_argument("--group", required=True, help="algebra JSON with a binary mul and a unary inv")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--relation", help="H (default: graph of the multiplication)")
    p.set_defaults(handler=cmd_pp_formula)

    p = sub.add_parser("wpo", help="the embedding order on words")
    p.set_defaults(handler=cmd_wpo)
    wsub = p.add_subparsers(dest="wpo_cmd", parser_class=_Parser)
    w = wsub.add_parser("embeds")
    w.add_argument("--a", required=True)
    w.add_argument("--b", required=True)
    w = wsub.add_parser("first-occ")
    w.add_argument("--a", required=True)
    w.add_argument("--letter", type=int, required=True)
    w = wsub.add_parser("t-map")
    w.add_argument("--a", required=True)
    w.add_argument("--b", required=True)
    w.add_argument("--x", required=True)
    w.add_argument("--witness", help="1-based positions; default: the greedy witness")
    w = wsub.add_parser("predecessors")
    w.add_argument("--a", required=True)
    w = wsub.add_parser("minimals", help="minimal words of lambda(C,(c,d))")
    _add_gens(w)
    w.add_argument("--pair", required=True)
    w.add_argument("--max-len", type=int, required=True)
    for name in ("embeds", "first-occ", "t-map", "predecessors"):
        wsub.choices[name].add_argument("--domain-size", type=int)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(handler=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not args.cmd:
            raise UsageError("missing subcommand")
        if args.cmd == "wpo" and not args.wpo_cmd:
            raise UsageError("missing wpo subcommand")
        cfg = Config.from_dict(load(args.config)) if args.config else Config.from_env()
        if args.threads:
            cfg = cfg.with_(thread_count=args.threads)
        return args.handler(args, cfg, Report(args.json, out))
    except (UsageError, InputError) as exc:
        err.write(f"error: {exc}\n")
        return BAD_INPUT
    except ResourceLimitError as exc:
        err.write(f"resource limit: {exc}\n")
        return RESOURCE
    except InsufficientRelationError as exc:
        err.write(f"insufficient relation: {exc}\n")
        return NO
    except CounterexampleError as exc:
        err.write(f"counterexample: {exc}\n")
        return NO
    except (ContractError, DomainError) as exc:
        err.write(f"error: {exc}\n")
        return BAD_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
