"""Desk-scale acceptance checks, shared by ``edgeclone selftest`` and the test suite."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import words as W
from .clone import (
    all_operations,
    clone_layer,
    compute_m,
    find_edge,
    is_edge_op,
    is_malcev,
    is_term_function,
    lambda_member,
    phi,
)
from .config import DEFAULT, Config, pmap
from .core import OperationTable, Relation, encode_tuple, tuple_grid
from .galois import combine_relations, determining_relations, pol_layer, rep_check, subuniverses, verify_determination
from .io import dumps
from .ppgroup import GroupTable, build_pp_formula, eval_pp_formula, subgroups

XOR = OperationTable.from_function(2, 2, lambda x, y: x ^ y, "xor")
AND = OperationTable.from_function(2, 2, lambda x, y: x & y, "and")
OR = OperationTable.from_function(2, 2, lambda x, y: x | y, "or")
LEQ = Relation(2, 2, frozenset({(0, 0), (0, 1), (1, 1)}))
ZERO = Relation(2, 1, frozenset({(0,)}))
ONE = Relation(2, 1, frozenset({(1,)}))
XOR_GRAPH = Relation(2, 3, frozenset((x, y, x ^ y) for x in range(2) for y in range(2)))


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0
    report: dict = field(default_factory=dict)

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.2f}s, budget {self.budget:g}s)"


def _le_matrix(ws: list[W.Word]) -> np.ndarray:
    return np.array([[W.word_le(a, b) for b in ws] for a in ws], dtype=bool)


def order_axioms(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    counts = {}
    ok = True
    for t, L in ((2, 5), (3, 4)):
        ws = W.words_up_to(t, L)
        M = _le_matrix(ws)
        refl = bool(M.diagonal().all())
        anti = not (M & M.T & ~np.eye(len(ws), dtype=bool)).any()
        MM = (M.astype(np.int64) @ M.astype(np.int64)) > 0
        trans = not (MM & ~M).any()
        counts[f"t={t},L={L}"] = {"words": len(ws), "reflexive": refl, "antisymmetric": anti, "transitive": trans}
        ok &= refl and anti and trans
    detail = ", ".join(f"{k}: {v['words']} words" for k, v in counts.items())
    return ok, detail, counts


def lemma_co(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    pairs = checked = 0
    bad = []
    for t in (1, 2, 3):
        short = W.words_up_to(t, 4)
        long = W.words_up_to(t, 5)
        for a in short:
            m = len(a)
            grid = tuple_grid(t, m)
            below = grid[: encode_tuple(a, t)]
            for b in long:
                if len(b) < m or set(a) != set(b):
                    continue
                for h in itertools.combinations(range(len(b)), m):
                    if not W.is_witness(a, b, h):
                        continue
                    pairs += 1
                    src = list(W.t_map_sources(a, b, h))
                    if W.t_map(a, b, h, a) != b:
                        bad.append((a, b, h, "T(a) != b"))
                    images = below[:, src]
                    codes = np.zeros(len(images), dtype=np.int64)
                    for col in images.T:
                        codes = codes * t + col
                    checked += len(images)
                    if (codes >= encode_tuple(b, t)).any():
                        bad.append((a, b, h, "T(c) not below b"))
    return not bad, f"{pairs} witnessed pairs, {checked} tuples c <lex a", {"pairs": pairs, "checked": checked, "failures": [list(map(list, x[:3])) for x in bad[:5]]}


def edge_malcev_bridge(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    mismatches = 0
    edges = 0
    for f in all_operations(2, 3, config):
        swapped = OperationTable.from_function(2, 3, lambda x, y, z: f(y, x, z))
        e = is_edge_op(f, 2)
        edges += e
        mismatches += e != is_malcev(swapped)
    return mismatches == 0, f"256 tables, {edges} 2-edge, {mismatches} mismatches", {"edge_count": edges, "mismatches": mismatches}


def _embedded_pairs(t: int, max_len: int) -> list[tuple[W.Word, W.Word]]:
    ws = W.words_up_to(t, max_len)
    return [(a, b) for a in ws for b in ws if W.word_le(a, b)]


def phi_lemmas(config: Config = DEFAULT) -> dict:
    """Both embedding lemmas for the xor clone on all pairs a <=_E b with |b| <= 4."""
    gens = [XOR]
    layers = {n: clone_layer(gens, n, 2, config) for n in range(1, 5)}
    pairs = _embedded_pairs(2, 4)

    def check(pair):
        a, b = pair
        pa, pb = phi(layers[len(a)], a), phi(layers[len(b)], b)
        sub = pb <= pa
        up = all(
            (not lambda_member(gens, cd, a, 2, config)) or lambda_member(gens, cd, b, 2, config)
            for cd in itertools.product(range(2), repeat=2)
        )
        return sub, up

    results = pmap(check, pairs, config.thread_count)
    return {
        "pairs": len(pairs),
        "phi_violations": [[list(a), list(b)] for (a, b), (s, _) in zip(pairs, results) if not s],
        "lambda_violations": [[list(a), list(b)] for (a, b), (_, u) in zip(pairs, results) if not u],
    }


def rep_sweep(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    out = {}
    ok = True
    for t in (2, 3):
        G = GroupTable.cyclic(t)
        fam = subuniverses(G.algebra, 2, config).members
        total = held = 0
        for F, Gr in itertools.product(fam, repeat=2):
            if not F.tuples <= Gr.tuples:
                continue
            total += 1
            v = rep_check(F, Gr, G.algebra, 2, config)
            ok &= v.has_edge_term
            if v.hypotheses_hold:
                held += 1
                ok &= v.conclusion_holds
        out[f"Z{t}"] = {"subuniverses": len(fam), "pairs": total, "hypotheses_hold": held}
    detail = ", ".join(f"{k}: {v['pairs']} pairs, {v['hypotheses_hold']} with hypotheses" for k, v in out.items())
    return ok, detail, out


def theorem_instance(config: Config = DEFAULT) -> dict:
    gens = [XOR]
    report = compute_m(gens, 4, 2, config)
    k = 2
    has_edge = find_edge(gens, k, 2, config) is not None
    rels = determining_relations(gens, report.m, k, 2, config)
    checks = {}
    for n in (1, 2, 3):
        checks[n] = {
            "layer_size": len(clone_layer(gens, n, 2, config)),
            "determined": verify_determination(gens, rels, n, 2, config),
        }
    return {
        "m_report": report.to_dict(),
        "k": k,
        "has_edge_term": has_edge,
        "relation_arities": [r.arity for r in rels],
        "checks": {str(n): v for n, v in checks.items()},
    }


def dual_oracle(config: Config = DEFAULT) -> dict:
    cases = {
        "and_or": ([AND, OR], [LEQ, ZERO, ONE]),
        "xor": ([XOR], [XOR_GRAPH]),
    }
    out = {}
    for name, (gens, rels) in cases.items():
        fns = list(all_operations(2, 2, config)) + list(all_operations(2, 3, config))

        def both(f):
            return (
                is_term_function(gens, f, "exhaustive", config=config),
                is_term_function(gens, f, "relations", rels, config=config),
            )

        results = pmap(both, fns, config.thread_count)
        out[name] = {
            "functions": len(fns),
            "members": sum(a for a, _ in results),
            "disagreements": [list(f.values) for f, (a, b) in zip(fns, results) if a != b],
        }
    return out


def pol_sanity(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    n1, n2 = len(pol_layer([LEQ], 1, 2, config)), len(pol_layer([LEQ], 2, 2, config))
    return (n1, n2) == (3, 6), f"|Pol_1|={n1}, |Pol_2|={n2}", {"unary": n1, "binary": n2}


def combine_equivalence(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    S = [LEQ, ZERO, ONE]
    R = combine_relations(S)
    sizes = {}
    ok = True
    for n in (1, 2, 3):
        a = {f.values for f in pol_layer(S, n, 2, config)}
        b = {f.values for f in pol_layer([R], n, 2, config)}
        sizes[n] = len(a)
        ok &= a == b
    return ok, f"combined arity {R.arity}, Pol sizes {sizes}", {"arity": R.arity, "sizes": sizes}


def group_round_trip(config: Config = DEFAULT) -> tuple[bool, str, dict]:
    G = GroupTable.cyclic(2)
    H = G.graph()
    rows = []
    ok = True
    for S in subgroups(G, 2, config):
        formula = build_pp_formula(G, H, S, config)
        back = eval_pp_formula(formula, G, 2, config)
        bounds, _ = formula.bounds_hold(2)
        rows.append({"S": [list(x) for x in S.sorted()], "l": formula.l, "m": formula.m_count, "round_trip": back == S, "bounds": bounds})
        ok &= back == S and bounds
    return ok, f"{len(rows)} subgroups of Z2^2", {"subgroups": rows}


def _c4(config):
    r = phi_lemmas(config)
    return not r["phi_violations"], f"{r['pairs']} pairs a <=_E b, {len(r['phi_violations'])} violations", r


def _c5(config):
    r = phi_lemmas(config)
    return not r["lambda_violations"], f"{r['pairs']} pairs x 4 (c,d), {len(r['lambda_violations'])} violations", r


def _c7(config):
    r = theorem_instance(config)
    sizes = [r["checks"][n]["layer_size"] for n in ("1", "2", "3")]
    ok = (
        not r["m_report"]["m_is_lower_bound"]
        and r["has_edge_term"]
        and all(r["checks"][n]["determined"] for n in ("1", "2", "3"))
        and sizes == [2, 4, 8]
    )
    return ok, f"m={r['m_report']['m']}, layer sizes {sizes}, determined {[r['checks'][n]['determined'] for n in ('1','2','3')]}", r


def _c8(config):
    r = dual_oracle(config)
    dis = {k: len(v["disagreements"]) for k, v in r.items()}
    return all(v == 0 for v in dis.values()), f"disagreements {dis}", r


def _c12(config):
    reports = {}
    for threads in (1, 4):
        cfg = config.with_(thread_count=threads)
        reports[threads] = [dumps(phi_lemmas(cfg)), dumps(theorem_instance(cfg)), dumps(dual_oracle(cfg))]
    same = reports[1] == reports[4]
    return same, "byte-identical reports for criteria 4, 7, 8 at 1 and 4 threads" if same else "reports differ", {}


CRITERIA: list[tuple[int, str, float, Callable]] = [
    (1, "order axioms of <=_E", 5, order_axioms),
    (2, "coordinate map lemma", 30, lemma_co),
    (3, "edge/Malcev bridge", 1, edge_malcev_bridge),
    (4, "phi shrinks along <=_E", 60, _c4),
    (5, "lambda is upward closed", 60, _c5),
    (6, "representation lemma sweep", 60, rep_sweep),
    (7, "determining relations for the xor clone", 120, _c7),
    (8, "dual-oracle term membership", 60, _c8),
    (9, "Pol of <= on {0,1}", 1, pol_sanity),
    (10, "combined relation keeps Pol", 60, combine_equivalence),
    (11, "pp-formula round trip for Z2^2", 30, group_round_trip),
    (12, "thread-count determinism", 240, _c12),
]


def run_criterion(number: int, config: Config = DEFAULT) -> Outcome:
    for num, title, budget, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            passed, detail, report = fn(config)
            return Outcome(num, title, bool(passed), detail, time.perf_counter() - start, budget, report)
    raise KeyError(number)


def run_all(config: Config = DEFAULT, echo: Callable[[str], None] | None = None) -> list[Outcome]:
    out = []
    for num, *_ in CRITERIA:
        res = run_criterion(num, config)
        if echo:
            echo(res.line())
        out.append(res)
    return out
