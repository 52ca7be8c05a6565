"""Command line: normalize, classify, aww, drw, check and stats.

Exit codes: 0 ok, 1 semantic disagreement, 2 parse error, 3 precondition violation.
"""

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor

from . import formula as fm
from .alternating import ClassMismatchError, ltl_to_a1w
from .contextual import closed_form_disjuncts, normalize_closed_form
from .corpus import CorpusSpec, generate, phi_family, random_lassos
from .determinize import StateLimitError, drw_accepts_lasso, ltl_to_drw
from .determinize import PreconditionError as DetPreconditionError
from .hierarchy import classify, form_status, is_delta2, levels, measures
from .lasso import LassoBatch
from .parser import ParseError, parse
from .printer import to_text
from .rewrite import PreconditionError, RewriteTrace, normalize_dual, normalize_fgx, normalize_rewrite

OK, DISAGREE, PARSE_ERROR, PRECONDITION = 0, 1, 2, 3

# The normalizers `check` compares against the original; tests swap entries
# here to make sure a broken normalizer is caught.
NORMALIZERS = {
    "closed": normalize_closed_form,
    "rewrite": lambda f: normalize_rewrite(f)[0],
}


def _ap_arg(text):
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _formula_ap(f, ap):
    props = fm.propositions(f)
    if ap is None:
        return tuple(props) or ("a",)
    missing = set(props) - set(ap)
    if missing:
        raise PreconditionError(f"propositions {sorted(missing)} missing from --ap")
    return ap


def cmd_normalize(f, method="rewrite", trace=False, out=None):
    out = out or sys.stdout
    lines = []
    if method == "closed":
        g = normalize_closed_form(f)
        if trace:
            for d in closed_form_disjuncts(f):
                m = ", ".join(to_text(p) for p in sorted(d.context.m, key=to_text))
                n = ", ".join(to_text(p) for p in sorted(d.context.n, key=to_text))
                lines.append(f"# M={{{m}}} N={{{n}}} -> {to_text(d.formula)}")
    elif method == "rewrite":
        g, tr = normalize_rewrite(f)
        lines = tr.lines() if trace else []
    elif method == "dual":
        g = normalize_dual(f)
    elif method == "fgx":
        tr = RewriteTrace()
        g = normalize_fgx(f, tr)
        lines = tr.lines() if trace else []
    else:
        raise ValueError(f"unknown method {method!r}")
    print(to_text(g), file=out)
    for line in lines:
        print(line, file=out)
    return g


def cmd_classify(f, out=None):
    out = out or sys.stdout
    s, p, d = levels(f)
    nodes, ubw, gfba = measures(f)
    show = lambda x: "inf" if x > 10 ** 6 else str(x)
    print("classes: " + " ".join(sorted(str(c) for c in classify(f))), file=out)
    print(f"levels: sigma={show(s)} pi={show(p)} delta={show(d)}", file=out)
    print(f"form: {form_status(f)}", file=out)
    print(f"delta2: {str(is_delta2(f)).lower()}", file=out)
    print(f"nodes: {nodes} ubw: {ubw} gfba: {gfba}", file=out)


def cmd_aww(f, ap=None, out=None):
    out = out or sys.stdout
    aut = ltl_to_a1w(fm.expand_limits(f), ap=_formula_ap(f, ap))
    print(aut.dumps(), file=out)
    return aut


def cmd_drw(f, ap=None, fmt="hoa", out=None):
    out = out or sys.stdout
    d = ltl_to_drw(f, ap=_formula_ap(f, ap))
    if fmt == "hoa":
        out.write(d.to_hoa(name=to_text(f)))
    else:
        print(d.dumps(), file=out)
    return d


def cmd_check(f, lassos=500, seed=0, ap=None, out=None):
    """Compare the original, both normal forms and the DRW on sampled lassos; exit 0 iff unanimous."""
    out = out or sys.stdout
    if lassos < 1:
        raise PreconditionError("--lassos must be at least 1")
    ap = _formula_ap(f, ap)
    forms = {name: fn(f) for name, fn in NORMALIZERS.items()}
    drw = ltl_to_drw(f, ap=ap)
    words = random_lassos(seed, ap, lassos)
    batch = LassoBatch(words)
    verdicts = {"original": batch.evaluate(f)}
    for name, g in forms.items():
        verdicts[name] = batch.evaluate(g)
    verdicts["drw"] = [drw_accepts_lasso(drw, w) for w in words]
    base = verdicts["original"]
    print(f"lassos: {lassos} seed: {seed}", file=out)
    witness = None
    for name, vs in verdicts.items():
        if name == "original":
            continue
        agree = sum(bool(x) == bool(y) for x, y in zip(base, vs))
        print(f"original={name}: {agree}/{lassos}", file=out)
        if agree < lassos and witness is None:
            witness = next(i for i in range(lassos) if bool(base[i]) != bool(vs[i]))
    if witness is None:
        print("unanimous", file=out)
        return OK
    w = words[witness]
    detail = " ".join(f"{k}={bool(v[witness])}".lower() for k, v in verdicts.items())
    print(f"witness: {w} {detail}", file=out)
    return DISAGREE


STATS_FIELDS = [
    "formula", "input_nodes", "closed_nodes", "rewrite_nodes", "rewrite_steps",
    "a1w_states", "drw_states", "rabin_pairs",
]


def stats_row(item):
    """One CSV row; automata columns are left empty when `automata` is off."""
    f, ap, automata, state_limit = item
    closed = normalize_closed_form(f)
    rewritten, trace = normalize_rewrite(f)
    row = {
        "formula": to_text(f),
        "input_nodes": f.size,
        "closed_nodes": closed.size,
        "rewrite_nodes": rewritten.size,
        "rewrite_steps": trace.rule_count(),
        "a1w_states": "",
        "drw_states": "",
        "rabin_pairs": "",
    }
    if automata:
        ap = _formula_ap(f, ap)
        states = 0
        for d in closed_form_disjuncts(f):
            if d.formula.op not in (fm.TT, fm.FF):
                states += len(ltl_to_a1w(d.formula, ap=ap).labels)
        drw = ltl_to_drw(f, ap=ap)
        row["a1w_states"] = states
        try:
            row["drw_states"] = len(drw.explore(limit=state_limit).keys)
        except StateLimitError:
            row["drw_states"] = f">{state_limit}"
        row["rabin_pairs"] = drw.pair_count
    return row


def cmd_stats(formulas, ap=None, automata=True, jobs=1, state_limit=100000, out=None):
    out = out or sys.stdout
    items = [(f, ap, automata, state_limit) for f in formulas]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(stats_row, items, chunksize=16))
    else:
        rows = [stats_row(x) for x in items]
    writer = csv.DictWriter(out, fieldnames=STATS_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return rows


def _parse_range(text):
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def build_parser():
    p = argparse.ArgumentParser(prog="ltlnorm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    n = sub.add_parser("normalize", help="print a Δ2 normal form")
    n.add_argument("formula")
    n.add_argument("--method", choices=["closed", "rewrite", "dual", "fgx"], default="rewrite")
    n.add_argument("--trace", action="store_true")

    c = sub.add_parser("classify", help="hierarchy classes and normal-form status")
    c.add_argument("formula")

    a = sub.add_parser("aww", help="very weak alternating automaton as JSON")
    a.add_argument("formula")
    a.add_argument("--ap", type=_ap_arg)

    d = sub.add_parser("drw", help="deterministic Rabin automaton")
    d.add_argument("formula")
    d.add_argument("--ap", type=_ap_arg)
    d.add_argument("--format", choices=["json", "hoa"], default="hoa")

    k = sub.add_parser("check", help="compare original, normal forms and DRW on random lassos")
    k.add_argument("formula")
    k.add_argument("--lassos", type=int, default=500)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--ap", type=_ap_arg)

    s = sub.add_parser("stats", help="CSV of sizes over a corpus or given formulas")
    s.add_argument("formulas", nargs="*")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--max-nodes", type=int, default=18)
    s.add_argument("--ap", type=int, default=3, help="number of propositions in the corpus")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--phi", type=_parse_range, help="use the U/W cascade family, e.g. 3-10")
    s.add_argument("--no-automata", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--state-limit", type=int, default=100000)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "stats":
            if args.phi:
                formulas = [phi_family(n) for n in args.phi]
            elif args.formulas:
                formulas = [parse(t) for t in args.formulas]
            else:
                formulas = generate(CorpusSpec(args.count, args.max_nodes, args.ap, args.seed))
            cmd_stats(formulas, automata=not args.no_automata, jobs=args.jobs,
                      state_limit=args.state_limit)
            return OK
        f = parse(args.formula)
        if args.command == "normalize":
            cmd_normalize(f, args.method, args.trace)
        elif args.command == "classify":
            cmd_classify(f)
        elif args.command == "aww":
            cmd_aww(f, args.ap)
        elif args.command == "drw":
            cmd_drw(f, args.ap, args.format)
        elif args.command == "check":
            return cmd_check(f, args.lassos, args.seed, args.ap)
        return OK
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return PARSE_ERROR
    except (PreconditionError, DetPreconditionError, ClassMismatchError) as e:
        print(f"precondition violated: {e}", file=sys.stderr)
        return PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
