"""Compare formulas, both normal forms and the Rabin automata on random lassos over a corpus."""

import argparse
import time

from ltlnorm.contextual import normalize_closed_form
from ltlnorm.corpus import CorpusSpec, generate, random_lassos
from ltlnorm.determinize import drw_accepts_lasso, ltl_to_drw
from ltlnorm.lasso import LassoBatch
from ltlnorm.printer import to_text
from ltlnorm.rewrite import normalize_rewrite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--lassos", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-automata", action="store_true")
    args = ap.parse_args()
    spec = CorpusSpec(count=args.count, seed=args.seed)
    words = random_lassos(args.seed + 1, spec.ap, args.lassos)
    batch = LassoBatch(words)
    t = time.perf_counter()
    bad = 0
    for f in generate(spec):
        base = batch.evaluate(f)
        forms = {"closed": normalize_closed_form(f), "rewrite": normalize_rewrite(f)[0]}
        for name, g in forms.items():
            if (batch.evaluate(g) != base).any():
                bad += 1
                print(f"disagree {name}: {to_text(f)}")
        if not args.no_automata:
            d = ltl_to_drw(f, ap=spec.ap)
            if any(drw_accepts_lasso(d, w) != bool(x) for w, x in zip(words, base)):
                bad += 1
                print(f"disagree drw: {to_text(f)}")
    print(f"{args.count} formulas, {args.lassos} lassos, {bad} disagreements, "
          f"{time.perf_counter() - t:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
