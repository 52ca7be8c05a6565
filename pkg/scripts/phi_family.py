"""Rewrite steps and output sizes for the U/W/U cascade family."""

import argparse

from ltlnorm.contextual import normalize_closed_form
from ltlnorm.corpus import phi_family
from ltlnorm.rewrite import normalize_rewrite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--closed-up-to", type=int, default=7,
                    help="closed form doubles per n; skip it above this")
    args = ap.parse_args()
    print("n,input_nodes,rewrite_steps,rewrite_nodes,nodes_per_n,closed_nodes")
    for n in range(3, args.max_n + 1):
        f = phi_family(n)
        g, trace = normalize_rewrite(f)
        closed = normalize_closed_form(f).size if n <= args.closed_up_to else ""
        print(f"{n},{f.size},{trace.rule_count()},{g.size},{g.size / n:.2f},{closed}")


if __name__ == "__main__":
    main()
