"""Measure max |flatten(φ, M)| / |φ|² over a corpus, for every GF-context M."""

import argparse
from itertools import combinations

from ltlnorm.contextual import compute_basis, flatten
from ltlnorm.corpus import CorpusSpec, generate
from ltlnorm.printer import to_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--max-nodes", type=int, default=18)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    worst, arg = 0.0, None
    for f in generate(CorpusSpec(args.count, args.max_nodes, 3, args.seed)):
        gf = compute_basis(f).gf
        for k in range(len(gf) + 1):
            for m in combinations(gf, k):
                r = flatten(f, frozenset(m)).size / f.size ** 2
                if r > worst:
                    worst, arg = r, (to_text(f), len(m))
    print(f"c = {worst:.3f}  (worst: {arg[0]}  with |M| = {arg[1]})")


if __name__ == "__main__":
    main()
