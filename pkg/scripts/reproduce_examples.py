#!/usr/bin/env python3
"""Print the worked examples: theta, r(z), eigenvector heads, normalisation, one cylinder."""
import argparse
import math

import numpy as np

from perron_sft import measures
from perron_sft.graph import digraph_perron, star_matrix
from perron_sft.spectral import analyze
from perron_sft.words import validate_spec, word_str

EXAMPLES = [
    ("golden", 3, ["01"], None),
    ("sqrt3", 3, ["00"], "01"),
    ("mixed", 5, ["00", "1010"], "0101"),
    ("block", 5, ["0000", "0001"], "0101"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--head", type=int, default=5, help="eigenvector entries to show")
    args = ap.parse_args()
    np.set_printoptions(precision=10, suppress=True)

    for name, q, F, w in EXAMPLES:
        rep = analyze(validate_spec(q, F))
        r = rep.system.r
        print(f"example {name}: q={q} F={F}")
        print(f"  theta         {rep.theta!r}")
        print(f"  r(z)          ({r.num}) / ({r.den})")
        print(f"  states        {rep.adjacency.size}, primitive={rep.primitive}")
        print(f"  u[:{args.head}]        {rep.u[:args.head]}")
        print(f"  v[:{args.head}]        {rep.v[:args.head]}")
        print(f"  u.v           {rep.normalization!r}  (sum {float(rep.u @ rep.v)!r})")
        if w:
            print(f"  mu(C_{w})     {measures.parry_measure(rep, w):.10g}")
    print()
    for n in (5, 10, 17):
        rep = digraph_perron(star_matrix(n))
        print(f"star n={n:>2}: theta={rep.theta!r}  sqrt(n-1)={math.sqrt(n - 1)!r}")


if __name__ == "__main__":
    main()
