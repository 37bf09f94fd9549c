#!/usr/bin/env python3
"""Run the oracle cross-checks over the seeded random corpus and summarise."""
import argparse
import time

from perron_sft import oracle
from perron_sft.corpus import CorpusConfig, irreducible_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=50)
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    ap.add_argument("--max-q", type=int, default=4)
    ap.add_argument("--max-len", type=int, default=4)
    args = ap.parse_args()

    cfg = CorpusConfig(size=args.size, seed=args.seed, max_q=args.max_q, max_len=args.max_len)
    t = time.perf_counter()
    failures = 0
    worst = {}
    for spec in irreducible_corpus(cfg):
        rep = oracle.verify(spec)
        for c in rep.checks:
            worst[c["check"]] = max(worst.get(c["check"], 0.0), c["delta"])
        if not rep.passed:
            failures += 1
            print("FAIL", spec.q, spec.forbidden, rep.discrepancies)
    print(f"{cfg.size} specs, {failures} with discrepancies, {time.perf_counter() - t:.1f}s")
    for k in sorted(worst):
        print(f"  {k:<20} worst {worst[k]:.2e}")


if __name__ == "__main__":
    main()
