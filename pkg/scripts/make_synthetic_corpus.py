"""Regenerate the bundled synthetic corpus under data/synthetic/."""

import argparse
from pathlib import Path

from cocitemap.synthetic import bundled_corpus, write_records

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default=str(ROOT / "data" / "synthetic" / "corpus.jsonl"))
    args = ap.parse_args()
    recs = bundled_corpus(seed=args.seed)
    write_records(recs, args.out)
    print(f"{len(recs)} records -> {args.out}")
