"""Run the full pipeline on the bundled synthetic corpus and summarise it."""

import argparse
import json
from pathlib import Path

from cocitemap.config import load_config
from cocitemap.report import run_pipeline

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=str(ROOT / "data" / "synthetic" / "config.yaml"))
    ap.add_argument("--output")
    ap.add_argument("--no-figures", action="store_true")
    args = ap.parse_args()

    cfg = load_config(args.config)
    if args.output:
        cfg.output = args.output
    manifest = run_pipeline(cfg, figures=not args.no_figures)
    doc = json.loads((Path(cfg.output) / "map" / "map.json").read_text())
    print(f"stages: {', '.join(s['name'] for s in manifest['stages'])}")
    for row in doc["rows"]:
        print(f"timeline {row['timeline_id']}: {row['birth_year']}-{row['death_year']}")
    print(f"{len(doc['transitions'])} transition(s); output in {cfg.output}")
