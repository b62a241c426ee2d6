"""Print the threshold scan of one year of a corpus, one line per w."""

import argparse

from cocitemap.cocitation import build_yearly_network
from cocitemap.corpus import read_corpus
from cocitemap.threshold_opt import NoCommunitiesError, scan_thresholds, select_threshold

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("corpus")
    ap.add_argument("year", type=int)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--criterion", choices=["ratio2", "entropy"], default="ratio2")
    args = ap.parse_args()

    net = build_yearly_network(read_corpus(args.corpus), args.year)
    scan = scan_thresholds(net, args.k)
    print("w\tcommunities\tlargest\tsecond\tclustered\tentropy")
    for e in scan.entries:
        print(f"{e.w}\t{e.n_communities}\t{e.largest}\t{e.second_largest}\t{e.clustered_nodes}\t{e.entropy:.3f}")
    try:
        print(f"selected w* = {select_threshold(scan, args.criterion)}")
    except (NoCommunitiesError, ValueError) as err:
        print(f"no selection: {err}")
