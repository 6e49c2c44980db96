"""Write the bundled synthetic topology as a pipe-delimited edge list.

The output is a ready-made input for `annograph extract` and for the
round-trip experiments in this directory.
"""

import argparse

from annograph import write_edge_list
from annograph.fixture import make_fixture_graph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", help="destination edge-list path")
    ap.add_argument("--nodes", type=int, default=19036)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    graph = make_fixture_graph(args.nodes, args.seed)
    n_bytes = write_edge_list(graph, args.out)
    print(f"{args.out}: {graph.n} nodes, {graph.n_edges} edges, "
          f"{n_bytes} bytes")


if __name__ == "__main__":
    main()
