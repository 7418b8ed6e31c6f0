"""A fixed corpus of small hypergraphs used across the test modules."""

from __future__ import annotations

import networkx as nx

from tailrate import hypergraph as hg


def two_graphs(max_nodes=5):
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if G.number_of_nodes() > max_nodes or G.number_of_edges() == 0:
            continue
        if not nx.is_connected(G):
            continue
        out.append((f"atlas{G.number_of_nodes()}_{len(out)}",
                    hg.from_edges(2, G.number_of_nodes(), list(G.edges()))))
    return out


def higher_graphs():
    return [
        ("fano", hg.fano()),
        ("fano_minus_edge", hg.fano_minus_edge()),
        ("K4_3", hg.clique(3, 4)),
        ("K5_3", hg.clique(3, 5)),
        ("K5_4", hg.clique(4, 5)),
        ("K222", hg.complete_r_partite(3, [2, 2, 2])),
        ("K122", hg.complete_r_partite(3, [1, 2, 2])),
        ("K112", hg.complete_r_partite(3, [1, 1, 2])),
        ("K123", hg.complete_r_partite(3, [1, 2, 3])),
        ("K1112", hg.complete_r_partite(4, [1, 1, 1, 2])),
        ("C3_5", hg.tight_cycle(3, 5)),
        ("C3_6", hg.tight_cycle(3, 6)),
        ("C3_7", hg.tight_cycle(3, 7)),
        ("C3_8", hg.tight_cycle(3, 8)),
        ("C4_7", hg.tight_cycle(4, 7)),
        ("C4_8", hg.tight_cycle(4, 8)),
        ("P3_1", hg.loose_path(3, 1)),
        ("P3_2", hg.loose_path(3, 2)),
        ("P3_3", hg.loose_path(3, 3)),
        ("two_edges", hg.from_edges(3, 6, [(0, 1, 2), (3, 4, 5)])),
        ("C3_7_minus", hg.tight_cycle(3, 7).subgraph(hg.tight_cycle(3, 7).edges[1:])),
        ("star_K222", hg.star_of_set(hg.complete_r_partite(3, [2, 2, 2]), [0])),
        ("sunflower", hg.from_edges(3, 7, [(0, 1, 2), (0, 3, 4), (0, 5, 6)])),
        ("fano_two_lines", hg.from_edges(3, 7, [(0, 1, 3), (1, 2, 4)])),
    ]


def corpus():
    return higher_graphs() + two_graphs()


CORPUS = corpus()
SMALL = [(name, h) for name, h in CORPUS if h.n_vertices <= 8]
