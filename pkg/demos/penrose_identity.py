"""Walk through the Penrose tree identity on a four-cycle.

The truncated function of a cluster is a signed count of connected spanning
subgraphs of its cluster graph. Penrose's partition scheme groups those
subgraphs into boolean intervals [T, R(T)], and only intervals with T = R(T)
survive the signed sum. So |phi^T| equals the number of spanning trees that
the closure leaves unchanged.
"""

from clusterexp import (ClusterGraph, css_signed_sum, enumerate_rooted_spanning_trees,
                        penrose_closure, penrose_tree_count, verify_partition_scheme)
from clusterexp.ursell import literal_index_closure

c4 = ClusterGraph.from_edges(4, [(0, 2), (1, 2), (1, 3), (0, 3)])  # the cycle 0-2-1-3
print("cluster graph: the 4-cycle 0-2-1-3, edges:", c4.edge_list())
print("signed sum over connected spanning subgraphs:", css_signed_sum(c4))

print("\nspanning trees rooted at 0, and their Penrose closures:")
for tree in enumerate_rooted_spanning_trees(c4):
    closed = penrose_closure(tree, c4)
    tag = "fixed" if len(closed.edge_list()) == 3 else "absorbs " + str(
        sorted(set(closed.edge_list()) - set(tree.edges)))
    print(f"  parents={tree.parent}  ->  {tag}")

print("\nPenrose trees:", penrose_tree_count(c4), "(sign (-1)^3 gives -3)")
print("partition check:", verify_partition_scheme(c4).ok)

# The closure rule compares the newer vertex with the *parent* of the deeper
# one. Comparing with the deeper vertex itself does not give a partition.
print("\nwith the index-comparison variant the scheme breaks:")
rep = verify_partition_scheme(c4, scheme=literal_index_closure)
print("  ok =", rep.ok, " first problem:", rep.violations[0] if rep.violations else None)
