"""Enumerate the type C3 exchange graph and compare it with the polygon model."""

from gencluster.seeds import enumerate_graph
from gencluster.typec import flip_closure, initial_seed, typec

seed = initial_seed(3)
graph = enumerate_graph(seed)
print(f"clusters: {graph.num_nodes}, cluster variables: {len(graph.cluster_variables())}")
print(f"triangulations reached by flips: {len(flip_closure(3))}")

C = typec(3)
for orb, x in sorted(C.expansions.items()):
    print(f"{orb}: {x}")
    print(f"    in small variables: {C.express_in_small(x)}")
