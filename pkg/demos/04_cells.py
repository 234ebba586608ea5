"""Left and two-sided cells from the mu-graph, with certification near the boundary."""

from coxhecke import CoxeterMatrix, KLTable, build_ball, cell_partition, mu_graph
from coxhecke.cells import block_dag_dot

ball = build_ball(CoxeterMatrix.triangle(3, 3, 3), 10)
graph = mu_graph(ball, KLTable(ball).compute_all())
two = cell_partition(ball, graph, "TWO_SIDED", margin=4)
for b, members in enumerate(two.blocks):
    status = "certified" if two.certified[b] else "partial"
    print(f"block {b}: {len(members):4d} elements, shortest {ball.format_word(members[0])!r}, {status}")
print()
print(block_dag_dot(ball, two))
