"""
Julg-Valette index on a truncated coset tree
============================================

Phi sends each vertex to the edge pointing back to an origin.
On every ball its kernel is the origin line and its cokernel vanishes.
"""

from qamalgam import AoRing, build_classical_tree, build_quotient_tree, even_part, fredholm_report, julg_valette
from qamalgam.catalog import s3_c2_s3

spec = s3_c2_s3()
for depth in range(5):
    tree = build_classical_tree(spec, depth)
    rep = fredholm_report(tree, julg_valette(tree, 1))
    print(f"depth {depth}: {len(tree.vertices)} vertices, {len(tree.edges)} edges, index {rep.index}")

# the same count on the tree built from quotient classes
A = AoRing(2)
tree = build_quotient_tree(A, A, even_part(A, 12), 4, degree_bound=6)
print("A_o quotient tree, index", fredholm_report(tree, julg_valette(tree, 1)).index)
