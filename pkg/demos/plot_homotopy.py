"""
Rotating one origin into the other
==================================

u swaps the two origins and u_t = cos t + i sin t u stays unitary.
At t = pi/2 the two Julg-Valette operators are intertwined exactly.
"""

from qamalgam import build_classical_tree, commutator_report, homotopy_check, julg_valette
from qamalgam.catalog import z6_c3_s3
from qamalgam.tree import default_generators

spec = z6_c3_s3()
tree = build_classical_tree(spec, 3)
rep = homotopy_check(tree)
for s in rep.samples:
    print(f"t={s.t:.4f}  unitarity {s.unitarity_defect:.1e}  endpoint {s.exact_endpoint_defect}")
print("control defect at t=0:", rep.control_defect)

# commutators with the group action vanish away from the boundary
phi = julg_valette(tree, 1)
for g in default_generators(spec):
    c = commutator_report(tree, phi, g, 1)
    print(c.generator, "interior", c.interior_max_entry, "off-interior rank", c.off_interior_rank)
