"""
Quotient classes of A_o by its even part
========================================

Labels r, r' are related when r-bar (x) r' meets the subcategory.
For the even part of A_o(2) this splits the labels by parity.
"""

from qamalgam import AoRing, even_part, quotient_classes

A = AoRing(2)
D = even_part(A, 12)

# two classes, represented by v0 and v1
for c in quotient_classes(A, D, 9):
    print(c.representative, "->", ", ".join(str(m) for m in c.members))

# a group dual: the classes are the left cosets of H
from qamalgam import GroupDualRing, Subcategory, symmetric_group

G = GroupDualRing(symmetric_group(3))
H = Subcategory(G, [G.label("e"), G.label("(01)")])
for c in quotient_classes(G, H):
    print(c.representative, "->", ", ".join(str(m) for m in c.members))
