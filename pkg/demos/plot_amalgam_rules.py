"""
Fusion rules of A_o *_T A_o
===========================

Labels are a^k.v_l. Moving a past an odd v flips its sign, so
fusing two labels adds the a-powers with a twist.
"""

from qamalgam import AmalgamRing, check_dim_mult_claim

M = AmalgamRing(2)

x, y = M.label(0, 1), M.label(1, 0)
print(x, "(x)", y, "=", M.fuse(x, y))
print("conj of a^2.v1:", M.conj(M.label(2, 1)))

# the second v1 carries a, visible inside v_{1,1} (x) v_{2,1}
print(check_dim_mult_claim([(1, 1), (2, 1)], ring=M))
