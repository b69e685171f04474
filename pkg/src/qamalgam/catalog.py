"""Standard amalgams used by the demos and tests."""

from __future__ import annotations

from .groups import cyclic_group, symmetric_group
from .tree import AmalgamGroupSpec, amalgam_spec


def z2_z2() -> AmalgamGroupSpec:
    """``Z/2 * Z/2`` (the infinite dihedral group), trivial amalgamation."""
    g = cyclic_group(2)
    return amalgam_spec(g, g, [("e", "e")], name="Z2*Z2")


def s3_c2_s3() -> AmalgamGroupSpec:
    """``S3 *_{C2} S3`` over the transposition ``(01)``."""
    g = symmetric_group(3)
    return amalgam_spec(g, g, [("e", "e"), ("(01)", "(01)")], name="S3*C2S3")


def z6_c3_s3() -> AmalgamGroupSpec:
    """``Z/6 *_{C3} S3`` with ``a^2`` identified with ``(012)``."""
    return amalgam_spec(
        cyclic_group(6),
        symmetric_group(3),
        [("e", "e"), ("a^2", "(012)"), ("a^4", "(021)")],
        name="Z6*C3S3",
    )


CLASSICAL = {"Z2*Z2": z2_z2, "S3*C2S3": s3_c2_s3, "Z6*C3S3": z6_c3_s3}
