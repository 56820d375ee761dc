from weilcert.algebra.field import FieldDesc, field_make
from weilcert.algebra.intpoly import IntPoly, newton_power_sums, poly_gcd_z

__all__ = ["FieldDesc", "field_make", "IntPoly", "newton_power_sums", "poly_gcd_z"]
