"""Exact computations with the pro-p Iwahori Hecke algebra of SL_2 and H^1 of congruence subgroups."""

from .finring import CharCase, FieldParams
from .hecke import Character, HeckeAlgebra
from .assembly import finite_submodule, socle_table, z_m

__all__ = ["CharCase", "Character", "FieldParams", "HeckeAlgebra", "finite_submodule", "socle_table", "z_m"]
