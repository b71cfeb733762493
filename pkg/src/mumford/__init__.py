"""Mumford covers of the p-adic projective line: exact arithmetic, tree geometry,
branch-point bounds, explicit Schottky groups and a combinatorial group oracle."""

from .errors import MumfordError
from .padic import FieldDescriptor, PadicElement, make_field, root_of_unity

__all__ = ["FieldDescriptor", "MumfordError", "PadicElement", "make_field", "root_of_unity"]
