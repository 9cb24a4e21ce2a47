"""Reinforced urn constructions of the semi-Markov beta-Stacy process"""

from smbs.urns.bs_system import BLACK, WHITE, BsSystem
from smbs.urns.dir_urn import DirUrn, Tracer, UrnDraw
from smbs.urns.process import RecurrenceDiagnostics, UrnProcess, UrnScheme, rup_generate

__all__ = [
    "BLACK",
    "BsSystem",
    "DirUrn",
    "RecurrenceDiagnostics",
    "Tracer",
    "UrnDraw",
    "UrnProcess",
    "UrnScheme",
    "WHITE",
    "rup_generate",
]
