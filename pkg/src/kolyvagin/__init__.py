"""Exact-arithmetic verification of algebraic Kolyvagin systems over Z/m."""

from .exterior import Functional, WedgeTensor, contract, contract_seq, wedge
from .gradedalg import GradedElement, SiteSet, project, s_operator
from .instance import InstanceParams, SevenTuple, random_instance
from .ksystems import KindError, SystemCollection, check_axioms
from .modring import Modulus, Residue
from .unitsys import Chain, UnitSystem, build_unit_systems, regulator, regulator_collection

__version__ = "0.1.0"
