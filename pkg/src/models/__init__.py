"""Data models for quivers, representations, universes, exact structures and reports."""

from src.models.quiver import Quiver  # noqa: F401
from src.models.representation import Conflation, Morphism, Representation  # noqa: F401
from src.models.reports import LawReport, Violation  # noqa: F401
from src.models.session import Session  # noqa: F401
from src.models.structures import CotorsionPair, ExactStructure, ObjectClass  # noqa: F401
from src.models.universe import CanonicalConflation, Universe  # noqa: F401
