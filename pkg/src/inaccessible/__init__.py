"""Logical lattices with accessibility labels, MES quasi-probability models and inaccessibility measures."""

from .lattice import Configuration, Statement
from .mes import MesModel
from .models import Model

__all__ = ["Configuration", "MesModel", "Model", "Statement"]
__version__ = "0.1.0"
