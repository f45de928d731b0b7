"""Steady states of the inhomogeneous multispecies totally asymmetric zero range process."""

from .polyring import Polynomial
from .states import Sector, enumerate_sector, format_config, parse_config

__version__ = "0.1.0"

__all__ = ["Polynomial", "Sector", "enumerate_sector", "format_config", "parse_config"]
