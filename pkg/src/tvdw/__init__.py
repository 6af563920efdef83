"""Exact arithmetic for the Takagi-van der Waerden functions ``T_r`` (even ``r``)."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
