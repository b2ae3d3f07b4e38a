"""
UniSTPA Application
Orchestrates parsing, analysis, reporting and runtime-guard replay.
"""
__version__ = "1.0.0"

from .core import ModelLoad, UniStpaApp

__all__ = ["UniStpaApp", "ModelLoad", "__version__"]
