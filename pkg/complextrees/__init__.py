# ComplexTrees/__init__.py

from .config import get_config, set_config, reset_config
from .errors import ComplexTreesError

__all__ = ["get_config", "set_config", "reset_config", "ComplexTreesError"]
