"""Six-vertex model with a reflecting end: partition function, boundary
correlations and emptiness formation probability."""
from .api import Method, Quantity, evaluate
from .homogeneous import HomogeneousPoint
from .weights import ModelParameters

__all__ = ["HomogeneousPoint", "Method", "ModelParameters", "Quantity", "evaluate"]
__version__ = "0.1.0"
