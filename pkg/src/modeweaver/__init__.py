"""modeweaver: design and quantum-interference simulation of multimode
waveguide circuits built from mode multiplexers and grating mode-beamsplitters.
"""

from ._kernels import BACKEND as PERMANENT_BACKEND

__version__ = "0.1.0"

__all__ = ["PERMANENT_BACKEND", "__version__"]
