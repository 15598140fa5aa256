"""Permanent kernel selection.

The hot kernel (Ryser's formula with Gray-code subset updates) exists in two
interchangeable implementations: a compiled Cython extension and a pure
numpy fallback. The compiled one is preferred when the extension built
successfully; ``BACKEND`` records which one is active so benchmarks and
diagnostics can report it.
"""

from .ryser_py import permanent_ryser as _permanent_py

try:
    from ._ryser import permanent_ryser as _permanent_c

    permanent_kernel = _permanent_c
    BACKEND = "cython"
except ImportError:
    permanent_kernel = _permanent_py
    BACKEND = "python"

permanent_kernel_python = _permanent_py

__all__ = ["permanent_kernel", "permanent_kernel_python", "BACKEND"]
