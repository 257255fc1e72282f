"""Build script for the optional compiled queueing kernel.

The package is pure Python except for ``pegstress._kernels._mmc``, a small
Cython extension that accelerates the FIFO multi-server wait-time recursion.
If Cython is unavailable the build proceeds without the extension and the
package falls back to the pure-Python kernel at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "pegstress._kernels._mmc",
                ["src/pegstress/_kernels/_mmc.pyx"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
