"""Build script for the compiled Monte Carlo kernel.

The extension is optional at runtime: if it is absent (or the environment
variable PCMC_SKIP_EXTENSION is set at build time), the package falls back
to the pure Python kernel in ``pcmc._kernel_py``.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("PCMC_SKIP_EXTENSION"):
    ext_modules = cythonize(
        [
            Extension(
                "pcmc._mc_kernel",
                ["src/pcmc/_mc_kernel.pyx"],
                # -ffp-contract=off keeps results bit-identical to the pure
                # Python kernel (no fused multiply-add contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
