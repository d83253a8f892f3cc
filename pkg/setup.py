"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python mirror of the
kernels is selected at import time), so a failed compile downgrades to
a warning instead of aborting the install.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "painleve1._kern",
                ["src/painleve1/_kern.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # noqa: BLE001 - any build-chain failure falls back
    sys.stderr.write(
        "warning: compiled kernels unavailable (%s); "
        "installing with the pure-Python backend\n" % exc
    )
    ext_modules = []

setup(ext_modules=ext_modules)
