"""Build script: compiles the optional speedup extension when Cython is present.

Set MULTIMEIXNER_NO_EXT=1 to skip the extension entirely; the package then
runs on the pure-Python kernel.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MULTIMEIXNER_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "multimeixner._kernel._speedups",
                    ["src/multimeixner/_kernel/_speedups.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
