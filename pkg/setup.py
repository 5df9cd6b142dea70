"""Build script: compiles the optional reduction-engine extension.

The package works without the extension (pure-Python fallback is selected
at import time); the build therefore tolerates a missing compiler.
"""
from setuptools import setup, Extension

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "jetcalc._reduce_cy",
                ["src/jetcalc/_reduce_cy.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
