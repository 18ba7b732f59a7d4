"""Build script: compiles the optional GF(2) scan kernel.

The extension is optional; if Cython or a C compiler is unavailable the
package installs anyway and falls back to the pure-Python kernels.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mubforge._kernels",
                sources=["src/mubforge/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
