"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension holding the hot
loops (segment gathers, sub-period accumulation, Monte Carlo trial
sums).  The extension is marked optional: if Cython or a C compiler is
missing the install still succeeds and the NumPy fallback is used.
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
                "segcs._kernels_cy",
                ["src/segcs/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
