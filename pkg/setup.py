"""Build glue for the optional compiled interval kernels.

The package is pure Python apart from one Cython module holding the
T-norm/T-conorm arithmetic.  The extension is marked optional: if no
compiler (or no Cython) is available the install still succeeds and the
package falls back to the reference implementation at import time.
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
                "possum.calculus._speedups",
                ["src/possum/calculus/_speedups.pyx"],
                # Keep C arithmetic bit-identical to CPython's: no
                # fused-multiply-add contraction.
                extra_compile_args=["-ffp-contract=off"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
