"""Build script for the compiled simulation kernels.

The extension must produce bit-identical floating point results to the
pure-Python kernel twins in vecbal._kernels_py, so FMA contraction is
disabled and no fast-math style reassociation is allowed.  GCC also likes
to fuse adjacent sin/cos calls on the same argument into one glibc sincos
call, which rounds differently from the separate calls CPython makes;
-fno-builtin-sin/-fno-builtin-cos keeps the calls separate (the fusion
runs on the recognized builtins, so opting sincos itself out is not
enough).
"""

from setuptools import setup
from setuptools.extension import Extension

from Cython.Build import cythonize

extensions = [
    Extension(
        "vecbal._kernels_cy",
        ["src/vecbal/_kernels_cy.pyx"],
        extra_compile_args=[
            "-O3",
            "-ffp-contract=off",
            "-fno-builtin-sin",
            "-fno-builtin-cos",
        ],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
)
