"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
backend is selected at import time), so any build failure here downgrades
to a warning instead of aborting the install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Allow the install to proceed when the extension cannot be built."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: building the axaclin compiled kernels failed "
            f"({exc!r}); falling back to the pure-Python backend.",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "WARNING: Cython not available; installing axaclin without "
            "compiled kernels.",
            file=sys.stderr,
        )
        return []
    ext = Extension(
        "axaclin._kernels._core",
        ["src/axaclin/_kernels/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
