"""Build script: compiles the optional accelerator extension when possible.

The package is fully functional without the extension; a NumPy
implementation of the same kernels is selected at import time if the
compiled module is missing (see ``hsicselect._backend``).
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Tolerate a failed extension build instead of aborting the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"warning: building the hsicselect._core extension failed ({exc}); "
            "falling back to the pure NumPy implementation",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; skipping compiled core", file=sys.stderr)
        return []
    ext = Extension(
        "hsicselect._core",
        sources=["src/hsicselect/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
