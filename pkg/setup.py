"""Build script for the optional compiled simulation loop.

The package works without the extension (a pure-Python loop is selected at
import time), so a failed compile only costs speed, never correctness.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the accelerator if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"WARNING: compiled loop not built ({exc}); "
              "simiss will use the pure-Python backend")


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available; building without the compiled loop")
        return []
    ext = Extension(
        "simiss._core_cy",
        ["src/simiss/_core_cy.pyx"],
        # -ffp-contract=off keeps the C arithmetic bit-identical to CPython
        # floats (no fused multiply-add), which the backend tests require.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
