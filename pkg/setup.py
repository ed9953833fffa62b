"""Build shim: compiles the optional Cython kernel extension.

The package works without the extension (a pure numpy/Python fallback is
selected at import time), so a missing compiler only costs speed. Build
errors in the extension are downgraded to a warning.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            warnings.warn(f"kernel extension not built ({exc}); using fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"kernel extension not built ({exc}); using fallback")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "ltlink.kernels._core",
        ["src/ltlink/kernels/_core.pyx"],
        # -ffp-contract=off pins float behaviour to match the numpy fallback
        # bit-for-bit (no FMA contraction in the Viterbi metric sums).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
