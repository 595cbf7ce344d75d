# pip install -e . --no-build-isolation   (builds the compiled kernels in place)
# The extension is optional: if it fails to build, the numpy fallback is used.
import platform
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    np = None
    cythonize = None

compile_args = ["-O3"]
link_args = []
if sys.platform.startswith("linux"):
    compile_args += ["-fopenmp"]
    link_args += ["-fopenmp"]
    if platform.machine() in ("x86_64", "AMD64"):
        compile_args += ["-mpopcnt"]


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "qcdesign._kernels._ckernels",
                ["src/qcdesign/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=compile_args,
                extra_link_args=link_args,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
