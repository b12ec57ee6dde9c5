import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CREDITNET_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "creditnet._ckernel",
                    ["src/creditnet/_ckernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython available: install with the pure-Python kernel only.
        ext_modules = []

setup(ext_modules=ext_modules)
