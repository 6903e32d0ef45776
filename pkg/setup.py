import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ORPROOFS_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "orproofs._kernels",
                    ["src/orproofs/_kernels.pyx"],
                    libraries=["crypto"],
                    extra_compile_args=["-O3", "-Wno-deprecated-declarations"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
