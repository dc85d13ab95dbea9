import os

from setuptools import setup

# The compiled kernels are optional: without Cython or a C compiler the
# package installs with the pure-Python fallback only.
ext_modules = []
if not os.environ.get("EPRGAME_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "eprgame._kernels",
                    ["src/eprgame/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
