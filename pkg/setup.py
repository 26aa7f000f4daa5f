import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BATCHBLEU_NO_EXT"):
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "batchbleu._kernels",
                ["src/batchbleu/_kernels.pyx"],
                include_dirs=[np.get_include()],
                language="c++",
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
