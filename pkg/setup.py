from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy as np
    from setuptools import Extension

    ext_modules = cythonize(
        Extension(
            "coverlaw._ckernels",
            ["src/coverlaw/_ckernels.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        ),
        language_level=3,
    )
except ImportError:
    # no Cython available: the pure-Python kernels are used
    pass

setup(ext_modules=ext_modules)
