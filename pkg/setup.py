from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qarobust.lexres._scan",
                ["src/qarobust/lexres/_scan.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # The package still works without the compiled kernel; the numpy
    # fallback is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
