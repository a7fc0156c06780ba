from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "slabmoments.kernels._fast",
        sources=["src/slabmoments/kernels/_fast.pyx"],
        extra_compile_args=["-O3"],
    ),
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    ),
)
