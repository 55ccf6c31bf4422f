from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementations in triquad._kernels.pure when the extension is absent.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "triquad._kernels._core",
                ["src/triquad/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
