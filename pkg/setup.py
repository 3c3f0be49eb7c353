from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: ship the pure-Python scheduler only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("ecmpower._schedule", ["src/ecmpower/_schedule.pyx"],
                   extra_compile_args=["-O3"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
