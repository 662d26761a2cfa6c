from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("spikestab._kernels", ["src/spikestab/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    # Pure-NumPy fallback kernels are used when the extension is absent.
    ext_modules = []

setup(ext_modules=ext_modules)
