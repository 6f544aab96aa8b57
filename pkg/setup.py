from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python fallback kernel keeps the package functional without Cython.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("zsinv._kernel", ["src/zsinv/_kernel.pyx"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
