import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CACTIKIT_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("cactikit._elim_c", ["src/cactikit/_elim_c.pyx"],
                       language="c++", extra_compile_args=["-O2", "-std=c++17"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
