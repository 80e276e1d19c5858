import os

from setuptools import Extension, setup

# The compiled kernel-quadrature core is optional: the package falls back to
# the numpy implementation at import time if the extension is missing.
ext_modules = []
if not os.environ.get("HAUS_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("haus._kern._fast", ["src/haus/_kern/_fast.pyx"])],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"haus: skipping compiled kernel core ({exc!r})")

setup(ext_modules=ext_modules)
