from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("apollon._orbit", ["src/apollon/_orbit.pyx"])],
        language_level=3,
    )
except ImportError:
    # The pure-Python kernel in apollon._orbit_py is used when the
    # compiled extension is unavailable.
    extensions = []

setup(ext_modules=extensions)
