import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "ddk._ddk",
    [
        "src/bindings.cpp",
        "src/gauge.cpp",
        "src/spectrum.cpp",
        "src/clifford.cpp",
        "src/liouville.cpp",
        "src/perturbation.cpp",
        "src/gap_search.cpp",
    ],
    include_dirs=["include", "vendor", eigen],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
