"""CMake-driven build for the wifiaudit python package.

The extension module is produced by the repository's CMake project (target
``wifiaudit_python``) and staged into the package directory.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DWIFIAUDIT_BUILD_TESTS=OFF",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "wifiaudit_python", "-j"],
            check=True,
        )

        staged = build_dir / "python" / "wifiaudit"
        modules = list(staged.glob("_core*"))
        if not modules:
            raise RuntimeError("CMake build did not produce the _core extension module")

        target = Path(self.get_ext_fullpath(ext.name))
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(modules[0], target)


setup(
    packages=["wifiaudit"],
    package_dir={"wifiaudit": "python/wifiaudit"},
    ext_modules=[CMakeExtension("wifiaudit._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
