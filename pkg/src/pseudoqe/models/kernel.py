"""Pick the evaluation kernel: compiled if built, pure Python otherwise.

Set PSEUDOQE_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _kernel_py

python_kernel = _kernel_py
compiled_kernel = None
if os.environ.get("PSEUDOQE_PURE_PYTHON") != "1":
    try:
        from . import _kernel as compiled_kernel  # type: ignore[no-redef]
    except ImportError:
        compiled_kernel = None

kernel = compiled_kernel or python_kernel
COMPILED = compiled_kernel is not None


def get_kernel(name: str = "auto"):
    if name == "python":
        return python_kernel
    if name == "compiled":
        if compiled_kernel is None:
            raise RuntimeError("compiled kernel is not built")
        return compiled_kernel
    return kernel
