"""Kernel backend selection.

Two interchangeable lanes implement the hot path kernels: a numba-jitted one
and a pure numpy one. LEVYLAB_BACKEND={numba,numpy} forces a lane; unset picks
numba when importable. Increment generation always happens in numpy
orchestration, so both lanes consume identical driving noise.
"""
import os


def _numba_ok() -> bool:
    try:
        import numba  # noqa: F401
        return True
    except Exception:
        return False


_env = os.environ.get("LEVYLAB_BACKEND", "").strip().lower()
if _env == "numpy":
    BACKEND = "numpy"
elif _env == "numba":
    if not _numba_ok():
        raise ImportError("LEVYLAB_BACKEND=numba but numba is not importable")
    BACKEND = "numba"
elif _env == "":
    BACKEND = "numba" if _numba_ok() else "numpy"
else:
    raise ValueError("LEVYLAB_BACKEND must be 'numba' or 'numpy', got %r" % _env)
