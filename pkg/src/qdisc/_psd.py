"""Select the compiled PSD kernel when available, else the pure-Python one."""
import os

BACKEND = "python"
if os.environ.get("QDISC_PURE_PYTHON") != "1":
    try:
        from qdisc._psd_ext import psd_int, psd_quad
        BACKEND = "compiled"
    except ImportError:
        pass
if BACKEND == "python":
    from qdisc._psd_py import psd_int, psd_quad

__all__ = ["BACKEND", "psd_int", "psd_quad"]
