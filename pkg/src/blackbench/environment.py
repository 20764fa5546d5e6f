"""Best-effort capture of the execution environment for report metadata."""

from __future__ import annotations

import platform
import socket
import sys


def cpu_model() -> str:
    try:
        with open("/proc/cpuinfo", encoding="utf-8") as fh:
            for line in fh:
                if line.lower().startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine() or "unknown"


def environment_info() -> dict:
    """Stable per-machine description; every value falls back to 'unknown'."""
    return {
        "cpu": cpu_model() or "unknown",
        "os": platform.platform() or "unknown",
        "toolchain": f"CPython {platform.python_version()}",
        "build_flags": sys.flags.optimize and f"-O{sys.flags.optimize}" or "default",
        "hostname": socket.gethostname() or "unknown",
    }
