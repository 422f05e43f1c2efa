import sys
from pathlib import Path

# src layout: make the package importable when it has not been pip-installed
try:
    import plane_supports  # noqa: F401
except ImportError:
    sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))
