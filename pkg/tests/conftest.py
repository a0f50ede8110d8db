import sys
from pathlib import Path

# Make the oracle helpers importable as plain modules from any test file.
sys.path.insert(0, str(Path(__file__).parent))
