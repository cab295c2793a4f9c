import sys
from pathlib import Path

# make helpers importable regardless of pytest's import mode
sys.path.insert(0, str(Path(__file__).parent))
