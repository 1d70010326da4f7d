import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Artifact root used when a run does not pass --out
FBKAN_OUTPUT_DIR = os.getenv("FBKAN_OUTPUT_DIR", "runs")

# Root logging level for the command line entry point
FBKAN_LOG_LEVEL = os.getenv("FBKAN_LOG_LEVEL", "INFO")

# --fast scales iteration counts by this factor and loosens upper bounds by the tolerance
FBKAN_FAST_FACTOR = float(os.getenv("FBKAN_FAST_FACTOR", "0.25"))
FBKAN_FAST_TOLERANCE = float(os.getenv("FBKAN_FAST_TOLERANCE", "3.0"))

# Torch intra-op threads; unset keeps the torch default
FBKAN_NUM_THREADS = int(os.getenv("FBKAN_NUM_THREADS", "0")) or None

# Opt-in for the long reproduction tests
FBKAN_RUN_SLOW = os.getenv("FBKAN_RUN_SLOW", "0") == "1"
