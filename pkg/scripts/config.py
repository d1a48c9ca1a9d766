import os
import logging
from dotenv import load_dotenv

# --- Configuration ---

# Finds the .env next to the repository root, the same way for the CLI,
# the service and the tests.
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
env_path = os.path.join(BASE_DIR, '..', '.env')
load_dotenv(env_path)

DEFAULT_EPS = float(os.getenv("SPIRACERT_EPS", "1e-14"))
DEFAULT_ORDER = int(os.getenv("SPIRACERT_ORDER", "64"))
LOG_LEVEL = os.getenv("SPIRACERT_LOG_LEVEL", "WARNING").upper()
THREAD_CAP = os.getenv("SPIRACERT_THREADS")

MAX_TERMS = 10_000

# Certificate and oracle tolerances
CERT_TOL = 1e-10
SAMPLE_SLACK = 1e-12
ZERO_GUARD = 1e-12
REFUTE_MARGIN = 0.05
ORACLE_REL_TOL = 1e-10
DERIVATIVE_REL_TOL = 1e-12
DOMINATION_SLACK = 1e-12

# Verification suite defaults
DEFAULT_SEED = 42
DEFAULT_TUPLES = 10_000
CHUNK_SIZE = 250

logger = logging.getLogger(__name__)


def resolve_threads(requested: int | None = None) -> int:
    """
    Number of worker threads: the request (or the CPU count) capped by
    SPIRACERT_THREADS. Never below one.
    """
    threads = requested if requested else (os.cpu_count() or 1)
    if THREAD_CAP:
        try:
            threads = min(threads, int(THREAD_CAP))
        except ValueError:
            logger.warning(f"Ignoring non-integer SPIRACERT_THREADS={THREAD_CAP!r}")
    return max(1, threads)
