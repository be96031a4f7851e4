"""Settings for the covercount project.

Every value can be overridden through the environment, which is how
acceptance runs pin tolerances without touching code.

Numerical tolerances:
    COVERCOUNT_PROJECTIVE_EPS   projective equality / incidence residual
    COVERCOUNT_CLUSTER_EPS      root clustering radius
    COVERCOUNT_TAYLOR_NOISE     backward-error level accepted when merging root rings
    COVERCOUNT_ROOT_MAX_ITER    simultaneous iteration cap
    COVERCOUNT_ROOT_TOL         relative correction size at which a root freezes
    COVERCOUNT_TRACK_RESIDUAL   max |s^m - q(t)| / (1 + |q(t)|) on accepted steps
    COVERCOUNT_STEP_FLOOR       smallest tracking step before StepUnderflow
    COVERCOUNT_CORRECTOR_MAX_ITER  Newton iterations per tracking step
    COVERCOUNT_SEPARATION_FACTOR   predictor separation factor between sheets
    COVERCOUNT_MAX_PARAM        largest chart parameter allowed for a needed point
    COVERCOUNT_RANK_TOL         relative singular value threshold of the contact oracle
    COVERCOUNT_BRANCH_TOL       relative |F(P)| under which P counts as on the branch locus
    COVERCOUNT_MATCH_TOL        relative distance under which two fiber points are the same sheet
"""

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

# Django project settings. covercount uses Django for its management
# command framework only: no database, no HTTP surface.
SECRET_KEY = os.getenv("SECRET_KEY", "dev-insecure-change-me")
DEBUG = os.getenv("DEBUG", "False").lower() in {"1", "true", "yes"}
INSTALLED_APPS = [
    "covercount",
]
DATABASES = {}
USE_TZ = True


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, str(default)))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


PROJECTIVE_EPS = _env_float("COVERCOUNT_PROJECTIVE_EPS", 1e-10)
CLUSTER_EPS = _env_float("COVERCOUNT_CLUSTER_EPS", 1e-6)
TAYLOR_NOISE = _env_float("COVERCOUNT_TAYLOR_NOISE", 1e-10)
ROOT_MAX_ITER = _env_int("COVERCOUNT_ROOT_MAX_ITER", 200)
ROOT_TOL = _env_float("COVERCOUNT_ROOT_TOL", 1e-13)
TRACK_RESIDUAL = _env_float("COVERCOUNT_TRACK_RESIDUAL", 1e-9)
STEP_FLOOR = _env_float("COVERCOUNT_STEP_FLOOR", 1e-12)
CORRECTOR_MAX_ITER = _env_int("COVERCOUNT_CORRECTOR_MAX_ITER", 8)
SEPARATION_FACTOR = _env_float("COVERCOUNT_SEPARATION_FACTOR", 3.0)
MAX_PARAM = _env_float("COVERCOUNT_MAX_PARAM", 1e6)
RANK_TOL = _env_float("COVERCOUNT_RANK_TOL", 1e-8)
BRANCH_TOL = _env_float("COVERCOUNT_BRANCH_TOL", 1e-8)
MATCH_TOL = _env_float("COVERCOUNT_MATCH_TOL", 1e-6)

# Worker cap for component data and offsets; results never depend on it.
THREADS = max(1, _env_int("COVERCOUNT_THREADS", os.cpu_count() or 1))

# Desk bound for the verify harness.
VERIFY_MAX_DEGREE = 12

# Logging configuration
# Log level can be set via LOG_LEVEL env var (DEBUG, INFO, WARNING, ERROR, CRITICAL)
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "[{levelname}] {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "stream": "ext://sys.stderr",
        }
    },
    "loggers": {
        "lib": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "covercount": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
