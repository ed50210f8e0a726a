"""
Environment configuration for derivkey.
This module centralizes all environment variables and provides defaults.
Values from a dataset config file take precedence over these.
"""
import os
from typing import Dict, Any

from dotenv import load_dotenv

load_dotenv()


def get_env_config() -> Dict[str, Any]:
    """
    Get the environment configuration.

    Returns:
        Dictionary with environment configuration
    """
    return {
        # General settings
        "log_level": os.environ.get("DERIVKEY_LOG_LEVEL", "INFO").upper(),

        # Numeric tolerances
        "det_tolerance": float(os.environ.get("DERIVKEY_DET_TOLERANCE", "1e-12")),
        "imag_tol": float(os.environ.get("DERIVKEY_IMAG_TOL", "1e-9")),
        "eigen_max_dim": int(os.environ.get("DERIVKEY_EIGEN_MAX_DIM", "64")),

        # Keying
        "key_scale": int(os.environ.get("DERIVKEY_KEY_SCALE", "1000")),  # millis

        # Reconstruction
        "newton_tol": float(os.environ.get("DERIVKEY_NEWTON_TOL", "1e-10")),
        "newton_max_iter": int(os.environ.get("DERIVKEY_NEWTON_MAX_ITER", "50")),

        # Row-wise table processing
        "max_workers": int(os.environ.get("DERIVKEY_MAX_WORKERS", "4")),
    }


# Global environment configuration
ENV_CONFIG = get_env_config()
