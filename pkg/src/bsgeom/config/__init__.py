"""
BSGeom Configuration

This package contains the experiment configuration for bsgeom.
"""

from bsgeom.config.settings import ExperimentConfig, config_hash

__all__ = ["ExperimentConfig", "config_hash"]
