"""Minimal HTTP service exposing a masked language model under the
fill-mask wire protocol used by the extraction pipeline's scorer client."""

from .app import create_app
from .config import ServiceConfig
from .engine import MaskFiller

__version__ = "0.1.0"

__all__ = ["create_app", "MaskFiller", "ServiceConfig", "__version__"]
