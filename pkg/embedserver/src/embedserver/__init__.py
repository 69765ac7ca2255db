"""HTTP sidecar serving L2-normalized code embeddings from local encoder models."""

from .app import build_app, serve
from .backends import EncoderBackend, TinyRandomEncoder, TransformersEncoder, load_backend
from .batching import batch_schedule
from .types import POOLING_MODES, BackendLoadError, ModelSpec

__version__ = "0.1.0"

__all__ = [
    "BackendLoadError",
    "EncoderBackend",
    "ModelSpec",
    "POOLING_MODES",
    "TinyRandomEncoder",
    "TransformersEncoder",
    "batch_schedule",
    "build_app",
    "load_backend",
    "serve",
    "__version__",
]
