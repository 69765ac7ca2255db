"""Service configuration types."""

from __future__ import annotations

from dataclasses import dataclass

POOLING_MODES = ("cls", "mean")


class BackendLoadError(RuntimeError):
    """The requested encoder model could not be loaded."""


@dataclass(frozen=True)
class ModelSpec:
    """Which encoder to serve and how to run it.

    Inputs longer than max_input_tokens are truncated tail-first (the head
    of the text survives) and the response flags the cut.
    """

    model_name: str
    dims: int
    pooling: str = "mean"
    max_input_tokens: int = 512
    device: str = "cpu"

    def __post_init__(self) -> None:
        if not self.model_name:
            raise ValueError("model_name must be non-empty")
        if self.dims <= 0:
            raise ValueError(f"dims must be > 0, got {self.dims}")
        if self.pooling not in POOLING_MODES:
            raise ValueError(f"pooling must be one of {POOLING_MODES}, got {self.pooling!r}")
        if self.max_input_tokens < 1:
            raise ValueError(f"max_input_tokens must be >= 1, got {self.max_input_tokens}")
