"""Provider configuration and request/response types."""

from __future__ import annotations

from dataclasses import dataclass


class ProviderError(RuntimeError):
    """A provider call failed after exhausting retries."""

    def __init__(self, message: str, batch_indices: tuple[int, ...] = ()) -> None:
        super().__init__(message)
        self.batch_indices = batch_indices


@dataclass(frozen=True)
class EmbeddingProviderConfig:
    endpoint: str
    model_name: str
    dims: int
    batch_size: int = 16
    timeout_ms: int = 10_000
    retries: int = 3

    def __post_init__(self) -> None:
        if self.dims <= 0:
            raise ValueError(f"dims must be > 0, got {self.dims}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass(frozen=True)
class CompletionProviderConfig:
    endpoint: str
    timeout_ms: int = 30_000
    retries: int = 3


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    max_tokens: int = 512
    temperature: float = 0.0  # greedy decoding only
    stop: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")
        if self.temperature != 0.0:
            raise ValueError("only greedy decoding (temperature 0) is supported")


@dataclass(frozen=True)
class CompletionResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: float

    def __post_init__(self) -> None:
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be >= 0")
        if self.latency_ms < 0:
            raise ValueError(f"latency_ms must be >= 0, got {self.latency_ms}")
