"""Embedding and completion providers: HTTP clients and offline mocks."""

from .conformance import check_completion_protocol, check_embedding_protocol
from .http import TOKEN_ENV_VAR, HttpCompletionProvider, HttpEmbeddingProvider
from .mocks import (
    DEFAULT_MS_PER_PROMPT_TOKEN,
    SENTINEL_COMPLETION,
    ConstantCompleter,
    CopyOracleCompleter,
    MockEmbeddingProvider,
    mock_embed,
)
from .types import (
    CompletionProviderConfig,
    CompletionRequest,
    CompletionResponse,
    EmbeddingProviderConfig,
    ProviderError,
)

__all__ = [
    "CompletionProviderConfig",
    "CompletionRequest",
    "CompletionResponse",
    "ConstantCompleter",
    "CopyOracleCompleter",
    "DEFAULT_MS_PER_PROMPT_TOKEN",
    "EmbeddingProviderConfig",
    "HttpCompletionProvider",
    "HttpEmbeddingProvider",
    "MockEmbeddingProvider",
    "ProviderError",
    "SENTINEL_COMPLETION",
    "TOKEN_ENV_VAR",
    "check_completion_protocol",
    "check_embedding_protocol",
    "mock_embed",
]
