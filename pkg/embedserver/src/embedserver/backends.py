"""Encoder backends producing unit-norm embeddings.

Two implementations share one interface: a seeded random transformer layer
that needs no weight files (fast, fully deterministic, used by the test
suite) and a wrapper around locally stored transformers checkpoints. Both
truncate overlong inputs tail-first and report which texts were cut.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
from typing import Protocol

import torch

from .types import BackendLoadError, ModelSpec

TINY_BACKEND = "tiny-random"
TRANSFORMERS_PREFIX = "transformers:"

_VOCAB = 4096
_HIDDEN = 64
_BOS = 0  # prepended to every text; the anchor token for cls pooling
_PAD = 1
_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+|[^A-Za-z0-9_\s]")


class EncoderBackend(Protocol):
    spec: ModelSpec

    def encode(self, texts: list[str]) -> tuple[list[list[float]], list[bool]]:
        """One unit-norm vector per text plus a was-truncated flag."""


def load_backend(spec: ModelSpec) -> "TinyRandomEncoder | TransformersEncoder":
    """Instantiate the backend named by spec.model_name.

    Names: "tiny-random" (optionally "tiny-random:<tag>", the tag varies
    the seeded weights) or "transformers:<checkpoint dir>".
    """
    if spec.model_name == TINY_BACKEND or spec.model_name.startswith(TINY_BACKEND + ":"):
        return TinyRandomEncoder(spec)
    if spec.model_name.startswith(TRANSFORMERS_PREFIX):
        return TransformersEncoder(spec)
    raise BackendLoadError(
        f"unknown model {spec.model_name!r}; expected "
        f"'{TINY_BACKEND}[:tag]' or '{TRANSFORMERS_PREFIX}<checkpoint dir>'"
    )


def _seed_from(name: str) -> int:
    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") & 0x7FFFFFFFFFFFFFFF


def _tokenize(text: str) -> list[int]:
    # stable across processes: hashlib, not the salted builtin hash
    ids = []
    for tok in _TOKEN_RE.findall(text):
        digest = hashlib.blake2b(tok.encode("utf-8"), digest_size=8).digest()
        ids.append(2 + int.from_bytes(digest, "big") % (_VOCAB - 2))
    return ids


class TinyRandomEncoder:
    """Single-attention-layer encoder with weights drawn from a fixed seed.

    The model name seeds every parameter, so equal names give equal
    vectors across processes. Float64 arithmetic keeps batched and
    single-text results equal far inside the protocol's 1e-6 tolerance.
    """

    def __init__(self, spec: ModelSpec) -> None:
        self.spec = spec
        gen = torch.Generator().manual_seed(_seed_from(spec.model_name))

        def mat(rows: int, cols: int) -> torch.Tensor:
            return torch.randn(rows, cols, generator=gen, dtype=torch.float64) / math.sqrt(cols)

        try:
            device = torch.device(spec.device)
            self._embed = mat(_VOCAB, _HIDDEN).to(device)
            self._pos = mat(spec.max_input_tokens, _HIDDEN).to(device)
            self._wq = mat(_HIDDEN, _HIDDEN).to(device)
            self._wk = mat(_HIDDEN, _HIDDEN).to(device)
            self._wv = mat(_HIDDEN, _HIDDEN).to(device)
            self._wo = mat(_HIDDEN, _HIDDEN).to(device)
            self._wp = mat(_HIDDEN, spec.dims).to(device)
        except RuntimeError as exc:
            raise BackendLoadError(f"cannot place weights on device {spec.device!r}: {exc}") from exc
        self._device = device

    def encode(self, texts: list[str]) -> tuple[list[list[float]], list[bool]]:
        if not texts:
            return [], []
        batch_ids: list[list[int]] = []
        truncated: list[bool] = []
        for text in texts:
            ids = [_BOS] + _tokenize(text)
            cut = len(ids) > self.spec.max_input_tokens
            if cut:
                ids = ids[: self.spec.max_input_tokens]
            batch_ids.append(ids)
            truncated.append(cut)
        width = max(len(ids) for ids in batch_ids)
        padded = torch.full((len(texts), width), _PAD, dtype=torch.long, device=self._device)
        mask = torch.zeros(len(texts), width, dtype=torch.float64, device=self._device)
        for row, ids in enumerate(batch_ids):
            padded[row, : len(ids)] = torch.tensor(ids, dtype=torch.long, device=self._device)
            mask[row, : len(ids)] = 1.0
        with torch.inference_mode():
            pooled = self._forward(padded, mask)
            vectors = torch.nn.functional.normalize(pooled, dim=1)
        return [row.tolist() for row in vectors.cpu()], truncated

    def _forward(self, ids: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
        x = self._embed[ids] + self._pos[: ids.shape[1]].unsqueeze(0)
        q = x @ self._wq
        k = x @ self._wk
        v = x @ self._wv
        scores = (q @ k.transpose(1, 2)) / math.sqrt(_HIDDEN)
        scores = scores.masked_fill(mask.unsqueeze(1) == 0.0, float("-inf"))
        x = torch.tanh(x + (torch.softmax(scores, dim=2) @ v) @ self._wo)
        if self.spec.pooling == "cls":
            pooled = x[:, 0, :]
        else:
            pooled = (x * mask.unsqueeze(2)).sum(dim=1) / mask.sum(dim=1, keepdim=True)
        return pooled @ self._wp


class TransformersEncoder:
    """Encoder over a locally stored transformers checkpoint."""

    def __init__(self, spec: ModelSpec) -> None:
        self.spec = spec
        path = spec.model_name[len(TRANSFORMERS_PREFIX) :]
        if not os.path.isdir(path):
            raise BackendLoadError(f"cannot load transformers checkpoint {path!r}: no such directory")
        try:
            from transformers import AutoModel, AutoTokenizer

            self._tokenizer = AutoTokenizer.from_pretrained(path, local_files_only=True)
            self._model = AutoModel.from_pretrained(path, local_files_only=True)
            self._model.to(torch.device(spec.device))
        except BackendLoadError:
            raise
        except Exception as exc:
            raise BackendLoadError(f"cannot load transformers checkpoint {path!r}: {exc}") from exc
        self._model.eval()
        hidden = getattr(self._model.config, "hidden_size", None)
        if hidden != spec.dims:
            raise BackendLoadError(
                f"checkpoint {path!r} has hidden size {hidden}, expected dims {spec.dims}"
            )

    def encode(self, texts: list[str]) -> tuple[list[list[float]], list[bool]]:
        if not texts:
            return [], []
        lengths = self._tokenizer(texts, truncation=False, padding=False)["input_ids"]
        truncated = [len(ids) > self.spec.max_input_tokens for ids in lengths]
        enc = self._tokenizer(
            texts,
            truncation=True,
            max_length=self.spec.max_input_tokens,
            padding=True,
            return_tensors="pt",
        ).to(self._model.device)
        with torch.inference_mode():
            out = self._model(**enc)
            hidden = out.last_hidden_state
            mask = enc["attention_mask"].unsqueeze(2).to(hidden.dtype)
            if self.spec.pooling == "cls":
                pooled = hidden[:, 0, :]
            else:
                pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
            vectors = torch.nn.functional.normalize(pooled, dim=1)
        return [row.tolist() for row in vectors.cpu()], truncated
