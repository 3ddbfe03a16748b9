"""Embedding and exhaustive nearest-neighbor retrieval over chunks.

Distances are squared Euclidean (order-equivalent to L2, no sqrt), in
64-bit floats. The built-in offline embedder feature-hashes word n-grams
into a fixed dimension and L2-normalizes, so it is fully deterministic;
a remote HTTP provider can be swapped in through configuration.
"""

import hashlib
import re
from dataclasses import dataclass
from typing import Protocol

import httpx
import numpy as np

from .errors import CodequizError
from .ingestion import Chunk

DEFAULT_DIM = 256
DEFAULT_K = 4


class RetrievalError(CodequizError):
    pass


class EmptyText(RetrievalError):
    def __init__(self):
        super().__init__("cannot embed empty text")


class EmptyIndex(RetrievalError):
    def __init__(self):
        super().__init__("index has no entries")


class DimensionMismatch(RetrievalError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"expected dimension {expected}, got {got}")
        self.expected = expected
        self.got = got


class DuplicateId(RetrievalError):
    def __init__(self, chunk_id: str):
        super().__init__(f"duplicate chunk id {chunk_id!r}")
        self.chunk_id = chunk_id


class ProviderUnavailable(RetrievalError):
    """Remote embedding failure, carrying retry metadata."""

    def __init__(self, detail: str, status: int | None = None, retryable: bool = True):
        super().__init__(f"embedding provider unavailable: {detail}")
        self.status = status
        self.retryable = retryable


class Embedder(Protocol):
    dim: int

    def embed(self, texts: list[str]) -> list[np.ndarray]: ...


_WORD_RE = re.compile(r"[a-z0-9_]+")


class HashingEmbedder:
    """Offline feature-hashing embedder over word unigrams and bigrams."""

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim

    def _tokens(self, text: str) -> list[str]:
        words = _WORD_RE.findall(text.lower())
        bigrams = [f"{a} {b}" for a, b in zip(words, words[1:])]
        tokens = words + bigrams
        # texts with no word characters still get one stable feature
        return tokens if tokens else [text.strip()]

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        out = []
        for text in texts:
            vec = np.zeros(self.dim, dtype=np.float64)
            for token in self._tokens(text):
                h = int.from_bytes(
                    hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(),
                    "big",
                )
                sign = 1.0 if h & 1 else -1.0
                vec[(h >> 1) % self.dim] += sign
            norm = float(np.linalg.norm(vec))
            if norm == 0.0:  # features cancelled; fall back to a unit basis vector
                vec[0] = 1.0
            else:
                vec /= norm
            out.append(vec)
        return out


class RemoteEmbedder:
    """HTTP embedding provider: JSON `texts` in, `vectors` out."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        dim: int,
        api_key: str | None = None,
        client: httpx.Client | None = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.dim = dim
        self.api_key = api_key
        self._client = client or httpx.Client(timeout=30.0)

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = self._client.post(
                self.endpoint,
                json={"model": self.model, "texts": texts},
                headers=headers,
            )
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(str(exc)) from None
        if response.status_code != 200:
            # 4xx is a configuration problem, retrying will not help
            raise ProviderUnavailable(
                f"HTTP {response.status_code}",
                status=response.status_code,
                retryable=response.status_code >= 500,
            )
        vectors = response.json().get("vectors", [])
        out = [np.asarray(v, dtype=np.float64) for v in vectors]
        for vec in out:
            if vec.shape != (self.dim,):
                raise DimensionMismatch(self.dim, int(vec.shape[0]))
        return out


def embed_text(text: str, embedder: Embedder) -> np.ndarray:
    if text.strip() == "":
        raise EmptyText()
    return embedder.embed([text])[0]


@dataclass(frozen=True)
class VectorIndex:
    dim: int
    ids: tuple[str, ...]
    matrix: np.ndarray  # shape (n, dim)

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class ContextBundle:
    topic: str
    chunks: list[tuple[Chunk, float]]  # (chunk, squared distance), ascending


def build_index(
    items: list[tuple[str, np.ndarray]], dim: int | None = None
) -> VectorIndex:
    """Build a flat index; insertion order is the tie-breaking order."""
    if not items:
        return VectorIndex(dim=dim or DEFAULT_DIM, ids=(), matrix=np.zeros((0, dim or DEFAULT_DIM)))
    ids = []
    seen = set()
    rows = []
    expected = dim
    for chunk_id, vector in items:
        vec = np.asarray(vector, dtype=np.float64)
        if expected is None:
            expected = int(vec.shape[0])
        if vec.shape != (expected,):
            raise DimensionMismatch(expected, int(vec.shape[0]))
        if chunk_id in seen:
            raise DuplicateId(chunk_id)
        seen.add(chunk_id)
        ids.append(chunk_id)
        rows.append(vec)
    return VectorIndex(dim=expected, ids=tuple(ids), matrix=np.stack(rows))


def query_knn(
    index: VectorIndex, q: np.ndarray, k: int
) -> list[tuple[str, float]]:
    """k nearest entries by squared L2, ascending; ties by insertion order."""
    if k <= 0:
        raise ValueError("k must be positive")
    query = np.asarray(q, dtype=np.float64)
    if query.shape != (index.dim,):
        raise DimensionMismatch(index.dim, int(query.shape[0]))
    if len(index) == 0:
        return []
    deltas = index.matrix - query
    distances = np.einsum("ij,ij->i", deltas, deltas)
    order = np.argsort(distances, kind="stable")[: min(k, len(index))]
    return [(index.ids[i], float(distances[i])) for i in order]


def retrieve_context(
    topic: str,
    index: VectorIndex,
    embedder: Embedder,
    chunks_by_id: dict[str, Chunk],
    k: int = DEFAULT_K,
) -> ContextBundle:
    """Embed the topic and return its k nearest chunks."""
    if len(index) == 0:
        raise EmptyIndex()
    query = embed_text(topic, embedder)
    neighbors = query_knn(index, query, k)
    pairs = [(chunks_by_id[cid], dist) for cid, dist in neighbors]
    return ContextBundle(topic=topic, chunks=pairs)


def index_to_payload(index: VectorIndex) -> dict:
    """JSON-serializable form for persistence."""
    return {
        "dim": index.dim,
        "entries": [
            {"chunk_id": cid, "vector": index.matrix[i].tolist()}
            for i, cid in enumerate(index.ids)
        ],
    }


def index_from_payload(payload: dict) -> VectorIndex:
    items = [
        (entry["chunk_id"], np.asarray(entry["vector"], dtype=np.float64))
        for entry in payload.get("entries", [])
    ]
    return build_index(items, dim=int(payload["dim"]))
