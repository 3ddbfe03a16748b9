"""Wires ingestion, retrieval, the two agents, and the review store.

CorpusStore keeps ingested chunks and their embedding index in one
JSON file, rewritten atomically on change. QuestionPipeline drives the
generate-validate-store loop for a batch.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from codequiz import retrieval
from codequiz.agents.client import ChatClient
from codequiz.agents.mock import OfflineMockChatClient
from codequiz.agents.orchestrator import (
    content_hash_id,
    default_clock,
    generate_question,
    validate_question,
)
from codequiz.config import (
    MODE_OFFLINE,
    OFFLINE_CLOCK_VALUE,
    AppConfig,
    chat_api_key,
    embedding_api_key,
)
from codequiz.ingestion import Chunk, SourceDocument, chunk_document, parse_materials
from codequiz.minilang import ResourceLimits
from codequiz.service.store import ReviewStore


class CorpusStore:
    """Ingested chunks plus their vector index, persisted as one file."""

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._chunks: dict[str, Chunk] = {}
        self._index = retrieval.build_index([])
        if self._path.exists():
            self._load()

    def _load(self) -> None:
        payload = json.loads(self._path.read_text(encoding="utf-8"))
        self._chunks = {
            entry["chunk_id"]: Chunk(
                chunk_id=entry["chunk_id"],
                topic=entry["topic"],
                kind=entry["kind"],
                text=entry["text"],
                source=tuple(entry["source"]),
            )
            for entry in payload["chunks"]
        }
        self._index = retrieval.index_from_payload(payload["index"])

    def save(self) -> None:
        payload = {
            "chunks": [
                {
                    "chunk_id": chunk.chunk_id,
                    "topic": chunk.topic,
                    "kind": chunk.kind,
                    "text": chunk.text,
                    "source": list(chunk.source),
                }
                for chunk in self._chunks.values()
            ],
            "index": retrieval.index_to_payload(self._index),
        }
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self._path.with_suffix(".tmp")
        with open(tmp, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, sort_keys=True)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, self._path)

    def add_document(self, doc: SourceDocument, embedder: retrieval.Embedder) -> list[Chunk]:
        chunks = chunk_document(doc)
        fresh = [c for c in chunks if c.chunk_id not in self._chunks]
        if fresh:
            vectors = embedder.embed([c.text for c in fresh])
            items = [
                (cid, self._index.matrix[i])
                for i, cid in enumerate(self._index.ids)
            ]
            items.extend(
                (chunk.chunk_id, vector) for chunk, vector in zip(fresh, vectors)
            )
            self._index = retrieval.build_index(items, dim=embedder.dim)
            for chunk in fresh:
                self._chunks[chunk.chunk_id] = chunk
            self.save()
        return fresh

    @property
    def index(self) -> retrieval.VectorIndex:
        return self._index

    @property
    def chunks_by_id(self) -> dict[str, Chunk]:
        return dict(self._chunks)

    def __len__(self) -> int:
        return len(self._chunks)


def make_embedder(config: AppConfig) -> retrieval.Embedder:
    if config.mode == MODE_OFFLINE:
        return retrieval.HashingEmbedder(dim=config.embedding_dim)
    return retrieval.RemoteEmbedder(
        endpoint=config.embedding_endpoint,
        model=config.embedding_model,
        dim=config.embedding_dim,
        api_key=embedding_api_key(config),
    )


def make_chat_clients(config: AppConfig) -> tuple[ChatClient, ChatClient]:
    """(generator client, validator client) for the configured mode."""
    if config.mode == MODE_OFFLINE:
        mock = OfflineMockChatClient()
        return mock, mock
    from codequiz.agents.client import HttpChatClient

    key = chat_api_key(config)
    generator = HttpChatClient(
        endpoint=config.chat_endpoint, model=config.generator_model, api_key=key
    )
    validator = HttpChatClient(
        endpoint=config.chat_endpoint, model=config.validator_model, api_key=key
    )
    return generator, validator


def make_clock(config: AppConfig):
    if config.mode == MODE_OFFLINE:
        return lambda: OFFLINE_CLOCK_VALUE
    return default_clock


def sandbox_limits(config: AppConfig) -> ResourceLimits:
    return ResourceLimits(
        max_steps=config.max_steps,
        max_output_bytes=config.max_output_bytes,
        max_collection_len=config.max_collection_len,
    )


class QuestionPipeline:
    """Retrieve context, generate, validate, and store review items."""

    def __init__(
        self,
        config: AppConfig,
        corpus: CorpusStore,
        review_store: ReviewStore,
        embedder: retrieval.Embedder | None = None,
        generator_client: ChatClient | None = None,
        validator_client: ChatClient | None = None,
    ):
        self.config = config
        self.corpus = corpus
        self.review_store = review_store
        self.embedder = embedder or make_embedder(config)
        if generator_client is None or validator_client is None:
            made_generator, made_validator = make_chat_clients(config)
            generator_client = generator_client or made_generator
            validator_client = validator_client or made_validator
        self.generator_client = generator_client
        self.validator_client = validator_client
        self.clock = make_clock(config)
        self.limits = sandbox_limits(config)

    def ingest_text(self, raw: str, doc_id: str, topic: str) -> list[Chunk]:
        doc = parse_materials(raw, doc_id=doc_id, topic=topic)
        return self.corpus.add_document(doc, self.embedder)

    def retrieve(self, topic: str) -> list[Chunk]:
        bundle = retrieval.retrieve_context(
            topic,
            self.corpus.index,
            self.embedder,
            self.corpus.chunks_by_id,
            k=self.config.retrieval_k,
        )
        return [chunk for chunk, _ in bundle.chunks]

    def generate_batch(self, topic: str, count: int) -> list[dict]:
        if count <= 0:
            raise ValueError("count must be positive")
        items = []
        for ordinal in range(1, count + 1):
            context = self.retrieve(topic)
            batch_note = (
                f"This is item {ordinal} of {count} in the batch; make it "
                "distinct from the other items."
            )
            result = generate_question(
                topic,
                context,
                self.generator_client,
                id_factory=content_hash_id,
                clock=self.clock,
                max_tool_rounds=self.config.max_tool_rounds,
                max_repairs=self.config.max_repairs,
                limits=self.limits,
                batch_note=batch_note,
            )
            report = validate_question(
                result.question,
                context,
                self.validator_client,
                max_tool_rounds=self.config.max_tool_rounds,
                max_repairs=self.config.max_repairs,
                limits=self.limits,
            )
            items.append(
                self.review_store.store_item(
                    result.question.to_payload(), report.to_payload()
                )
            )
        return items
