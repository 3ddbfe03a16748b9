"""HTTP surface for ingestion, generation, review, and reporting.

All state lives in the pipeline objects created at startup: the
corpus file and the review event log under one data directory. The
multipart upload is parsed with the stdlib email machinery, so the
service has no extra form-parsing dependency.

When SME tokens are configured, submitting a judgment requires a
bearer token and the body's sme_id must be the token's owner; with no
tokens configured (local development) the body is trusted.
"""

from __future__ import annotations

import email.parser
import email.policy
import threading
from contextlib import asynccontextmanager
from pathlib import PurePosixPath

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from codequiz.agents.client import ClientError
from codequiz.agents.orchestrator import (
    InvalidCode,
    MissingToolUse,
    ToolLoopExceeded,
)
from codequiz.agents.schemas import SchemaViolation
from codequiz.agents.tools import UnknownTool
from codequiz.analytics import build_report
from codequiz.config import AppConfig
from codequiz.errors import CodequizError
from codequiz.ingestion import decode_materials
from codequiz.pipeline import CorpusStore, QuestionPipeline, make_clock
from codequiz.retrieval import EmptyIndex, ProviderUnavailable
from codequiz.service.store import (
    DuplicateQuestion,
    ReviewStore,
    StorageFailure,
    UnknownQuestion,
)

MAX_GENERATE_COUNT = 20


class BadUpload(CodequizError):
    """The materials upload could not be interpreted."""


class AuthFailure(CodequizError):
    """Missing or unusable credentials."""


class Forbidden(CodequizError):
    """Valid credentials for the wrong SME."""


# first matching type wins
_STATUS_BY_TYPE: list[tuple[type, int]] = [
    (AuthFailure, 401),
    (Forbidden, 403),
    (UnknownQuestion, 404),
    (DuplicateQuestion, 409),
    (EmptyIndex, 409),
    (StorageFailure, 500),
    (ProviderUnavailable, 502),
    (ClientError, 502),
    (ToolLoopExceeded, 502),
    (InvalidCode, 502),
    (MissingToolUse, 502),
    (UnknownTool, 502),
    (SchemaViolation, 502),
    (CodequizError, 400),
]


class GenerateRequest(BaseModel):
    topic: str
    count: int = 1


class JudgmentRequest(BaseModel):
    sme_id: str
    dimension: str
    verdict: str
    rationale: str | None = None


def parse_multipart(content_type: str, body: bytes) -> tuple[list, dict]:
    """-> ([(filename, bytes)], {field_name: text})"""
    if "multipart/form-data" not in content_type:
        raise BadUpload("expected a multipart/form-data upload")
    head = f"Content-Type: {content_type}\r\nMIME-Version: 1.0\r\n\r\n"
    message = email.parser.BytesParser(policy=email.policy.default).parsebytes(
        head.encode("utf-8") + body
    )
    if not message.is_multipart():
        raise BadUpload("multipart body could not be parsed")
    files: list[tuple[str, bytes]] = []
    fields: dict[str, str] = {}
    for part in message.iter_parts():
        name = part.get_param("name", header="content-disposition")
        filename = part.get_filename()
        payload = part.get_payload(decode=True) or b""
        if filename:
            files.append((filename, payload))
        elif name:
            fields[str(name)] = payload.decode("utf-8", errors="replace")
    return files, fields


def create_app(config: AppConfig) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        data_dir = config.data_path()
        review_store = ReviewStore(
            data_dir / "events.jsonl", clock=make_clock(config)
        )
        try:
            corpus = CorpusStore(data_dir / "corpus.json")
            app.state.pipeline = QuestionPipeline(config, corpus, review_store)
            app.state.write_lock = threading.Lock()
            yield
        finally:
            review_store.close()

    app = FastAPI(title="codequiz", lifespan=lifespan)

    @app.exception_handler(CodequizError)
    async def domain_error(request: Request, exc: CodequizError):
        for cls, status in _STATUS_BY_TYPE:
            if isinstance(exc, cls):
                return JSONResponse(
                    {"error": type(exc).__name__, "message": str(exc)},
                    status_code=status,
                )
        raise exc  # unreachable; CodequizError is the last row

    def pipeline() -> QuestionPipeline:
        return app.state.pipeline

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "items": len(pipeline().review_store),
            "chunks": len(pipeline().corpus),
        }

    @app.post("/materials")
    async def post_materials(request: Request):
        body = await request.body()
        files, fields = parse_multipart(
            request.headers.get("content-type", ""), body
        )
        if not files:
            raise BadUpload("upload contained no files")
        topic_field = fields.get("topic")
        documents = 0
        added = 0
        with app.state.write_lock:
            for filename, data in files:
                raw = decode_materials(data)
                doc_id = PurePosixPath(filename).stem or filename
                topic = topic_field or doc_id
                added += len(pipeline().ingest_text(raw, doc_id, topic))
                documents += 1
        return {
            "documents": documents,
            "chunks_added": added,
            "total_chunks": len(pipeline().corpus),
        }

    @app.post("/generate")
    def generate(body: GenerateRequest):
        topic = body.topic.strip()
        if not topic:
            raise BadUpload("topic must not be empty")
        if not 1 <= body.count <= MAX_GENERATE_COUNT:
            raise BadUpload(f"count must be between 1 and {MAX_GENERATE_COUNT}")
        with app.state.write_lock:
            items = pipeline().generate_batch(topic, body.count)
        return {"items": items}

    @app.get("/items")
    def list_items(
        status: str | None = None,
        topic: str | None = None,
        sme_id: str | None = None,
    ):
        rows = pipeline().review_store.list_items(
            status=status, topic=topic, sme_id=sme_id
        )
        return {"items": rows}

    @app.get("/items/{question_id}")
    def get_item(question_id: str):
        return pipeline().review_store.get_item(question_id)

    def _authorized_sme(request: Request, claimed_sme: str) -> None:
        tokens = config.sme_tokens
        if not tokens:
            return
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise AuthFailure("judgments require a bearer token")
        token = header[len("Bearer ") :].strip()
        owner = tokens.get(token)
        if owner is None:
            raise AuthFailure("unknown token")
        if owner != claimed_sme:
            raise Forbidden(f"token belongs to {owner!r}, not {claimed_sme!r}")

    @app.post("/items/{question_id}/judgments")
    def submit_judgment(question_id: str, body: JudgmentRequest, request: Request):
        _authorized_sme(request, body.sme_id)
        with app.state.write_lock:
            item = pipeline().review_store.submit_judgment(
                question_id=question_id,
                sme_id=body.sme_id,
                dimension=body.dimension,
                verdict=body.verdict,
                rationale=body.rationale,
            )
        return item

    @app.get("/report")
    def report():
        store = pipeline().review_store
        return build_report(
            store.judgment_pairs(), generated_at=pipeline().clock()
        ).to_payload()

    return app
