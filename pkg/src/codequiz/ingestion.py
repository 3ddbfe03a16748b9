"""Parsing of instructor materials into kind-labeled blocks and chunks.

The materials format is line-oriented plain text:

    OBJECTIVE: <text>      opens a learning-objective block
    QUESTION: <text>       opens a sample-question block; its option lines
                           (``A) ..`` through ``D) ..``), ``ANSWER:`` and
                           ``FEEDBACK:`` lines all attach to that block
    ```                    fences delimit a code-example block
    anything else          attaches to the open block, or becomes `other`

Inside a fenced code block, triple-quote markers toggle docstring state
line by line; a fence closer inside an open docstring is literal text, so
code is never split mid-docstring.
"""

from dataclasses import dataclass

from .errors import CodequizError

OBJECTIVE = "objective"
SAMPLE_QUESTION = "sample_question"
CODE_EXAMPLE = "code_example"
OTHER = "other"

CHUNK_KINDS = (OBJECTIVE, SAMPLE_QUESTION, CODE_EXAMPLE, OTHER)


class IngestionError(CodequizError):
    pass


class EmptyInput(IngestionError):
    def __init__(self):
        super().__init__("no classifiable content")


class UnterminatedFence(IngestionError):
    def __init__(self, line: int, what: str = "code fence"):
        super().__init__(f"{what} opened at line {line} is never closed")
        self.line = line


class InvalidEncoding(IngestionError):
    def __init__(self, detail: str):
        super().__init__(f"materials must be UTF-8: {detail}")


@dataclass(frozen=True)
class Block:
    kind: str
    text: str
    start_line: int  # 1-based, inclusive
    end_line: int

    def lines(self) -> list[str]:
        return self.text.split("\n")


@dataclass(frozen=True)
class SourceDocument:
    doc_id: str
    topic: str
    raw_text: str
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    topic: str
    kind: str
    text: str
    source: tuple[str, int, int]  # (doc_id, start_line, end_line)


def decode_materials(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(str(exc)) from None


def _docstring_scan(line: str, state: str | None) -> str | None:
    """Advance docstring state across one line of code.

    state is the open delimiter (three quotes of one style) or None.
    Markers toggle left to right; mixed styles do not close each other.
    """
    pos = 0
    while True:
        if state is None:
            dq = line.find('"""', pos)
            sq = line.find("'''", pos)
            hits = [h for h in (dq, sq) if h != -1]
            if not hits:
                return None
            first = min(hits)
            state = '"""' if first == dq else "'''"
            pos = first + 3
        else:
            nxt = line.find(state, pos)
            if nxt == -1:
                return state
            state = None
            pos = nxt + 3


class _Builder:
    def __init__(self):
        self.blocks: list[Block] = []
        self.kind: str | None = None
        self.buf: list[str] = []
        self.start = 0

    def open(self, kind: str, line_no: int, line: str) -> None:
        self.close(line_no - 1)
        self.kind = kind
        self.start = line_no
        self.buf = [line]

    def attach(self, line_no: int, line: str) -> None:
        if self.kind is None:
            self.kind = OTHER
            self.start = line_no
        self.buf.append(line)

    def close(self, end_line: int) -> None:
        if self.kind is None:
            return
        self.blocks.append(
            Block(self.kind, "\n".join(self.buf), self.start, end_line)
        )
        self.kind = None
        self.buf = []


def parse_materials(raw: str, doc_id: str, topic: str) -> SourceDocument:
    """Parse raw materials text into an ordered list of labeled blocks."""
    if raw.strip() == "":
        raise EmptyInput()
    lines = raw.split("\n")
    if raw.endswith("\n"):
        lines = lines[:-1]

    builder = _Builder()
    in_code = False
    docstring: str | None = None
    fence_opened_at = 0

    for line_no, line in enumerate(lines, start=1):
        if in_code:
            if docstring is None and line.startswith("```"):
                builder.buf.append(line)
                builder.close(line_no)
                in_code = False
                continue
            docstring = _docstring_scan(line, docstring)
            builder.buf.append(line)
        elif line.startswith("```"):
            builder.open(CODE_EXAMPLE, line_no, line)
            in_code = True
            docstring = None
            fence_opened_at = line_no
        elif line.startswith("OBJECTIVE:"):
            builder.open(OBJECTIVE, line_no, line)
        elif line.startswith("QUESTION:"):
            builder.open(SAMPLE_QUESTION, line_no, line)
        else:
            builder.attach(line_no, line)

    if in_code:
        what = "docstring" if docstring is not None else "code fence"
        raise UnterminatedFence(fence_opened_at, what)
    builder.close(len(lines))

    return SourceDocument(
        doc_id=doc_id, topic=topic, raw_text=raw, blocks=tuple(builder.blocks)
    )


def _chunk_id(doc_id: str, start: int, end: int) -> str:
    return f"{doc_id}:{start:04d}-{end:04d}"


def _interior(code_block: Block) -> list[str]:
    return code_block.lines()[1:-1]


def chunk_document(doc: SourceDocument) -> list[Chunk]:
    """One chunk per non-`other` block, merging a sample question with an
    immediately following code example so they travel together. Chunks
    whose text is blank after trimming are dropped."""
    chunks: list[Chunk] = []
    blocks = doc.blocks
    i = 0
    while i < len(blocks):
        block = blocks[i]
        if block.kind == OTHER:
            i += 1
            continue
        if (
            block.kind == SAMPLE_QUESTION
            and i + 1 < len(blocks)
            and blocks[i + 1].kind == CODE_EXAMPLE
        ):
            code = blocks[i + 1]
            text = "\n".join(block.lines() + _interior(code))
            chunks.append(
                Chunk(
                    chunk_id=_chunk_id(doc.doc_id, block.start_line, code.end_line),
                    topic=doc.topic,
                    kind=SAMPLE_QUESTION,
                    text=text,
                    source=(doc.doc_id, block.start_line, code.end_line),
                )
            )
            i += 2
            continue
        text = "\n".join(_interior(block)) if block.kind == CODE_EXAMPLE else block.text
        if text.strip():
            chunks.append(
                Chunk(
                    chunk_id=_chunk_id(doc.doc_id, block.start_line, block.end_line),
                    topic=doc.topic,
                    kind=block.kind,
                    text=text,
                    source=(doc.doc_id, block.start_line, block.end_line),
                )
            )
        i += 1
    return chunks
