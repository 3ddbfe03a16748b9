"""Generator and validator agents, their schemas, tools and chat clients."""

from codequiz.agents.client import (
    ChatClient,
    ChatResponse,
    ClientError,
    HttpChatClient,
    ScriptedChatClient,
    ToolCall,
)
from codequiz.agents.mock import OfflineMockChatClient
from codequiz.agents.orchestrator import (
    DimensionFinding,
    GeneratedQuestion,
    GenerationResult,
    InvalidCode,
    MissingToolUse,
    Option,
    ToolLoopExceeded,
    ValidationReport,
    content_hash_id,
    generate_question,
    validate_question,
)
from codequiz.agents.schemas import (
    QuestionDraft,
    ReportDraft,
    SchemaViolation,
    canonical_json,
    load_schema_text,
    parse_agent_output,
)
from codequiz.agents.tools import (
    ARITH_EVAL_TOOL,
    RUN_CODE_TOOL,
    UnknownTool,
    run_tool_call,
)

__all__ = [
    "ARITH_EVAL_TOOL",
    "ChatClient",
    "ChatResponse",
    "ClientError",
    "DimensionFinding",
    "GeneratedQuestion",
    "GenerationResult",
    "HttpChatClient",
    "InvalidCode",
    "MissingToolUse",
    "OfflineMockChatClient",
    "Option",
    "QuestionDraft",
    "ReportDraft",
    "RUN_CODE_TOOL",
    "SchemaViolation",
    "ScriptedChatClient",
    "ToolCall",
    "ToolLoopExceeded",
    "UnknownTool",
    "ValidationReport",
    "canonical_json",
    "content_hash_id",
    "generate_question",
    "load_schema_text",
    "parse_agent_output",
    "run_tool_call",
    "validate_question",
]
