import pytest

from codequiz.agents.tools import (
    ARITH_EVAL_TOOL,
    RUN_CODE_TOOL,
    UnknownTool,
    run_tool_call,
)
from codequiz.minilang import ResourceLimits


class TestArithEvalTool:
    def test_exact_value(self):
        result = run_tool_call("arith_eval", {"expression": "2+3*4"})
        assert result == {"value": "14", "is_exact": True}

    def test_real_value(self):
        result = run_tool_call("arith_eval", {"expression": "8 / 2"})
        assert result == {"value": "4.0", "is_exact": False}

    def test_division_by_zero_reported_as_data(self):
        result = run_tool_call("arith_eval", {"expression": "1/0"})
        assert result["error"] == "DivisionByZero"
        assert "message" in result

    def test_parse_error_reported_as_data(self):
        result = run_tool_call("arith_eval", {"expression": "2 $ 3"})
        assert result["error"] == "UnexpectedCharacter"

    def test_overflow_reported_as_data(self):
        result = run_tool_call("arith_eval", {"expression": "10.0 ** 400"})
        assert result["error"] == "Overflow"

    def test_missing_argument(self):
        result = run_tool_call("arith_eval", {})
        assert result["error"] == "BadArguments"

    def test_non_string_argument(self):
        result = run_tool_call("arith_eval", {"expression": 5})
        assert result["error"] == "BadArguments"


class TestRunCodeTool:
    def test_ok_program(self):
        result = run_tool_call("run_code", {"source": "x = 2\nprint(x * 3)\n"})
        assert result["status"] == "ok"
        assert result["stdout"] == "6\n"
        assert result["bindings"] == {"x": "2"}
        assert result["error"] is None

    def test_runtime_error_program(self):
        result = run_tool_call("run_code", {"source": "nums = [1, 2]\nnums.remove(4)\n"})
        assert result["status"] == "runtime_error"
        assert result["error"]["kind"] == "ValueError"

    def test_syntax_error_reported_as_data(self):
        result = run_tool_call("run_code", {"source": "x = (\n"})
        assert result["error"] == "InvalidSyntax"

    def test_unsupported_construct_reported_as_data(self):
        result = run_tool_call("run_code", {"source": "import os\n"})
        assert result["error"] == "UnsupportedConstruct"
        assert "import" in result["message"]

    def test_limits_are_honored(self):
        result = run_tool_call(
            "run_code",
            {"source": "i = 0\nwhile True:\n    i = i + 1\n"},
            limits=ResourceLimits(max_steps=50),
        )
        assert result["status"] == "limit_exceeded"
        assert result["error"]["kind"] == "StepLimit"

    def test_missing_argument(self):
        result = run_tool_call("run_code", {})
        assert result["error"] == "BadArguments"


class TestDispatch:
    def test_unknown_tool_raises(self):
        with pytest.raises(UnknownTool):
            run_tool_call("search_web", {"query": "x"})

    def test_declarations_are_well_formed(self):
        for declaration in (ARITH_EVAL_TOOL, RUN_CODE_TOOL):
            assert declaration["parameters"]["type"] == "object"
            assert declaration["parameters"]["additionalProperties"] is False
            for field in declaration["parameters"]["required"]:
                assert field in declaration["parameters"]["properties"]
