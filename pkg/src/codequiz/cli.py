"""Command line front end.

Exit codes: 0 on success, 1 on a domain error (bad input, unknown id,
provider failure), 2 on usage errors. --json switches machine-readable
output on for every subcommand that prints data.
"""

from __future__ import annotations

import functools
import json
from pathlib import Path

import click

from codequiz import arith
from codequiz.agents.orchestrator import question_from_payload, validate_question
from codequiz.agents.tools import run_tool_call
from codequiz.analytics import (
    CATEGORIES,
    build_report,
    render_percent,
)
from codequiz.config import AppConfig, load_config
from codequiz.dimensions import DIMENSIONS
from codequiz.errors import CodequizError
from codequiz.ingestion import decode_materials, parse_materials
from codequiz.pipeline import (
    CorpusStore,
    QuestionPipeline,
    make_clock,
    make_embedder,
)
from codequiz.service.store import ReviewStore


def domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CodequizError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def emit_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML config file.",
)
@click.option("--data-dir", default=None, help="Where corpus and review data live.")
@click.option("--json", "json_output", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, config_path, data_dir, json_output):
    """Generate, validate, review, and analyze code-comprehension questions."""
    try:
        config = load_config(config_path, data_dir=data_dir)
    except CodequizError as exc:
        raise click.ClickException(str(exc)) from exc
    ctx.obj = {"config": config, "json": json_output}


def _config(ctx) -> AppConfig:
    return ctx.obj["config"]


def _json_mode(ctx) -> bool:
    return ctx.obj["json"]


def _corpus(config: AppConfig) -> CorpusStore:
    return CorpusStore(config.data_path() / "corpus.json")


def _open_pipeline(config: AppConfig) -> QuestionPipeline:
    review_store = ReviewStore(
        config.data_path() / "events.jsonl", clock=make_clock(config)
    )
    return QuestionPipeline(config, _corpus(config), review_store)


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--topic", default=None, help="Topic for all files; defaults to each file's stem.")
@click.pass_context
@domain_errors
def ingest(ctx, paths, topic):
    """Parse course materials and add their chunks to the corpus."""
    config = _config(ctx)
    corpus = _corpus(config)
    embedder = make_embedder(config)
    summary = []
    for path in paths:
        path = Path(path)
        raw = decode_materials(path.read_bytes())
        doc = parse_materials(raw, doc_id=path.stem, topic=topic or path.stem)
        added = corpus.add_document(doc, embedder)
        summary.append({"doc_id": doc.doc_id, "chunks_added": len(added)})
    payload = {"documents": summary, "total_chunks": len(corpus)}
    if _json_mode(ctx):
        emit_json(payload)
    else:
        for row in summary:
            click.echo(f"{row['doc_id']}: {row['chunks_added']} chunks added")
        click.echo(f"corpus now holds {len(corpus)} chunks")


@main.command()
@click.option("--topic", required=True)
@click.option("--count", default=1, show_default=True)
@click.pass_context
@domain_errors
def generate(ctx, topic, count):
    """Generate, validate, and store a batch of questions."""
    if count < 1:
        raise click.BadParameter("count must be at least 1", param_hint="--count")
    config = _config(ctx)
    pipeline = _open_pipeline(config)
    try:
        items = pipeline.generate_batch(topic, count)
    finally:
        pipeline.review_store.close()
    if _json_mode(ctx):
        emit_json({"items": items})
    else:
        for item in items:
            question = item["question"]
            click.echo(
                f"stored {question['question_id']}  [{item['status']}]  "
                f"{question['stem']}"
            )


@main.command()
@click.argument("question_id")
@click.pass_context
@domain_errors
def validate(ctx, question_id):
    """Re-run the validator for one stored question."""
    config = _config(ctx)
    pipeline = _open_pipeline(config)
    try:
        item = pipeline.review_store.get_item(question_id)
        question = question_from_payload(item["question"])
        context = pipeline.retrieve(question.topic)
        report = validate_question(
            question,
            context,
            pipeline.validator_client,
            max_tool_rounds=config.max_tool_rounds,
            max_repairs=config.max_repairs,
            limits=pipeline.limits,
        )
    finally:
        pipeline.review_store.close()
    payload = report.to_payload()
    if _json_mode(ctx):
        emit_json(payload)
    else:
        for dim in DIMENSIONS:
            finding = payload["dimensions"][dim]
            click.echo(f"{dim}: {finding['classification']}  ({finding['rationale']})")
        if payload["inconsistent"]:
            click.echo("warning: verdict contradicts executed output")


@main.command()
@click.option("--host", default=None, help="Bind address; defaults to config.")
@click.option("--port", default=None, type=int, help="Port; defaults to config.")
@click.pass_context
@domain_errors
def serve(ctx, host, port):
    """Run the review service."""
    import uvicorn

    from codequiz.service.app import create_app

    config = _config(ctx)
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


@main.command()
@click.pass_context
@domain_errors
def report(ctx):
    """Print the agreement report over all stored judgments."""
    config = _config(ctx)
    store = ReviewStore(config.data_path() / "events.jsonl", clock=make_clock(config))
    try:
        quality = build_report(store.judgment_pairs(), generated_at=make_clock(config)())
    finally:
        store.close()
    if _json_mode(ctx):
        emit_json(quality.to_payload())
        return
    totals = quality.totals
    click.echo(
        f"questions: {totals['questions']}  pairs: {totals['pairs']}  "
        f"disagreement rationales: {totals['disagreement_rationales']}"
    )
    header = (
        f"{'dimension':<28}{'n':>6}" + "".join(f"{c:>14}" for c in CATEGORIES) + f"{'agreement':>16}"
    )
    click.echo(header)
    for dim in DIMENSIONS:
        rates = quality.rates[dim]
        agreement = quality.agreement[dim]
        cells = "".join(
            f"{render_percent(rates.rates[c]) + '%':>14}" for c in CATEGORIES
        )
        agree_cell = (
            f"{render_percent(agreement.mean)}% ± {agreement.sd * 100:.1f}"
        )
        click.echo(f"{dim:<28}{rates.n:>6}{cells}{agree_cell:>16}")


@main.group()
def tool():
    """Run the deterministic tools directly."""


@tool.command("arith")
@click.argument("expression")
@click.pass_context
@domain_errors
def tool_arith(ctx, expression):
    """Evaluate one arithmetic expression."""
    if _json_mode(ctx):
        emit_json(run_tool_call("arith_eval", {"expression": expression}))
        return
    value = arith.evaluate_expression(expression)
    if isinstance(value, float) and value.is_integer():
        click.echo(str(int(value)))
    else:
        click.echo(arith.render_value(value))


@tool.command("run")
@click.argument("source", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.pass_context
@domain_errors
def tool_run(ctx, source):
    """Execute a sandboxed program from a file ('-' for stdin)."""
    if source == "-":
        text = click.get_text_stream("stdin").read()
    else:
        text = decode_materials(Path(source).read_bytes())
    result = run_tool_call("run_code", {"source": text})
    if _json_mode(ctx):
        emit_json(result)
        return
    if "status" not in result:
        raise click.ClickException(f"{result['error']}: {result['message']}")
    click.echo(f"status: {result['status']}")
    if result["stdout"]:
        click.echo("--- stdout ---")
        click.echo(result["stdout"], nl=False)
        if not result["stdout"].endswith("\n"):
            click.echo()
    if result["bindings"]:
        click.echo("--- bindings ---")
        for name, value in sorted(result["bindings"].items()):
            click.echo(f"{name} = {value}")
    if result["error"] is not None:
        error = result["error"]
        line = f" (line {error['line']})" if error.get("line") else ""
        click.echo(f"error: {error['kind']}: {error['message']}{line}")


if __name__ == "__main__":
    main()
