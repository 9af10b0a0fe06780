"""Command-line interface.

  pcg parse|fmt|tokens       language tooling
  pcg eval                   evaluate a graph to an OBJ mesh (with --bench)
  pcg extract                part hierarchies -> graphs (+ meta sidecars)
  pcg transpile|report       backend emission and compactness reports
  pcg generate|edit          LLM-backed generation and editing
  pcg bench-compile          compile-rate over a directory of responses
  pcg serve                  live editing service
"""

from __future__ import annotations

import json
import os
import statistics
import sys
import time

import click

from .extract import ExtractionConfig, extract_file, rotation_from_axes
from .kernel.errors import EvalError
from .kernel.evaluator import EvalSession, evaluate
from .kernel.mesh import export_obj
from .lang.jsonio import graph_to_json
from .lang.parser import parse_pcg
from .lang.printer import print_pcg
from .lang.tokens import count_tokens
from .llm.client import LlmEndpointConfig, LlmError, call_llm
from .llm.corpus import load_corpus_file
from .llm.metrics import compile_rate, response_compiles
from .llm.prompts import build_edit_prompt, build_generation_prompt, extract_graph
from .llm.bm25 import build_index, retrieve
from .transpile import BACKENDS, compactness_report, emit, write_report


def _fail(message: str, code: int = 1):
    click.echo(message, err=True)
    sys.exit(code)


def _load_graph(path: str):
    with open(path, "r") as f:
        source = f.read()
    result = parse_pcg(source)
    if not result.ok:
        for d in result.diagnostics:
            click.echo(f"{path}:{d}", err=True)
        sys.exit(1)
    return result.graph


def _parse_value(text: str):
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        _fail(f"cannot parse value {text!r}")


def _parse_sets(pairs) -> dict:
    bindings = {}
    for pair in pairs:
        if "=" not in pair:
            _fail(f"--set expects name=value, got {pair!r}")
        name, raw = pair.split("=", 1)
        bindings[name.strip()] = _parse_value(raw.strip())
    return bindings


@click.group()
def main():
    """Procedural compact graph toolkit."""


@main.command("parse")
@click.argument("file", type=click.Path(exists=True))
@click.option("--json", "as_json", is_flag=True, help="print the graph as JSON")
def parse_cmd(file, as_json):
    """Parse and validate a graph; print diagnostics or a summary."""
    with open(file, "r") as f:
        result = parse_pcg(f.read())
    for d in result.diagnostics:
        click.echo(f"{file}:{d}", err=True)
    if not result.ok:
        sys.exit(1)
    if as_json:
        click.echo(graph_to_json(result.graph), nl=False)
    else:
        g = result.graph
        click.echo(f"ok: {len(g.params)} params, {len(g.nodes)} nodes, "
                   f"output = {g.output}")


@main.command("fmt")
@click.argument("file", type=click.Path(exists=True))
@click.option("--write", is_flag=True, help="rewrite the file in place")
def fmt_cmd(file, write):
    """Canonically format a graph file."""
    graph = _load_graph(file)
    text = print_pcg(graph)
    if write:
        with open(file, "w") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


@main.command("tokens")
@click.argument("file", type=click.Path(exists=True))
def tokens_cmd(file):
    """Count tokens of a text file under the toolkit tokenizer."""
    with open(file, "r") as f:
        click.echo(count_tokens(f.read()))


@main.command("eval")
@click.argument("file", type=click.Path(exists=True))
@click.option("--set", "sets", multiple=True, metavar="NAME=VALUE",
              help="override a parameter (repeatable)")
@click.option("--out", type=click.Path(), default=None, help="write mesh OBJ here")
@click.option("--bench", is_flag=True,
              help="print evaluate and reevaluate wall-times")
def eval_cmd(file, sets, out, bench):
    """Evaluate a graph to a mesh."""
    graph = _load_graph(file)
    bindings = _parse_sets(sets)
    try:
        mesh = evaluate(graph, bindings)
    except EvalError as e:
        _fail(str(e), 2)
    click.echo(f"{mesh.num_vertices} vertices, {mesh.num_triangles} triangles")
    if out:
        with open(out, "w") as f:
            f.write(export_obj(mesh))
        click.echo(f"wrote {out}")
    if bench:
        session = EvalSession(graph, bindings, check=False)
        t0 = time.perf_counter()
        session.evaluate()
        full_ms = (time.perf_counter() - t0) * 1e3
        floats = [p for p in graph.params if p.type.value == "float"]
        times = []
        for _ in range(100):
            for p in floats[:4] or []:
                value = p.default * 1.01 if p.range is None else (
                    min(p.range[1], max(p.range[0], p.default * 1.01)))
                t0 = time.perf_counter()
                session.reevaluate({p.name: value})
                times.append((time.perf_counter() - t0) * 1e3)
        click.echo(f"evaluate: {full_ms:.3f} ms")
        if times:
            click.echo(f"reevaluate: median {statistics.median(times):.3f} ms "
                       f"over {len(times)} deltas")


@main.command("extract")
@click.argument("source", type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="output directory for .pcg and .meta.json files")
@click.option("--coord-rot", default="none",
              help="axis permutation applied on ingest (e.g. xyz, x-zy) or none")
@click.option("--no-merge", is_flag=True, help="do not merge same-label siblings")
def extract_cmd(source, out_dir, coord_rot, no_merge):
    """Extract graphs from part-hierarchy JSON documents."""
    rotation = None if coord_rot == "none" else rotation_from_axes(coord_rot)
    kwargs = {"merge_same_label": not no_merge}
    if rotation is not None:
        kwargs["coord_rotation"] = rotation
    config = ExtractionConfig(**kwargs)
    if os.path.isdir(source):
        inputs = sorted(
            os.path.join(source, n) for n in os.listdir(source)
            if n.endswith(".json"))
    else:
        inputs = [source]
    if not inputs:
        _fail(f"no .json documents under {source}")
    for path in inputs:
        pcg_path, _ = extract_file(path, out_dir, config)
        click.echo(f"{path} -> {pcg_path}")


@main.command("transpile")
@click.argument("file", type=click.Path(exists=True))
@click.option("--backend", type=click.Choice(sorted(BACKENDS)), required=True)
@click.option("--out", type=click.Path(), default=None)
def transpile_cmd(file, backend, out):
    """Emit a graph in an external representation."""
    graph = _load_graph(file)
    text = emit(graph, backend)
    if out:
        with open(out, "w") as f:
            f.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("report")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_csv", type=click.Path(), default=None,
              help="CSV path (default: <dir>/report.csv)")
@click.option("--figures/--no-figures", default=True,
              help="also render comparison figures next to the CSV")
def report_cmd(directory, out_csv, figures):
    """Compactness report (CSV + figures) over a directory of .pcg files."""
    files = sorted(n for n in os.listdir(directory) if n.endswith(".pcg"))
    if not files:
        _fail(f"no .pcg files under {directory}")
    reports = []
    for name in files:
        graph = _load_graph(os.path.join(directory, name))
        reports.append(compactness_report(graph, os.path.splitext(name)[0]))
    out_csv = out_csv or os.path.join(directory, "report.csv")
    paths = write_report(reports, out_csv, figures=figures)
    for r in reports:
        ratios = ", ".join(f"{k} x{v:.2f}" for k, v in sorted(r.ratios.items()))
        click.echo(f"{r.name}: pcg {r.tokens['pcg']} tokens ({ratios})")
    for p in paths:
        click.echo(f"wrote {p}")


def _endpoint_options(fn):
    fn = click.option("--endpoint", default="https://api.openai.com/v1",
                      help="chat-completions base URL")(fn)
    fn = click.option("--model", default="gpt-4o")(fn)
    fn = click.option("--replay-dir", default="fixtures/llm",
                      help="record/replay fixture directory")(fn)
    fn = click.option("--replay", is_flag=True,
                      help="offline: serve recorded responses only")(fn)
    return fn


def _config(endpoint, model, replay_dir, replay) -> LlmEndpointConfig:
    return LlmEndpointConfig(base_url=endpoint, model=model,
                             replay_dir=replay_dir, replay=replay)


@main.command("generate")
@click.argument("instruction")
@click.option("--k", default=20, help="in-context examples to retrieve")
@click.option("--corpus", type=click.Path(exists=True), default=None,
              help="instruction-graph JSONL for retrieval")
@click.option("--out", type=click.Path(), default=None, help="write the graph here")
@_endpoint_options
def generate_cmd(instruction, k, corpus, out, endpoint, model, replay_dir, replay):
    """Generate a graph from a natural-language instruction."""
    examples = []
    if corpus:
        pairs = load_corpus_file(corpus)
        examples = retrieve(build_index(pairs), instruction, k)
    prompt = build_generation_prompt(instruction, examples)
    click.echo(f"prompt tokens ~{prompt.token_estimate}", err=True)
    try:
        raw = call_llm(_config(endpoint, model, replay_dir, replay), prompt.text)
    except LlmError as e:
        _fail(f"llm call failed: {e}", 2)
    result = extract_graph(raw)
    if not result.ok:
        for d in result.diagnostics:
            click.echo(str(d), err=True)
        click.echo("--- raw response ---", err=True)
        click.echo(raw, err=True)
        sys.exit(1)
    text = print_pcg(result.graph)
    if out:
        with open(out, "w") as f:
            f.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("edit")
@click.argument("file", type=click.Path(exists=True))
@click.argument("instruction")
@click.option("--out", type=click.Path(), default=None,
              help="write the revised graph here (default: stdout)")
@_endpoint_options
def edit_cmd(file, instruction, out, endpoint, model, replay_dir, replay):
    """Apply a text edit to a graph via the LLM."""
    graph = _load_graph(file)
    prompt = build_edit_prompt(graph, instruction)
    try:
        raw = call_llm(_config(endpoint, model, replay_dir, replay), prompt)
    except LlmError as e:
        _fail(f"llm call failed: {e}", 2)
    result = extract_graph(raw)
    if not result.ok:
        for d in result.diagnostics:
            click.echo(str(d), err=True)
        sys.exit(1)
    text = print_pcg(result.graph)
    if out:
        with open(out, "w") as f:
            f.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@main.command("bench-compile")
@click.argument("responses_dir", type=click.Path(exists=True, file_okay=False))
def bench_compile_cmd(responses_dir):
    """Compile rate over a directory of recorded response .txt files."""
    names = sorted(n for n in os.listdir(responses_dir) if n.endswith(".txt"))
    if not names:
        _fail(f"no .txt responses under {responses_dir}")
    responses = []
    for name in names:
        with open(os.path.join(responses_dir, name)) as f:
            responses.append(f.read())
    rate = compile_rate(responses)
    for name, text in zip(names, responses):
        status = "ok" if response_compiles(text) else "FAIL"
        click.echo(f"{status}  {name}")
    click.echo(f"compile rate: {rate:.3f} ({len(responses)} responses)")


@main.command("serve")
@click.option("--port", default=8787)
@click.option("--host", default="127.0.0.1")
@click.option("--data-dir", type=click.Path(), default=None,
              help="persist session event logs here")
@click.option("--corpus", type=click.Path(exists=True), default=None)
@_endpoint_options
def serve_cmd(port, host, data_dir, corpus, endpoint, model, replay_dir, replay):
    """Run the live editing service."""
    import uvicorn

    from .service import SessionManager, create_app

    pairs = load_corpus_file(corpus) if corpus else None
    manager = SessionManager(
        data_dir=data_dir,
        llm_config=_config(endpoint, model, replay_dir, replay),
        corpus=pairs,
    )
    uvicorn.run(create_app(manager), host=host, port=port)


if __name__ == "__main__":
    main()
