"""Command line client over the service layer.

Every data-producing subcommand prints canonical JSON, byte-identical to
what the HTTP server returns for the same request, so scripts can treat
the two transports interchangeably. Logging level comes from CYCLAB_LOG."""

import json
import logging
import os
import sys

import click

from . import service, suite
from .errors import CyclabError
from .foundation import canonical_json


def _setup_logging():
    level = os.environ.get("CYCLAB_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _emit(payload):
    click.echo(canonical_json(payload), nl=False)


def _read_json(path):
    """Read a JSON document from a path, or from stdin when path is '-'."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise click.UsageError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"{path}: not valid JSON ({exc})")


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CyclabError as exc:
        raise click.ClickException(f"{exc.code}: {exc}")
    except ValueError as exc:
        raise click.UsageError(str(exc))


@click.group()
@click.option("--rng", type=int, default=None, help="seed for every random draw")
@click.pass_context
def main(ctx, rng):
    """Workbench for words, quivers, chains of ideals and seeds."""
    _setup_logging()
    ctx.obj = {"rng": rng}


def _rng_of(ctx, fallback=42):
    value = ctx.obj.get("rng") if ctx.obj else None
    return fallback if value is None else value


# -- coxeter


@main.group()
def coxeter():
    """Reduced words and group elements."""


@coxeter.command("reduce")
@click.argument("graph")
@click.argument("word")
def coxeter_reduce(graph, word):
    _emit(_run(service.coxeter_reduce, graph, word))


@coxeter.command("words")
@click.argument("graph")
@click.argument("length", type=int)
def coxeter_words(graph, length):
    _emit(_run(service.coxeter_words, graph, length))


@coxeter.command("rewrites")
@click.argument("graph")
@click.argument("word")
def coxeter_rewrites(graph, word):
    _emit(_run(service.coxeter_rewrites, graph, word))


@coxeter.command("longest")
@click.argument("graph")
def coxeter_longest(graph):
    _emit(_run(service.coxeter_longest, graph))


# -- quivers


@main.command("word2quiver")
@click.argument("graph")
@click.argument("word")
@click.option("--freeze-last/--no-freeze-last", default=True)
@click.option("--underline", is_flag=True, default=False)
def word2quiver_cmd(graph, word, freeze_last, underline):
    """Ladder quiver of a reduced word."""
    _emit(_run(service.quiver_from_word, graph, word, freeze_last, underline))


@main.group()
def quiver():
    """Operations on quiver JSON documents."""


@quiver.command("mutate")
@click.argument("vertex")
@click.option("--quiver", "path", default="-", help="quiver JSON file or -")
def quiver_mutate(vertex, path):
    _emit(_run(service.quiver_mutate, _read_json(path), vertex))


@quiver.command("matrix")
@click.option("--quiver", "path", default="-", help="quiver JSON file or -")
def quiver_matrix(path):
    _emit(_run(service.quiver_matrix, _read_json(path)))


# -- preprojective algebra


@main.group()
def preproj():
    """Truncated preprojective algebras and their ideals."""


@preproj.command("dims")
@click.argument("graph")
@click.argument("n", type=int)
def preproj_dims(graph, n):
    _emit(_run(service.preproj_dims, graph, n))


@preproj.command("chain")
@click.argument("graph")
@click.argument("word")
@click.argument("n", type=int)
def preproj_chain(graph, word, n):
    _emit(_run(service.preproj_chain, graph, word, n))


@preproj.command("endquiver")
@click.argument("graph")
@click.argument("word")
@click.option("--truncation", type=int, default=None)
def preproj_endquiver(graph, word, truncation):
    _emit(_run(service.preproj_end_quiver, graph, word, truncation))


@preproj.command("exchange")
@click.argument("graph")
@click.argument("word")
@click.argument("index", type=int)
@click.option("--truncation", type=int, default=None)
def preproj_exchange(graph, word, index, truncation):
    _emit(_run(service.preproj_exchange, graph, word, index, truncation))


# -- seeds


@main.group()
def cluster():
    """Seeds, mutation, exploration."""


@cluster.command("initial")
@click.option("--quiver", "path", default="-", help="quiver JSON file or -")
@click.option("--invert", default="", help="comma list of vertices to invert")
def cluster_initial(path, invert):
    inverted = [v for v in invert.split(",") if v]
    _emit(_run(service.seed_initial, _read_json(path), inverted))


@cluster.command("mutate")
@click.argument("vertex")
@click.option("--seed", "path", default="-", help="seed JSON file or -")
def cluster_mutate(vertex, path):
    _emit(_run(service.seed_mutate, _read_json(path), vertex))


@cluster.command("step")
@click.option("--seed", "path", default="-", help="seed JSON file or -")
def cluster_step(path):
    _emit(_run(service.seed_explore_step, _read_json(path)))


@cluster.command("explore")
@click.option("--seed", "path", default="-", help="seed JSON file or -")
@click.option("--depth", type=int, default=6)
@click.option("--node-cap", type=int, default=10000)
def cluster_explore(path, depth, node_cap):
    _emit(_run(service.seed_explore, _read_json(path), depth, node_cap))


@cluster.command("type")
@click.option("--seed", "path", default="-", help="seed JSON file or -")
@click.option("--depth", type=int, default=16)
@click.option("--node-cap", type=int, default=10000)
def cluster_type(path, depth, node_cap):
    _emit(_run(service.seed_type, _read_json(path), depth, node_cap))


@cluster.command("subcheck")
@click.option("--sub", required=True, help="candidate sub-seed JSON file")
@click.option("--ambient", required=True, help="ambient seed JSON file")
@click.option("--embedding", required=True, help='JSON map, e.g. {"1":1,"2":2}')
def cluster_subcheck(sub, ambient, embedding):
    try:
        emb = json.loads(embedding)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"--embedding: not valid JSON ({exc})")
    _emit(_run(service.subcluster_check, _read_json(sub), _read_json(ambient), emb))


# -- loop group


@main.group()
def loopgroup():
    """Cells, minors, and their verification."""


@loopgroup.command("seed")
@click.argument("cell")
def loopgroup_seed(cell):
    _emit(_run(service.loopgroup_seed, cell))


@loopgroup.command("sample")
@click.argument("cell")
@click.pass_context
def loopgroup_sample(ctx, cell):
    _emit(_run(service.loopgroup_sample, cell, _rng_of(ctx)))


@loopgroup.command("verify")
@click.argument("cell")
@click.option("--samples", type=int, default=100)
@click.pass_context
def loopgroup_verify(ctx, cell, samples):
    report = _run(service.loopgroup_verify, cell, samples, _rng_of(ctx))
    _emit(report)
    if not report["all_passed"]:
        raise SystemExit(1)


@loopgroup.command("phi")
@click.argument("word")
@click.option("--module", "path", required=True, help="module JSON file or -")
@click.option("--cap", type=int, default=4)
def loopgroup_phi(word, path, cap):
    _emit(_run(service.loopgroup_phi, _read_json(path), word, cap))


# -- the suite


@main.command("verify")
@click.argument("config", required=False)
@click.option("--json", "as_json", is_flag=True, default=False)
@click.pass_context
def verify(ctx, config, as_json):
    """Run the verification suite; exit 0 only if every check passes."""
    overrides = {}
    if config is not None:
        overrides = _read_json(config)
        if not isinstance(overrides, dict):
            raise click.UsageError(f"{config}: config must be a JSON object")
    if ctx.obj and ctx.obj.get("rng") is not None:
        overrides["rng"] = ctx.obj["rng"]
    report = suite.run_suite(overrides)
    if as_json:
        _emit(report)
    else:
        for check in report["checks"]:
            mark = "ok  " if check["passed"] else "FAIL"
            click.echo(
                f"{mark} {check['name']} ({check['seconds']}s) {check['detail']}"
            )
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        click.echo(
            "all checks passed" if not failed else f"failed: {', '.join(failed)}"
        )
    if not report["all_passed"]:
        raise SystemExit(1)


# -- server


@main.command("serve")
@click.option("--port", type=int, default=8642)
@click.option("--host", default="127.0.0.1")
def serve_cmd(port, host):
    """Serve the same functions over HTTP."""
    from .serve import serve

    serve(port=port, host=host)


# -- export


@main.command("export")
@click.option(
    "--kind",
    type=click.Choice(["quiver", "seed", "graph", "module", "exchange"]),
    required=True,
)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json")
@click.option("--in", "src", default="-", help="entity JSON file or -")
@click.option("--out", default="-", help="output path or -")
def export(kind, fmt, src, out):
    """Re-render an entity as canonical JSON or DOT, byte-stably."""
    text = _run(service.export_entity, kind, fmt, _read_json(src))
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
