"""Administrative command-line tool; subcommands mirror the service
operations. JSON on stdout; exit 0 on success, 1 on domain error, 2 on
usage error."""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from .contextualize import ArticulationRequest, TranscriptionJob
from .errors import BadConfig, KwspError, PortInUse
from .exploration import SearchRequest
from .model import ElementKind, Surrogate
from .platform import Platform


def _platform(ctx: click.Context) -> Platform:
    if ctx.obj.get("platform") is None:
        ctx.obj["platform"] = Platform(ctx.obj["data_dir"])
    return ctx.obj["platform"]


def _emit(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except KwspError as exc:
            click.echo(json.dumps(exc.to_dict()), err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option(
    "--data",
    "data_dir",
    envvar="KWSP_DATA",
    default="./kwsp-data",
    show_default=True,
    help="Archive data directory.",
)
@click.pass_context
def main(ctx, data_dir):
    """Knowledge work support platform admin tool."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir


# -- definitions ---------------------------------------------------------


@main.group("def")
def definitions_group():
    """Manage task-type definitions."""


@definitions_group.command("load")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@domain_errors
def def_load(ctx, file):
    with open(file, "r", encoding="utf-8") as fh:
        definition = _platform(ctx).register_definition(fh.read())
    _emit({"id": definition.id, "version": definition.version})


@definitions_group.command("list")
@click.pass_context
@domain_errors
def def_list(ctx):
    _emit(
        [
            {"id": d.id, "name": d.name, "version": d.version}
            for d in _platform(ctx).task_types()
        ]
    )


@definitions_group.command("show")
@click.argument("task_type")
@click.option("--version", type=int, default=None)
@click.pass_context
@domain_errors
def def_show(ctx, task_type, version):
    registry = _platform(ctx).archive.registry
    definition = registry.get(task_type, version) if version else registry.latest(task_type)
    if definition is None:
        click.echo(json.dumps({"code": "UnknownTaskType", "message": task_type}), err=True)
        sys.exit(1)
    _emit(definition.to_dict())


# -- sessions ------------------------------------------------------------


@main.group("session")
def session_group():
    """Run task-instance sessions."""


@session_group.command("open")
@click.option("--worker", required=True)
@click.option("--task-type", required=True)
@click.option("--instance", "task_instance", required=True)
@click.pass_context
@domain_errors
def session_open(ctx, worker, task_type, task_instance):
    _emit(_platform(ctx).workspace.open_session(worker, task_type, task_instance).to_dict())


@session_group.command("advance")
@click.argument("session_id")
@click.argument("to_activity")
@click.option("--note", default=None)
@click.pass_context
@domain_errors
def session_advance(ctx, session_id, to_activity, note):
    _emit(_platform(ctx).workspace.advance(session_id, to_activity, note).to_dict())


@session_group.command("context")
@click.argument("session_id")
@click.pass_context
@domain_errors
def session_context(ctx, session_id):
    _emit(_platform(ctx).workspace.current_context(session_id).to_dict())


@session_group.command("complete")
@click.argument("session_id")
@click.pass_context
@domain_errors
def session_complete(ctx, session_id):
    _emit(_platform(ctx).workspace.complete_session(session_id).to_dict())


# -- articulation / transcription ---------------------------------------


@main.command("articulate")
@click.argument("session_id")
@click.option("--kind", required=True, type=click.Choice([k.value for k in ElementKind]))
@click.option("--content", required=True)
@click.option("--title", required=True)
@click.option("--terms", default="", help="Comma-separated surrogate terms.")
@click.option("--supports", default="", help="Comma-separated element ids (RS).")
@click.option("--satisfies", default="", help="Comma-separated element ids (DS).")
@click.option("--ie-type", "ie_type_node", default=None)
@click.option("--note", default="")
@click.pass_context
@domain_errors
def articulate_cmd(ctx, session_id, kind, content, title, terms, supports, satisfies, ie_type_node, note):
    request = ArticulationRequest(
        session_id=session_id,
        kind=ElementKind(kind),
        content=content,
        surrogate=Surrogate(title=title, terms=tuple(t for t in terms.split(",") if t)),
        supports=tuple(s for s in supports.split(",") if s),
        satisfies=tuple(s for s in satisfies.split(",") if s),
        ie_type_node=ie_type_node,
        note=note,
    )
    _emit(_platform(ctx).articulate(request).to_dict())


@main.command("transcribe")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@domain_errors
def transcribe_cmd(ctx, file):
    with open(file, "r", encoding="utf-8") as fh:
        job = TranscriptionJob.from_dict(json.load(fh))
    _emit(_platform(ctx).transcribe(job).to_dict())


# -- exploration ---------------------------------------------------------


@main.command("search")
@click.argument("terms", nargs=-1, required=True)
@click.option("--task-type", default=None)
@click.option("--instance", "task_instance", default=None)
@click.option("--kind", default=None)
@click.option("--activity", "activity_node", default=None)
@click.option("--ie-type", "ie_type_node", default=None)
@click.option("--limit", type=int, default=10, show_default=True)
@click.pass_context
@domain_errors
def search_cmd(ctx, terms, task_type, task_instance, kind, activity_node, ie_type_node, limit):
    filter = {
        key: value
        for key, value in {
            "task_type": task_type,
            "task_instance": task_instance,
            "kind": kind,
            "activity_node": activity_node,
            "ie_type_node": ie_type_node,
        }.items()
        if value
    }
    request = SearchRequest(terms=tuple(terms), filter=filter, limit=limit)
    _emit([r.to_dict() for r in _platform(ctx).search(request)])


@main.group("element")
def element_group():
    """Inspect archived elements."""


@element_group.command("get")
@click.argument("element_id")
@click.pass_context
@domain_errors
def element_get(ctx, element_id):
    _emit(_platform(ctx).archive.require(element_id).to_dict())


@element_group.command("provenance")
@click.argument("element_id")
@click.option("--max-depth", type=int, default=None)
@click.pass_context
@domain_errors
def element_provenance(ctx, element_id, max_depth):
    _emit(_platform(ctx).provenance_closure(element_id, max_depth).to_dict())


@element_group.command("supports")
@click.argument("element_id")
@click.pass_context
@domain_errors
def element_supports(ctx, element_id):
    _emit(_platform(ctx).support_set(element_id))


@main.command("instances")
@click.argument("task_type")
@click.argument("node")
@click.pass_context
@domain_errors
def instances_cmd(ctx, task_type, node):
    _emit(_platform(ctx).instances_under(task_type, node))


# -- argumentation -------------------------------------------------------


@main.command("issue")
@click.argument("session_id")
@click.argument("text")
@click.pass_context
@domain_errors
def issue_cmd(ctx, session_id, text):
    _emit(_platform(ctx).argumentation.raise_issue(session_id, text).to_dict())


@main.command("position")
@click.argument("issue_id")
@click.argument("text")
@click.option("--session", "session_id", required=True)
@click.pass_context
@domain_errors
def position_cmd(ctx, issue_id, text, session_id):
    _emit(_platform(ctx).argumentation.take_position(issue_id, text, session_id).to_dict())


@main.command("argue")
@click.argument("position_id")
@click.argument("text")
@click.option("--stance", type=click.Choice(["supports", "objects"]), required=True)
@click.option("--session", "session_id", required=True)
@click.option("--evidence", default="", help="Comma-separated element ids.")
@click.pass_context
@domain_errors
def argue_cmd(ctx, position_id, text, stance, session_id, evidence):
    _emit(
        _platform(ctx)
        .argumentation.argue(
            position_id,
            stance,
            text,
            session_id,
            tuple(e for e in evidence.split(",") if e),
        )
        .to_dict()
    )


@main.command("verify")
@click.argument("position_id")
@click.pass_context
@domain_errors
def verify_cmd(ctx, position_id):
    _emit(_platform(ctx).argumentation.verify(position_id).to_dict())


@main.command("conclude")
@click.argument("position_id")
@click.option("--session", "session_id", required=True)
@click.pass_context
@domain_errors
def conclude_cmd(ctx, position_id, session_id):
    _emit(_platform(ctx).argumentation.conclude(position_id, session_id).to_dict())


# -- recommendations -----------------------------------------------------


@main.group("recommend")
def recommend_group():
    """Context-aware hints and warnings."""


@recommend_group.command("next")
@click.argument("session_id")
@click.pass_context
@domain_errors
def recommend_next(ctx, session_id):
    _emit([r.to_dict() for r in _platform(ctx).recommender.next_activities(session_id)])


@recommend_group.command("related")
@click.argument("session_id")
@click.option("--limit", type=int, default=5, show_default=True)
@click.pass_context
@domain_errors
def recommend_related(ctx, session_id, limit):
    _emit(
        [r.to_dict() for r in _platform(ctx).recommender.related_elements(session_id, limit)]
    )


@recommend_group.command("completeness")
@click.argument("session_id")
@click.pass_context
@domain_errors
def recommend_completeness(ctx, session_id):
    _emit(
        [r.to_dict() for r in _platform(ctx).recommender.completeness_warnings(session_id)]
    )


# -- reports / data ------------------------------------------------------


@main.command("deviation-report")
@click.argument("task_type")
@click.pass_context
@domain_errors
def deviation_report_cmd(ctx, task_type):
    _emit(_platform(ctx).workspace.deviation_report(task_type))


@main.command("export")
@click.pass_context
@domain_errors
def export_cmd(ctx):
    for line in _platform(ctx).archive.export_stream():
        sys.stdout.write(line)


@main.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@domain_errors
def import_cmd(ctx, file):
    with open(file, "r", encoding="utf-8") as fh:
        count = _platform(ctx).archive.import_stream(fh)
    _emit({"imported": count})


@main.command("audit")
@click.pass_context
@domain_errors
def audit_cmd(ctx):
    _emit([v.to_dict() for v in _platform(ctx).archive.audit()])


@main.command("serve")
@click.option("--addr", envvar="KWSP_ADDR", default="127.0.0.1:8470", show_default=True)
@click.option("--token", envvar="KWSP_TOKEN", default=None)
@click.pass_context
@domain_errors
def serve_cmd(ctx, addr, token):
    """Run the HTTP/JSON service."""
    import errno

    import uvicorn

    from .api import create_app

    try:
        host, port_text = addr.rsplit(":", 1)
        port = int(port_text)
    except ValueError as exc:
        raise BadConfig(f"bad address {addr!r}, expected host:port") from exc
    app = create_app(ctx.obj["data_dir"], auth_token=token)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            raise PortInUse(f"address {addr} already in use") from exc
        raise


if __name__ == "__main__":
    main()
