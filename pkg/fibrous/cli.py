"""Command-line entrypoints for fibrous-spaces.

Every command reads one instance file (JSON, selected by its ``kind``) and
prints a JSON result on standard output. Exit status is 0 on success, 1 when
a check comes out false and 2 when the input itself is unusable.
"""

import functools
import json
import logging
from typing import Any, Callable, Dict, Optional

import click
from rich.console import Console
from rich.logging import RichHandler

from .config import get_settings
from .constructors import (
    from_lax_maltsev,
    from_preorder,
    from_pseudometric,
)
from .core import FibrousPreorder, check_axioms, check_morphism, induced_topology
from .errors import FibrousError, InputError
from .module_theory import (
    check_module_condition,
    check_sn_family,
    fp_from_sn_family,
    module_topology,
    validate_action,
)
from .representations import (
    EtaGammaRep,
    NeighborhoodMap,
    TernaryRep,
    convert,
    induced_topology_of,
    validate_rep,
)
from .reports import to_jsonable
from .schema import (
    FibrousPreorderInstance,
    GroupSubsetInstance,
    LaxMaltsevInstance,
    ModuleDataInstance,
    MorphismInstance,
    PreorderInstance,
    PseudometricInstance,
    SnFamilyInstance,
    parse_instance,
)
from .topology import FiniteTopology, alexandrov_topology, validate_preorder, validate_topology
from .worked_examples import DEMOS, run_demo, sorgenfrey_is_open

console = Console(stderr=True)
logger = logging.getLogger(__name__)


def setup_logging(level: str, as_json: bool = False) -> None:
    """Set up logging on stderr with a Rich handler or JSON lines."""
    log_level = getattr(logging, level.upper())
    if as_json:

        class JsonFormatter(logging.Formatter):
            def format(self, record: logging.LogRecord) -> str:
                payload = {
                    "level": record.levelname,
                    "time": self.formatTime(record, "%Y-%m-%dT%H:%M:%SZ"),
                    "message": record.getMessage(),
                    "name": record.name,
                }
                return json.dumps(payload)

        handler: logging.Handler = logging.StreamHandler()
        handler.setFormatter(JsonFormatter())
        logging.basicConfig(level=log_level, handlers=[handler], force=True)
    else:
        logging.basicConfig(
            level=log_level,
            format="%(message)s",
            datefmt="[%X]",
            handlers=[RichHandler(console=console, rich_tracebacks=True)],
            force=True,
        )


def emit(payload: Dict[str, Any], ok: bool = True) -> None:
    """Print the JSON result and exit 1 when the check came out false."""
    click.echo(json.dumps(to_jsonable(payload), indent=2))
    if not ok:
        raise click.exceptions.Exit(1)


def reports_errors(command: Callable[..., None]) -> Callable[..., None]:
    """Turn library errors into a JSON error object and their exit code."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except FibrousError as exc:
            logger.debug("%s: %s", exc.code, exc.message)
            click.echo(json.dumps({"error": to_jsonable(exc.to_dict())}, indent=2))
            raise click.exceptions.Exit(exc.exit_code)

    return wrapper


def load(path: str) -> Any:
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(data)


def as_fibrous(instance: Any) -> Optional[FibrousPreorder]:
    """The fibrous preorder an instance describes or constructs, if any."""
    if isinstance(instance, (FibrousPreorderInstance, GroupSubsetInstance)):
        return instance.build()
    if isinstance(instance, PreorderInstance):
        return from_preorder(instance.build())
    if isinstance(instance, PseudometricInstance):
        return from_pseudometric(instance.build(), instance.cap)
    if isinstance(instance, LaxMaltsevInstance):
        return from_lax_maltsev(instance.build(), instance.linking)
    if isinstance(instance, SnFamilyInstance):
        return fp_from_sn_family(instance.build())
    return None


def topology_of(instance: Any, bound: Optional[int]) -> FiniteTopology:
    if isinstance(instance, PreorderInstance):
        return alexandrov_topology(instance.build())
    if isinstance(instance, ModuleDataInstance):
        return module_topology(instance.build(), bound)
    fp = as_fibrous(instance)
    if fp is not None:
        return induced_topology(fp, bound)
    built = instance.build() if hasattr(instance, "build") else None
    if isinstance(built, FiniteTopology):
        report = validate_topology(built)
        if not report.passed:
            emit(report.to_dict(), ok=False)
        return built
    if isinstance(built, (NeighborhoodMap, TernaryRep, EtaGammaRep)):
        return induced_topology_of(built, bound)
    raise InputError(f"instances of kind {instance.kind!r} do not determine a topology")


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from FTK_LOG_LEVEL)")
@click.option("--log-json/--no-log-json", default=None, help="Emit logs as JSON lines")
@click.option(
    "--exhaustive-bound",
    type=int,
    default=None,
    help="Largest carrier checked by the subset scan (default from FTK_EXHAUSTIVE_BOUND)",
)
@click.pass_context
def main(
    ctx: click.Context,
    log_level: Optional[str],
    log_json: Optional[bool],
    exhaustive_bound: Optional[int],
) -> None:
    """Fibrous preorders and the finite topologies they induce."""
    settings = get_settings()
    setup_logging(
        log_level or settings.log_level,
        settings.log_json if log_json is None else log_json,
    )
    ctx.obj = {"bound": exhaustive_bound}


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@reports_errors
def validate(path: str) -> None:
    """Check the defining conditions of an instance."""
    instance = load(path)
    kind = instance.kind
    if kind == "preorder":
        validate_preorder(instance.build())
        emit({"subject": kind, "passed": True})
    elif kind == "topology":
        report = validate_topology(instance.build())
        emit(report.to_dict(), report.passed)
    elif kind in ("nmap", "ternary", "etagamma"):
        report = validate_rep(instance.build())
        emit(report.to_dict(), report.passed)
    elif kind == "monoid":
        instance.build().validate()
        emit({"subject": kind, "passed": True})
    elif kind == "sn_family":
        report = check_sn_family(instance.build())
        emit(report.to_dict(), report.passed)
    elif kind == "module_data":
        md = instance.build()
        reports = {
            "action": validate_action(md),
            "a": check_module_condition(md, "a"),
            "b": check_module_condition(md, "b"),
        }
        passed = all(r.passed for r in reports.values())
        emit({"subject": kind, "passed": passed, **reports}, passed)
    elif kind == "interval_set":
        result = sorgenfrey_is_open(instance.build())
        emit({"subject": kind, **result.to_dict()}, result.is_open)
    elif kind == "morphism":
        run_morphism(instance)
    elif kind == "fibrous_preorder":
        report = check_axioms(instance.build())
        emit(report.to_dict(), report.passed)
    else:
        # Constructors check the axioms themselves and raise on failure
        fp = as_fibrous(instance)
        emit({"subject": kind, "passed": True, "structure": fp})


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.pass_context
@reports_errors
def topology(ctx: click.Context, path: str) -> None:
    """Print the topology an instance induces."""
    emit(topology_of(load(path), ctx.obj["bound"]).to_dict())


@main.command(name="convert")
@click.option(
    "--to",
    "target",
    required=True,
    type=click.Choice(["nmap", "ternary", "etagamma", "fp"]),
)
@click.argument("path", type=click.Path(dir_okay=False))
@reports_errors
def convert_cmd(target: str, path: str) -> None:
    """Convert an instance to another representation."""
    instance = load(path)
    source = as_fibrous(instance)
    if source is None:
        source = instance.build()
        if not isinstance(source, (NeighborhoodMap, TernaryRep, EtaGammaRep)):
            raise InputError(f"instances of kind {instance.kind!r} cannot be converted")
    emit(convert(source, target).to_dict())


@main.command()
@click.argument("first", type=click.Path(dir_okay=False))
@click.argument("second", type=click.Path(dir_okay=False))
@click.pass_context
@reports_errors
def equiv(ctx: click.Context, first: str, second: str) -> None:
    """Compare the topologies two instances induce."""
    bound = ctx.obj["bound"]
    left = topology_of(load(first), bound)
    right = topology_of(load(second), bound)
    equal = left == right
    emit({"equal": equal, "left": left, "right": right}, equal)


def run_morphism(instance: MorphismInstance) -> None:
    src, dst = instance.src.build(), instance.dst.build()
    result = check_morphism(src, dst, instance.f, instance.g)
    emit({"subject": "morphism", **result.to_dict()}, result.holds)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@reports_errors
def morphism(path: str) -> None:
    """Check the morphism condition for a bundle of src, dst, f and g."""
    instance = load(path)
    if not isinstance(instance, MorphismInstance):
        raise InputError(f"expected a morphism bundle, got {instance.kind!r}")
    run_morphism(instance)


@main.command()
@click.argument("name", type=click.Choice(sorted(DEMOS)))
@reports_errors
def demo(name: str) -> None:
    """Run one of the worked examples."""
    emit(run_demo(name))


if __name__ == "__main__":
    main()
