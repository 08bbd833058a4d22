"""Command line interface for optuple."""

import contextlib
import json
from pathlib import Path
from typing import Iterator, List, Optional

import typer
from rich.table import Table

from ..core.config import config
from ..core.errors import InputError, OptupleError
from ..core.logging import console, get_logger, setup_logging
from ..core.schemas import (
    ClassModel, FlagsModel, PartitionModel, PartitionPartModel, TupleModel, load_json,
    to_canonical_json
)
from ..decomp.classification import classify as classify_tuple
from ..decomp.decomposition import DecompositionReport, isotypic_decomposition
from ..decomp.equivalence import are_equivalent
from ..decomp.ideals import ideal_split, parse_predicate
from ..decomp.registry import AtomRegistry
from ..numeric.matrices import MatrixTuple, b_transform, inverse_b_transform
from ..oracle.laws import DEFAULT_MULT_SET, MAX_REGISTRY_SIZE, exhaustive_law_suite, law_table
from ..symbolic import classes as cl
from ..symbolic.scalars import ExtScalar

logger = get_logger(__name__)
app = typer.Typer(help="Operator tuples: decomposition, classification and the class algebra.")

CLASS_OPS = (
    "oplus", "sup", "inf", "minus-delta", "minus-nabla", "scalar-mul",
    "partition", "ratio", "flags", "dim",
)


@contextlib.contextmanager
def _errors() -> Iterator[None]:
    """Reports library errors on stderr and exits with their code."""
    try:
        yield
    except OptupleError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(code=e.exit_code)


def _emit(model) -> None:
    typer.echo(to_canonical_json(model))


def _load_tuple(path: Path) -> MatrixTuple:
    return MatrixTuple.from_model(load_json(TupleModel, path))


def _load_class(path: Path) -> cl.TupleClass:
    return cl.TupleClass.from_model(load_json(ClassModel, path))


def _registry(path: Optional[Path]) -> AtomRegistry:
    return AtomRegistry.at(path or config.REGISTRY_DIR)


@app.callback()
def main(
    tol: Optional[float] = typer.Option(None, "--tol", help="Numerical tolerance"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for randomized steps"),
    max_dim: Optional[int] = typer.Option(None, "--max-dim", help="Largest matrix size"),
    aleph_tower: Optional[int] = typer.Option(
        None, "--aleph-tower", help="Highest aleph index of extended scalars"
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Verbose output"),
):
    """Operator tuples: decomposition, classification and the class algebra."""
    config.with_overrides(
        TOL=tol, SEED=seed, MAX_DIM=max_dim, ALEPH_TOWER=aleph_tower,
        LOG_LEVEL="DEBUG" if verbose else None,
    ).apply()
    setup_logging(config.LOG_LEVEL)


@app.command()
def decompose(
    tuple_file: Path = typer.Argument(..., help="Tuple JSON file"),
    table: bool = typer.Option(False, "--table", help="Also print a block table on stderr"),
):
    """Isotypic decomposition of a tuple."""
    with _errors():
        report = isotypic_decomposition(_load_tuple(tuple_file))
        if table:
            display_report(report)
        _emit(report.to_model())


@app.command()
def classify(
    tuple_file: Path = typer.Argument(..., help="Tuple JSON file"),
    registry: Optional[Path] = typer.Option(
        None, "--registry", envvar="OPTUPLE_REGISTRY", help="Atom registry directory"
    ),
):
    """Class of a tuple over the atom registry, registering new atoms."""
    with _errors():
        _emit(classify_tuple(_load_tuple(tuple_file), _registry(registry)).to_model())


@app.command()
def equiv(
    a_file: Path = typer.Argument(..., help="First tuple JSON file"),
    b_file: Path = typer.Argument(..., help="Second tuple JSON file"),
):
    """Unitary equivalence test. Exit code 0 if equivalent, 1 if not."""
    with _errors():
        same = are_equivalent(_load_tuple(a_file), _load_tuple(b_file))
    typer.echo(json.dumps({"equivalent": same}))
    raise typer.Exit(code=0 if same else 1)


@app.command()
def btransform(
    tuple_file: Path = typer.Argument(..., help="Tuple JSON file"),
    inverse: bool = typer.Option(False, "--inverse", help="Apply the inverse transform"),
):
    """Coordinatewise B-transform T (I + |T|)^-1, or its inverse."""
    with _errors():
        a = _load_tuple(tuple_file)
        _emit((inverse_b_transform(a) if inverse else b_transform(a)).to_model())


@app.command()
def split(
    tuple_file: Path = typer.Argument(..., help="Tuple JSON file"),
    ideal: str = typer.Option(
        ..., "--ideal",
        help="jointly-normal, separately-normal, norm<=r, norm<1 or norm=1-unattained",
    ),
    outdir: Path = typer.Option(Path("."), "--outdir", help="Where to write the two parts"),
):
    """Split a tuple into its ideal part and the complement."""
    with _errors():
        result = ideal_split(_load_tuple(tuple_file), parse_predicate(ideal))
        outdir.mkdir(parents=True, exist_ok=True)
        stem = tuple_file.stem
        for name, part in (("part", result.part), ("complement", result.complement)):
            path = outdir / f"{stem}.{name}.json"
            path.write_text(to_canonical_json(part.restricted.to_model()) + "\n", encoding="utf-8")
            console.print(f"[green]{name}:[/green] {path} (dim {part.dim})")
        _emit(result.to_model())


def _arity(op: str, files: List[Path], count: Optional[int]) -> None:
    if count is None:
        if not files:
            raise InputError(f"{op} needs at least one class file.")
    elif len(files) != count:
        raise InputError(f"{op} takes {count} class file(s), got {len(files)}.")


def _partition_model(part: cl.PartitionOfUnity) -> PartitionModel:
    return PartitionModel(
        e_sm=part.e_sm.to_model(),
        parts=[
            PartitionPartModel(type=tag.value, level=alpha.to_model(), part=piece.to_model())
            for (tag, alpha), piece in part.parts.items()
        ],
    )


@app.command("class-op")
def class_op(
    op: str = typer.Argument(..., help=f"One of: {', '.join(CLASS_OPS)}"),
    class_files: List[Path] = typer.Argument(..., help="Class JSON files"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Scalar for scalar-mul"),
    registry: Optional[Path] = typer.Option(
        None, "--registry", envvar="OPTUPLE_REGISTRY",
        help="Registry whose labels fill the zero levels of a partition",
    ),
):
    """Operations of the class algebra.

    minus-delta and minus-nabla take B then A; ratio takes A then B.
    """
    with _errors():
        if op not in CLASS_OPS:
            raise InputError(f"Unknown class operation {op!r}; expected one of {CLASS_OPS}.")
        arity = {"oplus": None, "sup": None, "inf": None, "minus-delta": 2,
                 "minus-nabla": 2, "ratio": 2}.get(op, 1)
        _arity(op, class_files, arity)
        classes = [_load_class(path) for path in class_files]

        match op:
            case "oplus":
                _emit(cl.oplus(classes).to_model())
            case "sup":
                _emit(cl.sup(classes).to_model())
            case "inf":
                _emit(cl.inf(classes).to_model())
            case "minus-delta":
                _emit(cl.minus_delta(classes[0], classes[1]).to_model())
            case "minus-nabla":
                _emit(cl.minus_nabla(classes[0], classes[1]).to_model())
            case "scalar-mul":
                if alpha is None:
                    raise InputError("scalar-mul needs --alpha.")
                _emit(cl.scalar_mul(ExtScalar.of(alpha), classes[0]).to_model())
            case "partition":
                view = _registry(registry).view() if registry is not None else None
                _emit(_partition_model(cl.partition_of_unity(classes[0], view)))
            case "ratio":
                _emit(cl.ratio(classes[0], classes[1]).to_model())
            case "flags":
                _emit(FlagsModel(flags=sorted(cl.type_flags(classes[0]))))
            case "dim":
                _emit(cl.symbolic_dim(classes[0]).to_model())


@app.command()
def laws(
    registry_size: int = typer.Option(
        MAX_REGISTRY_SIZE, "--registry-size", help="Labels in the law registry (0-3)"
    ),
    mults: str = typer.Option(
        ",".join(DEFAULT_MULT_SET), "--mults", help="Comma-separated multiplicities"
    ),
    max_triples: int = typer.Option(20000, "--max-triples", help="Cap on triple cases"),
    table: bool = typer.Option(True, "--table/--no-table", help="Print a summary table"),
):
    """Run the exhaustive law suite of the class algebra."""
    with _errors():
        report = exhaustive_law_suite(
            registry_size=registry_size,
            mult_set=[m for m in mults.split(",") if m.strip()],
            max_triples=max_triples,
        )
    if table:
        console.print(law_table(report))
    _emit(report)
    if report.unexpected_failures():
        raise typer.Exit(code=1)


def display_report(report: DecompositionReport) -> None:
    """Block table of a decomposition on stderr."""
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Block", style="cyan")
    table.add_column("Atom dim", justify="right")
    table.add_column("Multiplicity", justify="right")
    table.add_column("Key bucket", style="white")
    for i, block in enumerate(report.blocks, 1):
        table.add_row(
            str(i), str(block.atom.dim), str(block.multiplicity), block.key.bucket
        )
    console.print(table)
    console.print(f"[blue]Residual:[/blue] {report.residual:.3e}")


if __name__ == "__main__":
    app()
