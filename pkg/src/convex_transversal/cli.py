"""Command-line interface.

Subcommands: ``solve``, ``oracle``, ``gen random``, ``gen hardness``,
``verify``, ``render``.  Exit codes: 0 success, 1 validation failure,
2 solver/oracle mismatch (verify), 3 usage error.  The environment variable
``CONVEX_TRANSVERSAL_SEED`` supplies the default seed where one applies.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

import click
from gmpy2 import mpq

from .formats import (
    FormatError,
    parse_instance,
    parse_sat,
    parse_scene,
    serialize_instance,
    serialize_scene,
    gen_random,
)
from .full import max_convex_transversal, max_quadrilateral
from .geom import Instance, InvalidInstanceError, Transversal
from .hardness import build_instance, emit_rectangles, validate_scene
from .oracle import TooLargeError, oracle_max
from .svg import render_svg
from .upper import max_upper_transversal

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2
EXIT_USAGE = 3

SEED_ENVVAR = "CONVEX_TRANSVERSAL_SEED"


@dataclass(frozen=True)
class RunReport:
    """Machine-readable record of one solver run."""

    digest: str
    mode: str
    k: int
    category: str
    witness: Optional[Transversal]
    wall_time: float

    def to_json(self) -> dict:
        body = {
            "digest": self.digest,
            "mode": self.mode,
            "k": self.k,
            "category": self.category,
            "wall_time": self.wall_time,
        }
        if self.witness is not None:
            assert self.k == len(self.witness)
            body["witness"] = {
                "points": [[str(p.x), str(p.y)] for p in self.witness.points],
                "assignment": list(self.witness.assignment),
            }
        return body


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def _solve(instance: Instance, mode: str):
    if mode == "upper":
        k, witness = max_upper_transversal(instance)
        return k, witness, "upper"
    if mode == "quad":
        k, witness = max_quadrilateral(instance)
        return k, witness, "quadrilateral"
    k, witness, category = max_convex_transversal(instance)
    return k, witness, category


@click.group()
def cli() -> None:
    """Maximum convex partial transversals of vertical segments."""


@cli.command()
@click.option("--mode", type=click.Choice(["upper", "quad", "full"]), default="full",
              show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False),
              help="Write a JSON run report to this file.")
@click.argument("file", type=str)
def solve(mode: str, report_path: Optional[str], file: str) -> int:
    """Solve an instance file; print the optimum size."""
    text = _read(file)
    instance = parse_instance(text)
    started = time.perf_counter()
    k, witness, category = _solve(instance, mode)
    elapsed = time.perf_counter() - started
    if witness is not None and not witness.is_valid(instance):
        raise click.ClickException("solver returned an invalid witness")
    click.echo(f"k={k}")
    if report_path:
        report = RunReport(_digest(text), mode, k, category, witness, elapsed)
        with open(report_path, "w", encoding="utf-8") as handle:
            json.dump(report.to_json(), handle)
            handle.write("\n")
    return EXIT_OK


@cli.command()
@click.option("--cap", type=int, default=7, show_default=True,
              help="Largest n the exhaustive search will attempt.")
@click.argument("file", type=str)
def oracle(cap: int, file: str) -> int:
    """Brute-force optimum of a small instance file."""
    instance = _load_instance(file)
    try:
        k = oracle_max(instance, cap=cap)
    except TooLargeError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"k={k}")
    return EXIT_OK


@cli.group()
def gen() -> None:
    """Generate instances and hardness scenes."""


@gen.command("random")
@click.option("--n", type=int, required=True, help="Number of segments.")
@click.option("--seed", type=int, default=0, show_default=True, envvar=SEED_ENVVAR)
@click.option("--out", type=click.Path(dir_okay=False), help="Output file (default stdout).")
def gen_random_cmd(n: int, seed: int, out: Optional[str]) -> int:
    """Random validated instance with n disjoint vertical segments."""
    if n < 1:
        raise click.UsageError("--n must be at least 1")
    text = serialize_instance(gen_random(n, seed))
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)
    return EXIT_OK


@gen.command("hardness")
@click.option("--sat", "sat_path", type=str, required=True,
              help="Weighted-free 2-SAT file (header 'p wcnf2 n m').")
@click.option("--seed", type=int, default=0, show_default=True, envvar=SEED_ENVVAR)
@click.option("--rectangles", is_flag=True,
              help="Also emit the thin-rectangle regions as JSON.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output file (default stdout).")
def gen_hardness_cmd(sat_path: str, seed: int, rectangles: bool, out: Optional[str]) -> int:
    """Compile a Max-2-SAT instance into a 3-oriented segment scene."""
    sat = parse_sat(_read(sat_path))
    scene = build_instance(sat, seed=seed)
    text = serialize_scene(scene)
    if rectangles:
        thin = scene.constants.zeta / 2
        body = json.loads(text)
        body["rectangles"] = [
            {
                "mode": rect.mode,
                "p": [str(rect.p.x), str(rect.p.y)],
                "q": [str(rect.q.x), str(rect.q.y)],
                "width": None if rect.width is None else str(mpq(rect.width)),
            }
            for rect in emit_rectangles(scene, thin)
        ]
        text = json.dumps(body, separators=(",", ":")) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        click.echo(text, nl=False)
    return EXIT_OK


def _looks_like_scene(text: str) -> bool:
    stripped = text.lstrip()
    return stripped.startswith("{") and '"flies"' in stripped


@cli.command()
@click.option("--cap", type=int, default=7, show_default=True,
              help="Cross-check against the oracle when n is at most this.")
@click.argument("file", type=str)
def verify(cap: int, file: str) -> int:
    """Re-validate a file; cross-check solvers against the oracle."""
    text = _read(file)
    if _looks_like_scene(text):
        scene = parse_scene(text)
        problems = validate_scene(scene)
        for problem in problems:
            click.echo(problem, err=True)
        click.echo("scene " + ("ok" if not problems else "INVALID"))
        return EXIT_OK if not problems else EXIT_INVALID

    instance = parse_instance(text)
    if len(instance) > cap:
        click.echo(f"instance ok (n={len(instance)} above oracle cap, no cross-check)")
        return EXIT_OK
    reference = oracle_max(instance, cap=cap)
    k_full, witness, _ = max_convex_transversal(instance)
    k_upper = max_upper_transversal(instance)[0]
    if k_full != reference:
        click.echo(f"MISMATCH: solver k={k_full}, oracle k={reference}", err=True)
        return EXIT_MISMATCH
    if k_upper > reference:
        click.echo(f"MISMATCH: upper solver k={k_upper} exceeds oracle k={reference}",
                   err=True)
        return EXIT_MISMATCH
    if not witness.is_valid(instance):
        click.echo("MISMATCH: solver witness fails validity checks", err=True)
        return EXIT_MISMATCH
    click.echo(f"instance ok (k={reference} confirmed against oracle)")
    return EXIT_OK


@cli.command()
@click.option("--witness", "with_witness", is_flag=True,
              help="Solve the instance and overlay the optimal transversal.")
@click.option("--guides/--no-guides", default=True, show_default=True,
              help="Crate/banana guide layers on hardness scenes.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output file (default stdout).")
@click.argument("file", type=str)
def render(with_witness: bool, guides: bool, out: Optional[str], file: str) -> int:
    """Render an instance or hardness scene as SVG."""
    text = _read(file)
    if _looks_like_scene(text):
        if with_witness:
            raise click.UsageError("--witness applies to instance files only")
        svg = render_svg(parse_scene(text), guides=guides)
    else:
        instance = parse_instance(text)
        witness = max_convex_transversal(instance)[1] if with_witness else None
        svg = render_svg(instance, witness)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(svg)
    else:
        click.echo(svg, nl=False)
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    """Entry point mapping errors onto the documented exit codes."""
    try:
        code = cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_INVALID
    except (FormatError, InvalidInstanceError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
