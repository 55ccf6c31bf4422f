"""Command-line surface: verify, survey, fsu, classnum, split, tower."""

from __future__ import annotations

import os
import sys

import click

from . import _kernels
from .conditions import check_conditions, is_prime, is_squarefree
from .iwasawa import pi_layer
from .quadratic import class_group, fundamental_discriminant, fundamental_unit, h2_of
from .report import run_verification, survey
from .splitting import cyclotomic_2power, layer_splitting, real_cyclotomic_2power, split_prime
from .wada import fsu_of
from .fields import mqfield


def _style(text: str, **kwargs) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return click.style(text, **kwargs)


@click.group()
@click.version_option(package_name="triquad")
def main():
    """Exact verification of unit groups, 2-class numbers and Iwasawa data

    for the families Q(sqrt 2, sqrt p, sqrt q) and Q(sqrt p, sqrt q, i).
    """


@main.command()
@click.option("--p", "p", type=int, required=True, help="first prime")
@click.option("--q", "q", type=int, required=True, help="second prime")
@click.option("--json", "as_json", is_flag=True, help="emit the JSON report")
@click.option("--markdown", "as_markdown", is_flag=True, help="emit a Markdown report")
@click.option(
    "--timestamp",
    type=click.Choice(["on", "off"]),
    default="on",
    show_default=True,
    help="include a generation timestamp (off for reproducible output)",
)
def verify(p, q, as_json, as_markdown, timestamp):
    """Verify every claim for one prime pair."""
    rep = run_verification(p, q)
    ts = timestamp == "on"
    if as_json:
        click.echo(rep.to_json(timestamp=ts))
    elif as_markdown:
        click.echo(rep.to_markdown(timestamp=ts))
    else:
        click.echo(f"pair ({p}, {q}): {rep.condition_label}")
        for c in rep.claims:
            mark = _style("PASS", fg="green") if c.ok else _style("FAIL", fg="red")
            detail = f"  [{c.detail}]" if c.detail else ""
            click.echo(f"  {mark} ({c.status.value}) {c.claim_id}: {c.description}{detail}")
    sys.exit(0 if rep.all_passed else 1)


@main.command(name="survey")
@click.option("--bound", type=int, required=True, help="upper bound for p and q")
@click.option(
    "--cond",
    type=click.Choice(["1", "2", "both"]),
    default="both",
    show_default=True,
    help="restrict to one condition class",
)
@click.option("--jobs", type=int, default=1, show_default=True, help="parallel workers")
@click.option("--json", "as_json", is_flag=True, help="emit the JSON document")
@click.option(
    "--timestamp",
    type=click.Choice(["on", "off"]),
    default="on",
    show_default=True,
)
def survey_cmd(bound, cond, jobs, as_json, timestamp):
    """Verify all qualifying pairs with p, q <= bound."""
    result = survey(bound, cond, jobs=jobs)
    if as_json:
        click.echo(result.to_json(timestamp=timestamp == "on"))
    else:
        click.echo(result.table())
    sys.exit(0 if result.all_passed else 1)


@main.command()
@click.option(
    "--radicands",
    required=True,
    help="comma-separated squarefree radicands, e.g. 2,5,31",
)
def fsu(radicands):
    """Fundamental system of units of a bi- or triquadratic field."""
    try:
        rads = tuple(int(x) for x in radicands.split(","))
    except ValueError:
        raise click.BadParameter("radicands must be integers")
    if not 2 <= len(rads) <= 3:
        raise click.BadParameter("give two or three radicands")
    field = mqfield(*rads)
    result = fsu_of(field)
    click.echo(f"field: {field}")
    click.echo(f"unit index q = 2^{result.q_index.bit_length() - 1}")
    click.echo("fundamental system of units (together with -1):")
    for name, gen in zip(result.generator_names(), result.generators):
        click.echo(f"  {name} = {gen}")


@main.command()
@click.option("--d", "d", type=int, required=True, help="squarefree radicand")
def classnum(d):
    """Class number data of the quadratic field Q(sqrt d)."""
    if d in (0, 1) or not is_squarefree(abs(d)):
        raise click.BadParameter("d must be squarefree and not 0 or 1")
    D = fundamental_discriminant(d)
    grp = class_group(D)
    click.echo(f"Q(√{d}): discriminant {D}")
    click.echo(f"  h        = {grp.h}")
    click.echo(f"  h_narrow = {grp.h_narrow}")
    click.echo(f"  h2       = {grp.h2}")
    if d > 1:
        unit = fundamental_unit(d)
        click.echo(f"  fundamental unit = {unit} (norm {unit.norm})")
    click.echo(f"  reduced representatives: {list(grp.representatives)}")


@main.command()
@click.option("--p", "p", type=int, required=True, help="rational prime to split")
@click.option("--level", type=int, required=True, help="tower level n >= 0")
@click.option("--plus", is_flag=True, help="use the maximal real subfield")
def split(p, level, plus):
    """Decomposition of p in Q(zeta_{2^(n+2)}) or its real subfield."""
    if not is_prime(p):
        raise click.BadParameter(f"{p} is not prime")
    field = real_cyclotomic_2power(level) if plus else cyclotomic_2power(level)
    data = split_prime(field, p)
    click.echo(f"{p} in {field!r}: e={data.e}, f={data.f}, g={data.g} (degree {field.degree})")


@main.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--levels", type=int, required=True, help="largest tower level to show")
def tower(p, q, levels):
    """Layer data for the pair: pi_n, fields, splitting of p per level."""
    cc = check_conditions(p, q)
    click.echo(f"pair ({p}, {q}): {cc.label}")
    if levels < 1:
        raise click.BadParameter("levels must be at least 1")
    for n in range(1, levels + 1):
        layer = pi_layer(n)
        iv = layer.pi.interval(96)
        full = layer_splitting(p, q, n, "full")
        real = layer_splitting(p, q, n, "plus")
        click.echo(
            f"  n={n}: pi_{n} = {layer.pi} ~ {float(iv.lower):.6f}, "
            f"F_n: e={full.data.e} f={full.data.f} g={full.data.g}; "
            f"F_n+: e={real.data.e} f={real.data.f} g={real.data.g}"
        )
    full = layer_splitting(p, q, 1, "full")
    real = layer_splitting(p, q, 1, "plus")
    click.echo(
        f"  stable: {full.stable_g} primes above {p} in F_n, "
        f"{real.stable_g} in F_n+ (from level {max(full.threshold, real.threshold)})"
    )


@main.command()
def backend():
    """Show which kernel backend is active."""
    click.echo(_kernels.BACKEND)


if __name__ == "__main__":
    main()
