"""Command-line interface: ``octo {table, g2, kernel, module, group, cert, export}``.

Exit codes: 0 when every check passes, 1 on a check failure, 2 on a usage error.
"""

from __future__ import annotations

import json
import sys

import click

from . import exterior as ext
from . import g2 as g2mod
from . import octonion as octo
from . import pgroup as pg
from . import verify
from .linalg import FpMatrix, check_prime


def _prime(ctx, param, value):
    if value is None:
        return value
    try:
        return check_prime(value)
    except (TypeError, ValueError) as exc:
        raise click.BadParameter(str(exc)) from exc


p_option = click.option("--p", "p", type=int, required=True, callback=_prime,
                        help="Odd prime defining the field.")
seed_option = click.option("--seed", type=int, default=0, show_default=True)
samples_option = click.option("--samples", type=int, default=200, show_default=True,
                              help="Number of sampled G2 elements.")
out_option = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                          help="Write JSON here instead of stdout.")
json_option = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")


def _emit(obj, out: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise click.ClickException(f"cannot write {out}: {exc}") from exc
    else:
        click.echo(text, nl=False)


def _report(cert: verify.Certificate, as_json: bool, out: str | None):
    if out:
        verify.export("cert", out, certificate=cert)
    if as_json:
        click.echo(cert.dumps(), nl=False)
    else:
        for rec in cert.checks:
            extra = f"  witness={json.dumps(rec.witness)}" if rec.status == verify.FAIL else ""
            click.echo(f"[{rec.status:>13}] {rec.name} (samples={rec.samples}, "
                       f"{rec.runtime_ms:.0f} ms){extra}")
        click.echo(f"overall: {'PASS' if cert.passed else 'FAIL'} (p={cert.p}, seed={cert.seed})")
    sys.exit(cert.exit_code)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact computations with octonions over GF(p), G2(p) and the group P_U."""


@main.command()
@p_option
@json_option
def table(p, as_json):
    """Print the basis multiplication table of the octonions."""
    if as_json:
        _emit({"p": p, "basis": [octo.basis_symbol(k) for k in range(8)],
               "table": octo.table_symbols()}, None)
    else:
        click.echo(octo.format_table())


@main.group()
def g2():
    """Sample and check elements of G2(p)."""


@g2.command("sample")
@p_option
@click.option("--count", type=click.IntRange(min=1), default=10, show_default=True)
@seed_option
@out_option
def g2_sample(p, count, seed, out):
    """Emit COUNT sampled automorphisms as a JSON array of 7x7 matrices."""
    _emit([g.mat7.to_json() for g in g2mod.sample_g2(seed, p, count)], out)


@g2.command("check")
@click.option("--in", "infile", type=click.File("r"), required=True)
def g2_check(infile):
    """Re-verify the automorphism property of every matrix in a JSON file."""
    try:
        mats = [FpMatrix.from_json(obj) for obj in json.load(infile)]
    except (ValueError, KeyError, TypeError) as exc:
        raise click.UsageError(f"malformed matrix file: {exc}") from exc
    failures = 0
    for k, m in enumerate(mats):
        w = g2mod.automorphism_witness(m)
        ok = w is None and m.det() == 1 and verify.preserves_beta(m)
        failures += not ok
        click.echo(f"{k}: {'ok' if ok else f'FAIL witness={w}'}")
    click.echo(f"{len(mats) - failures}/{len(mats)} automorphisms")
    sys.exit(1 if failures else 0)


@g2.command("count-triples")
@p_option
@seed_option
@json_option
def g2_count(p, seed, as_json):
    """Staged exhaustive count of basic triples (p <= 7)."""
    try:
        c = g2mod.count_triples(p, seed=seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    order = g2mod.classical_g2_order(p)
    if as_json:
        _emit({**c._asdict(), "classical_order": order}, None)
    else:
        click.echo(f"n_x            = {c.n_x}")
        click.echo(f"n_y | x        = {c.n_y_given_x}")
        click.echo(f"n_z | x, y     = {c.n_z_given_xy}")
        click.echo(f"product        = {c.product}")
        click.echo(f"|G2({p})| formula = {order}")
        click.echo(f"stage counts independent of earlier choices: {c.stage_independent}")
    sys.exit(0 if c.product == order and c.stage_independent else 1)


@main.command()
@p_option
@out_option
def kernel(p, out):
    """Compute the 14-dimensional kernel U of f-tilde (subspace JSON)."""
    _emit(ext.kernel_u(p).to_json(), out)


@main.group()
def module():
    """Module-theoretic checks on the exterior square."""


@module.command("verify")
@p_option
@samples_option
@seed_option
@json_option
def module_verify(p, samples, seed, as_json):
    """Invariance, equivariance, spinning and Hom-space checks."""
    _report(verify.run_pipeline(p, samples, seed, prefixes=("exterior.",)), as_json, None)


@main.group()
def group():
    """Build and verify the p-group P_U."""


@group.command("build")
@p_option
@out_option
def group_build(p, out):
    """Serialize the group context (p and U)."""
    _emit(pg.PGroupContext.build(p).to_json(), out)


@group.command("verify")
@p_option
@samples_option
@seed_option
@json_option
def group_verify(p, samples, seed, as_json):
    """Group axioms, structure and automorphism lifts."""
    _report(verify.run_pipeline(p, samples, seed, prefixes=("group.", "cli.", "paper.")),
            as_json, None)


@group.command("report")
@p_option
@seed_option
def group_report(p, seed):
    """Print order, class, rank, exponent and subgroup dimensions as JSON."""
    _emit(pg.structure_report(pg.PGroupContext.build(p), seed=seed).to_json(), None)


@main.command()
@p_option
@samples_option
@seed_option
@out_option
@json_option
def cert(p, samples, seed, out, as_json):
    """Run the full pipeline and emit a certificate."""
    try:
        certificate = verify.run_pipeline(p, samples, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    _report(certificate, as_json, out)


@main.command()
@click.argument("what", type=click.Choice(verify.EXPORT_KINDS))
@p_option
@samples_option
@seed_option
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def export(what, p, samples, seed, out):
    """Write one artifact (table, u, matrices, cert) to a JSON file."""
    try:
        verify.export(what, out, p=p, seed=seed, samples=samples)
    except OSError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(out)


if __name__ == "__main__":
    main()
