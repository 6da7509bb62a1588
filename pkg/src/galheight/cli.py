"""Command-line entry point.

Contract: exit 0 on success, 1 on a domain error (typed JSON envelope on
stderr), 2 on usage errors.  With --format json, stdout carries exactly
one JSON document and nothing else; identical invocations produce
byte-identical stdout.  Timings go to stderr.
"""

import functools
import json
import sys
import time

import click

from .errors import GalheightError
from . import finite_algebra as fa
from . import heights
from . import lmfdb_client as lmfdb
from . import matgroup as mg
from . import modforms
from . import ramification as ram


def domain_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except GalheightError as exc:
            click.echo(json.dumps(exc.to_json()), err=True)
            sys.exit(1)
    return wrapper


def emit(ctx, payload, table_fn=None):
    if ctx.obj["format"] == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(table_fn(payload) if table_fn else _kv_table(payload))


def _kv_table(payload, prefix=""):
    lines = []
    for key, val in payload.items():
        if isinstance(val, dict):
            lines.append(f"{prefix}{key}:")
            lines.append(_kv_table(val, prefix + "  "))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{prefix}{key}:")
            for item in val:
                lines.append(_kv_table(item, prefix + "  "))
                lines.append(prefix + "  -")
            lines.pop()
        else:
            lines.append(f"{prefix}{key}: {val}")
    return "\n".join(lines)


def _stopwatch(ctx, name, t0):
    click.echo(f"[time] {name}: {time.perf_counter() - t0:.3f}s", err=True)


@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "table"]),
              default="json", show_default=True, help="Output format.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker count for parallelizable steps; output is "
                   "deterministic regardless.")
@click.option("--offline", is_flag=True,
              help="Forbid all network access.")
@click.option("--base-url", default=None, help="Upstream database URL.")
@click.option("--cache-dir", default=None,
              type=click.Path(file_okay=False),
              help="Directory for raw response caching.")
@click.pass_context
def main(ctx, fmt, jobs, offline, base_url, cache_dir):
    """Verification toolkit: finite matrix groups, ramification profiles,
    height constants, and newform assumption scans."""
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, jobs=jobs, offline=offline,
                   base_url=base_url, cache_dir=cache_dir)


@main.group()
def groups():
    """Matrix-group verification commands."""


def _check(name, passed, **detail):
    row = {"name": name, "pass": bool(passed)}
    row.update(detail)
    return row


@groups.command("verify")
@click.option("--algebra", "spec_text", required=True,
              help="Algebra such as F5, F5xF5, F7[x]/x^2.")
@click.option("--k", type=int, default=2, show_default=True,
              help="Weight, sets the determinant subgroup for Ghat.")
@click.pass_context
@domain_errors
def groups_verify(ctx, spec_text, k):
    """Run the brute-force suite on one algebra: unit-square span, SL2
    and Ghat orders against closed forms, the normal closure of the
    diagonal SL2(F_p), and adjoint orbit spans of all base seeds."""
    t0 = time.perf_counter()
    A = fa.parse_algebra(spec_text)
    p = A.p
    expected = p >= 5  # the theorems assume p >= 5; smaller p is reported
    checks = []

    span, full = fa.span_of_unit_squares(A)
    checks.append(_check(
        "unit_square_span", full if expected else True,
        dim=span.dim, ambient=A.dim, full=full))

    G = mg.enumerate_SL2(A)
    checks.append(_check(
        "sl2_order", G.order == A.sl2_order(),
        order=G.order, closed_form=A.sl2_order()))

    Gh = mg.enumerate_ghat(A, k)
    want = A.sl2_order() * mg.s_value(p, k)
    checks.append(_check(
        "ghat_order", Gh.order == want, order=Gh.order, closed_form=want,
        k=k))

    Ap = fa.make_algebra([fa.prime_field(p)], p)
    diag = [mg.embed_diagonal(m, A) for m in mg.sl2_generators(Ap)]
    NC = mg.normal_closure(diag, G)
    eq = NC.order == G.order
    checks.append(_check(
        "normal_closure_diag_sl2", eq if expected else True,
        order=NC.order, sl2_order=G.order, equals_sl2=eq))

    seeds = full_count = 0
    for x in range(p):
        for y in range(p):
            for z in range(p):
                if x == y == z == 0:
                    continue
                seeds += 1
                seed = mg.Mat2(A, A.scalar(x), A.scalar(y), A.scalar(z),
                               A.scalar(-x % p))
                if mg.adjoint_orbit_span(seed).is_full():
                    full_count += 1
    all_full = full_count == seeds
    checks.append(_check(
        "adjoint_orbit_spans", all_full if expected else True,
        seeds=seeds, full_count=full_count, all_full=all_full))

    report = {
        "algebra": spec_text, "p": p, "dim": A.dim, "size": A.size,
        "k": k, "checks": checks,
        "ok": all(c["pass"] for c in checks),
    }
    _stopwatch(ctx, "groups verify", t0)
    emit(ctx, report)
    if not report["ok"]:
        sys.exit(1)


@main.command("ram")
@click.option("--p", type=int, required=True)
@click.option("--k", type=int, default=None,
              help="Weight; required for the modular tower.")
@click.option("--n", type=int, required=True, help="Tower level.")
@click.option("--tower", type=click.Choice(["modular", "cyclotomic"]),
              default="modular", show_default=True)
@click.pass_context
@domain_errors
def cmd_ram(ctx, p, k, n, tower):
    """Ramification profile of the level-n layer."""
    if tower == "cyclotomic":
        prof = ram.cyclo_profile(p, n)
    else:
        if k is None:
            raise click.UsageError("--k is required for the modular tower")
        prof = ram.ram_profile(p, k, n)
    emit(ctx, prof.to_json())


@main.command("bound")
@click.option("--p", type=int, required=True)
@click.option("--kind", type=click.Choice(["cyclotomic", "modular"]),
              required=True)
@click.option("--degk", type=int, default=None,
              help="Coefficient-field degree (modular kind).")
@click.pass_context
@domain_errors
def cmd_bound(ctx, p, kind, degk):
    """Explicit height lower-bound constants (lambda, c)."""
    bp = heights.bogomolov_bound(p, kind, degk)
    emit(ctx, bp.to_json())


@main.command("height")
@click.option("--coeffs", required=True,
              help="Integer coefficients, constant term first: '-2,1'.")
@click.pass_context
@domain_errors
def cmd_height(ctx, coeffs):
    """Weil height of the number defined by the given polynomial."""
    f = heights.AlgebraicNumber.parse(coeffs)
    if heights.is_root_of_unity(f):
        payload = {"poly": list(f.coeffs), "torsion": True,
                   "value": 0.0, "abs_error": 0.0}
    else:
        h = heights.weil_height(f)
        payload = {"poly": list(f.coeffs), "torsion": False,
                   "value": h.value, "abs_error": h.abs_error}
    emit(ctx, payload)


def _scan_table(payload):
    reports = [modforms.AssumptionReport(**r) for r in payload["reports"]]
    return modforms.render_table(reports)


@main.command("scan")
@click.option("--fixture", type=click.Path(exists=False), default=None,
              help="Path to a fixture file.")
@click.option("--label", default=None,
              help="Label of a shipped corpus form.")
@click.option("--pmax", type=int, default=60, show_default=True)
@click.pass_context
@domain_errors
def cmd_scan(ctx, fixture, label, pmax):
    """Assumption reports for every prime p <= pmax with a_p = 0."""
    t0 = time.perf_counter()
    if (fixture is None) == (label is None):
        raise click.UsageError("give exactly one of --fixture/--label")
    rec = lmfdb.load_fixture(fixture) if fixture \
        else lmfdb.load_corpus(label)
    reports = modforms.scan(rec, pmax)
    payload = {"label": rec.label, "level": rec.level,
               "weight": rec.weight, "p_max": pmax,
               "reports": [r.to_json() for r in reports]}
    _stopwatch(ctx, "scan", t0)
    emit(ctx, payload, _scan_table)


@main.command("fetch")
@click.option("--label", required=True)
@click.option("--nmax", type=int, default=100, show_default=True,
              help="Require coefficients through this index.")
@click.option("--save", "save_path", type=click.Path(), default=None,
              help="Also write a fixture file here.")
@click.pass_context
@domain_errors
def cmd_fetch(ctx, label, nmax, save_path):
    """Fetch one newform from the upstream database (or its cache)."""
    overrides = {"offline": ctx.obj["offline"]}
    if ctx.obj["base_url"]:
        overrides["base_url"] = ctx.obj["base_url"]
    if ctx.obj["cache_dir"]:
        overrides["cache_dir"] = ctx.obj["cache_dir"]
    cfg = lmfdb.ClientConfig.from_env(**overrides)
    rec = lmfdb.fetch_form(label, cfg, nmax=nmax)
    if save_path:
        lmfdb.save_fixture(rec, save_path)
    emit(ctx, lmfdb.record_to_dict(rec))


if __name__ == "__main__":
    main()
