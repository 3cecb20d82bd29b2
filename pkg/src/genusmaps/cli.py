"""Command-line surface.

Commands: constants, maps, graphs, oracle, check.  Default output is JSON;
the census is also exportable as CSV.  Exit codes: 0 success, 1 check
failure, 2 usage error, 3 domain error, 4 resource guard.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click
import genusmaps
from genusmaps.numeric import (
    DEFAULT_PRECISION,
    BracketError,
    DomainError,
    ResourceLimitError,
)
from genusmaps import constants as const
from genusmaps import graphcounts as gc
from genusmaps import mapcounts as mc
from genusmaps import oracle as orc
from genusmaps.checks import run_suite

EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_RESOURCE = 4


def _default_prec() -> int:
    env = os.environ.get("GENUS_ASYM_PREC")
    if env:
        try:
            value = int(env)
            if value <= 0:
                raise ValueError
            return value
        except ValueError:
            raise click.UsageError(
                f"GENUS_ASYM_PREC must be a positive integer, got {env!r}")
    return DEFAULT_PRECISION


def _record(command: str, inputs: dict, outputs: list, prec: int) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "precision_bits": prec,
        "version": genusmaps.__version__,
    }


def _out(name: str, value: str, provenance: str, log10=None, **extra) -> dict:
    rec = {"name": name, "value": value, "provenance": provenance}
    if log10 is not None:
        rec["log10"] = log10
    rec.update(extra)
    return rec


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(record, indent=2, sort_keys=True))
    elif fmt == "csv":
        click.echo("name,value,provenance,log10")
        for o in record["outputs"]:
            click.echo(f"{o['name']},{o['value']},{o['provenance']},"
                       f"{o.get('log10', '')}")
    else:
        for o in record["outputs"]:
            extra = f"  (log10 = {o['log10']})" if "log10" in o else ""
            click.echo(f"{o['name']} = {o['value']}  [{o['provenance']}]{extra}")


def _logmag_outputs(name: str, value, provenance: str, digits: int = 12) -> dict:
    return _out(name, value.scientific(digits), provenance,
                log10=value.log10().to_decimal(digits + 6))


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv", "text"]),
    default="json", show_default=True, help="Output format.")
prec_option = click.option(
    "--prec", type=int, default=None,
    help="Working precision in bits (default 256, or GENUS_ASYM_PREC).")


@click.group()
@click.version_option(version=genusmaps.__version__)
def main():
    """Asymptotic map/graph enumeration on orientable surfaces."""


@main.command("constants")
@click.option("--tg", type=int, default=None, help="Emit t_g for this genus.")
@click.option("--pg", type=int, default=None,
              help="Emit the conjectured p_g for this index.")
@click.option("--v0", type=str, default=None,
              help="Base value v_0 for the p_g recursion (required with --pg).")
@click.option("--graph-constants", is_flag=True,
              help="Emit the full x_k/alpha_k/beta_k table.")
@format_option
@prec_option
def cmd_constants(tg, pg, v0, graph_constants, fmt, prec):
    """High-precision constants: t_g, p_g, and the graph-count table."""
    prec = prec or _default_prec()
    outputs = []
    if tg is None and pg is None and not graph_constants:
        raise click.UsageError("choose one of --tg, --pg, --graph-constants")
    try:
        if tg is not None:
            value = const.compute_t(tg, prec)
            outputs.append(_out(f"t_{tg}", value.to_decimal(), "exact-recursion"))
        if pg is not None:
            if v0 is None:
                raise click.UsageError(
                    "--pg requires --v0: the recursion's base value v_0 is "
                    "a required input (it is not determined by the recursion)")
            value = const.compute_p(pg, Fraction(v0), prec)
            outputs.append(_out(f"p_{pg}", value.to_decimal(), "conjectured",
                                conjectured=True))
        if graph_constants:
            chain = gc.constants_chain(prec)
            for rec in chain.table().as_records():
                outputs.append(_out(rec["name"], rec["value"],
                                    rec["provenance"]))
    except (DomainError, BracketError) as exc:
        click.echo(f"domain error: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)
    inputs = {"tg": tg, "pg": pg, "v0": v0, "graph_constants": graph_constants}
    _emit(_record("constants", inputs, outputs, prec), fmt)


def _density_guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (DomainError, BracketError) as exc:
        click.echo(f"domain error: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)


@main.command("maps")
@click.option("--genus", "-g", type=int, required=True)
@click.option("--connectivity", "-k", type=int, required=True)
@click.option("--n", "-n", type=int, required=True, help="Vertices.")
@click.option("--m", "-m", type=int, default=None, help="Edges.")
@click.option("--mean-edges", "want_mean", is_flag=True)
@click.option("--variance", "want_var", is_flag=True)
@format_option
@prec_option
def cmd_maps(genus, connectivity, n, m, want_mean, want_var, fmt, prec):
    """Asymptotic rooted k-connected map counts on a genus-g surface."""
    prec = prec or _default_prec()
    outputs = []
    if m is not None:
        def run():
            q = mc.CountQuery(g=genus, k=connectivity, n=n, m=m)
            return mc.map_estimate(q, prec)
        est, value = _density_guard(run)
        outputs.append(_logmag_outputs("map_count", value, "closed-form"))
        outputs.extend([
            _out("r", est.r.to_decimal(12), "root-solve"),
            _out("amplitude", est.amplitude.to_decimal(12), "closed-form"),
            _out("extra_factor", est.extra_factor.to_decimal(12), "closed-form"),
            _out("n_exponent", est.n_exponent.to_decimal(6), "closed-form"),
            _out("per_vertex_base", est.per_vertex_base.to_decimal(12),
                 "closed-form"),
            _out("per_edge_base", est.per_edge_base.to_decimal(12),
                 "closed-form"),
        ])
    if want_mean:
        value = _density_guard(mc.mean_edges, genus, connectivity, n, prec)
        outputs.append(_out("mean_edges", value.to_decimal(12), "root-solve"))
    if want_var:
        value = _density_guard(mc.edge_variance, genus, connectivity, n, prec)
        outputs.append(_out("edge_variance", value.to_decimal(12), "root-solve"))
    if not outputs:
        raise click.UsageError("provide --m and/or --mean-edges/--variance")
    inputs = {"genus": genus, "connectivity": connectivity, "n": n, "m": m}
    _emit(_record("maps", inputs, outputs, prec), fmt)


@main.command("graphs")
@click.option("--genus", "-g", type=int, required=True)
@click.option("--connectivity", "-k", type=int, required=True)
@click.option("--n", "-n", type=int, required=True, help="Vertices.")
@click.option("--m", "-m", type=int, default=None, help="Edges.")
@click.option("--vertices-only", is_flag=True,
              help="Count by vertices alone via the x_k/alpha_k/beta_k chain.")
@format_option
@prec_option
def cmd_graphs(genus, connectivity, n, m, vertices_only, fmt, prec):
    """Asymptotic labelled k-connected graph counts (per n!)."""
    prec = prec or _default_prec()
    outputs = []
    if vertices_only:
        result = _density_guard(gc.graphs_by_vertices, genus, connectivity,
                                n, prec)
        outputs.append(_logmag_outputs(
            "graph_count_over_nfact", result.value,
            "paper-numeric" if connectivity <= 1 else "closed-form",
            ))
        outputs.append(_out("externally_sourced",
                            str(result.externally_sourced), "closed-form"))
    elif m is not None:
        if connectivity == 3:
            value = _density_guard(gc.graphs_3conn, genus, n, m, prec)
        elif connectivity == 2:
            value = _density_guard(gc.graphs_2conn, genus, n, m, prec)
        else:
            raise click.UsageError(
                "bivariate graph counts cover k in {2, 3}; "
                "use --vertices-only for k in {0, 1}")
        outputs.append(_logmag_outputs("graph_count_over_nfact", value,
                                       "closed-form"))
    else:
        raise click.UsageError("provide --m or --vertices-only")
    inputs = {"genus": genus, "connectivity": connectivity, "n": n, "m": m,
              "vertices_only": vertices_only}
    _emit(_record("graphs", inputs, outputs, prec), fmt)


@main.command("oracle")
@click.option("--edges", type=int, required=True,
              help="Census all maps with up to this many edges (max 5).")
@click.option("--allow-large", is_flag=True, help="Enable edges=6.")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False),
              default=None, help="Write the census CSV here.")
@format_option
def cmd_oracle(edges, allow_large, workers, out_file, fmt):
    """Exact census of rooted maps by (edges, vertices, faces, genus,
    connectivity)."""
    try:
        entries = orc.census(edges, workers=workers, allow_large=allow_large)
    except ResourceLimitError as exc:
        click.echo(f"resource guard: {exc}", err=True)
        sys.exit(EXIT_RESOURCE)
    except DomainError as exc:
        click.echo(f"domain error: {exc}", err=True)
        sys.exit(EXIT_DOMAIN)
    csv_text = orc.to_csv(entries)
    if out_file:
        with open(out_file, "w") as fh:
            fh.write(csv_text)
    if fmt == "csv":
        click.echo(csv_text, nl=False)
        return
    totals = orc.totals_by(entries)
    # genus breakdown at the requested edge count (census rows below it are
    # still in the CSV)
    by_genus = {}
    for e in entries:
        if e.edges != edges:
            continue
        key = f"genus_{e.genus}"
        by_genus[key] = by_genus.get(key, 0) + e.count
    outputs = [
        _out("total_rooted_maps", str(sum(totals.values())), "census"),
        *[_out(f"total_m_{m}", str(c), "census")
          for m, c in sorted(totals.items())],
        *[_out(name, str(c), "census") for name, c in sorted(by_genus.items())],
    ]
    inputs = {"edges": edges, "workers": workers, "allow_large": allow_large,
              "out": out_file}
    _emit(_record("oracle", inputs, outputs, 0), fmt)


@main.command("check")
@click.option("--suite", type=click.Choice(
    ["all", "constants", "identities", "oracle", "convergence"]),
    default="all", show_default=True)
@format_option
def cmd_check(suite, fmt):
    """Run the self-check suites; nonzero exit when any criterion fails."""
    results = run_suite(suite)
    if fmt == "json":
        click.echo(json.dumps(
            {"suite": suite, "results": [r.as_dict() for r in results],
             "passed": all(r.passed for r in results)},
            indent=2, sort_keys=True))
    else:
        for r in results:
            click.echo(r.line())
    if not all(r.passed for r in results):
        sys.exit(EXIT_CHECK_FAILURE)


if __name__ == "__main__":
    main()
