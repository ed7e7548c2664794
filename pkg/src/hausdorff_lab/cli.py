"""Batch command-line front end.

Commands: ``generate`` (fractal sets to CSV), ``measure`` (pre-measure
sweeps), ``dimension`` (moran / box / scan estimators), ``verify``
(randomized property suites), ``report`` (figures + combined CSV from sweep
files).

Exit codes: 0 success, 1 verification failure, 2 usage or malformed-data
error, 3 I/O error.  Every command is deterministic given its full flag set;
numeric output carries 17 significant digits.  The HAUSDORFF_LAB_THREADS
environment variable caps sweep parallelism.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import click
import numpy as np

from . import dimension as dim_mod
from . import fractals, report as report_mod, verify as verify_mod
from .dimension import (
    box_counting_dimension,
    critical_exponent_scan,
    moran_dimension,
)
from .gauge import OuterMeasureTable
from .measure import (
    SWEEP_HEADER,
    geometric_schedule,
    scale_sweep,
    sweep_from_csv,
    sweep_to_csv,
)
from .sets import CsvFormatError, IntervalSet, PointCloud, format_g17


class IOFailure(click.ClickException):
    exit_code = 3


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def _load_intervals(path: str) -> IntervalSet:
    try:
        return IntervalSet.from_csv(_read_text(path))
    except CsvFormatError as exc:
        raise click.UsageError(f"{path}: {exc}") from exc


def _load_cloud(path: str) -> PointCloud:
    try:
        return PointCloud.from_csv(_read_text(path))
    except CsvFormatError as exc:
        raise click.UsageError(f"{path}: {exc}") from exc


def _schedule_from_flags(eps_start, eps_ratio, count, eps_list) -> list[float]:
    if eps_list:
        try:
            vals = [float(v) for v in eps_list.split(",") if v.strip()]
        except ValueError as exc:
            raise click.UsageError(f"bad --eps-list: {exc}") from exc
        if len(vals) < 3:
            raise click.UsageError("--eps-list needs at least 3 scales")
        return vals
    if eps_start is None:
        raise click.UsageError("provide --eps-start/--eps-ratio/--count or --eps-list")
    try:
        return geometric_schedule(eps_start, eps_ratio, count)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


@click.group()
def cli():
    """Hausdorff measure and dimension toolkit."""


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


@cli.command()
@click.option("--preset", type=str, default=None,
              help="named generator: cantor, sierpinski-triangle, sierpinski-carpet, koch-points")
@click.option("--ifs", "ifs_src", type=str, default=None,
              help="IFS preset name or config file path")
@click.option("--depth", type=int, default=1, show_default=True,
              help="prefractal depth / deterministic iteration count")
@click.option("--as", "as_kind", type=click.Choice(["intervals", "endpoints"]),
              default="intervals", show_default=True)
@click.option("--chaos", type=int, default=None, help="sample N chaos-game points")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, required=True, help="output CSV path")
def generate(preset, ifs_src, depth, as_kind, chaos, seed, out):
    """Write a fractal set (intervals or a point cloud) to CSV."""
    if preset == "cantor" and as_kind == "intervals":
        iset = fractals.cantor_prefractal(depth)
        _write_atomic(out, iset.to_csv())
        hull = iset.hull
        hull_txt = f"[{format_g17(hull[0])},{format_g17(hull[1])}]" if hull else "[]"
        click.echo(
            f"count={len(iset)} length={format_g17(iset.lebesgue_length())} hull={hull_txt}"
        )
        return
    if preset == "cantor" and as_kind == "endpoints":
        cloud = fractals.cantor_endpoints(depth)
        _write_atomic(out, cloud.to_csv())
        box = cloud.hull_box()
        click.echo(f"count={len(cloud)} hull={box}")
        return
    name = ifs_src or preset
    if name is None:
        raise click.UsageError("need --preset or --ifs")
    if os.path.exists(name):
        ifs = fractals.IFS.from_text(_read_text(name))
    else:
        try:
            ifs = fractals.preset_ifs(name)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    if chaos is not None:
        cloud = fractals.chaos_game(ifs, chaos, seed)
    else:
        seed_cloud = _fixed_point_cloud(ifs)
        cloud = fractals.ifs_deterministic(ifs, seed_cloud, depth)
    _write_atomic(out, cloud.to_csv())
    click.echo(f"count={len(cloud)} hull={cloud.hull_box()}")


def _fixed_point_cloud(ifs: fractals.IFS) -> PointCloud:
    """Each map's fixed point, x = (I - rQ)^-1 t; all lie on the attractor."""
    d = ifs.ambient_dim
    pts = []
    for f in ifs.maps:
        q = np.array([[float(v) for v in row] for row in f.orthogonal_part])
        t = np.array([float(v) for v in f.translation])
        x = np.linalg.solve(np.eye(d) - float(f.ratio) * q, t)
        pts.append(tuple(x))
    return PointCloud(pts, ambient_dim=d)


# ---------------------------------------------------------------------------
# measure
# ---------------------------------------------------------------------------


@cli.command("measure")
@click.option("--in", "in_path", type=str, required=True)
@click.option("--kind", type=click.Choice(["intervals", "cloud"]), default="intervals",
              show_default=True)
@click.option("--s", "s_value", type=float, required=True, help="exponent s")
@click.option("--eps-start", type=float, default=None)
@click.option("--eps-ratio", type=float, default=0.5, show_default=True)
@click.option("--count", type=int, default=8, show_default=True)
@click.option("--eps-list", type=str, default=None, help="comma-separated scales")
@click.option("--out", type=str, default=None, help="sweep CSV path")
@click.option("--json", "as_json", is_flag=True, help="emit JSON instead of CSV")
def measure_cmd(in_path, kind, s_value, eps_start, eps_ratio, count, eps_list, out, as_json):
    """Evaluate the pre-measure along a decreasing scale schedule."""
    schedule = _schedule_from_flags(eps_start, eps_ratio, count, eps_list)
    if kind == "intervals":
        target = _load_intervals(in_path)
    else:
        target = _load_cloud(in_path)
    try:
        sweep = scale_sweep(target, s_value, schedule)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if as_json:
        doc = {
            "trend": sweep.trend,
            "rows": [
                {
                    "eps": eps,
                    "s": m.exponent_s,
                    "value": m.value,
                    "method": m.method,
                    "is_exact": m.is_exact,
                }
                for eps, m in sweep.entries
            ],
        }
        payload = json.dumps(doc, indent=2) + "\n"
    else:
        payload = sweep_to_csv(sweep)
    if out:
        _write_atomic(out, payload)
    else:
        click.echo(payload, nl=False)
    vals = sweep.values
    click.echo(
        f"sweep: {len(vals)} scales, trend={sweep.trend}, "
        f"last={format_g17(vals[-1]) if vals else 'n/a'}",
        err=False,
    )


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------


@cli.command("dimension")
@click.option("--moran", "moran_ratios", type=str, default=None,
              help="comma-separated contraction ratios")
@click.option("--box", "use_box", is_flag=True)
@click.option("--scan", "use_scan", is_flag=True)
@click.option("--in", "in_path", type=str, default=None)
@click.option("--kind", type=click.Choice(["intervals", "cloud"]), default="cloud",
              show_default=True)
@click.option("--s-grid", type=str, default=None, help="comma-separated exponents (scan)")
@click.option("--eps-start", type=float, default=None)
@click.option("--eps-ratio", type=float, default=0.5, show_default=True)
@click.option("--count", type=int, default=6, show_default=True)
@click.option("--eps-list", type=str, default=None)
@click.option("--out", type=str, default=None, help="dimension report CSV path")
@click.option("--scales-out", type=str, default=None, help="per-scale CSV path")
@click.option("--json", "as_json", is_flag=True)
def dimension_cmd(moran_ratios, use_box, use_scan, in_path, kind, s_grid,
                  eps_start, eps_ratio, count, eps_list, out, scales_out, as_json):
    """Estimate a dimension by the moran, box, or scan method."""
    chosen = [m for m, flag in
              [("moran", moran_ratios is not None), ("box", use_box), ("scan", use_scan)]
              if flag]
    if len(chosen) != 1:
        raise click.UsageError("choose exactly one of --moran, --box, --scan")
    method = chosen[0]
    per_scale_rows: list[str] = []

    if method == "moran":
        try:
            ratios = [float(v) for v in moran_ratios.split(",") if v.strip()]
            est = moran_dimension(ratios)
        except (ValueError, ArithmeticError) as exc:
            raise click.UsageError(str(exc)) from exc
    elif method == "box":
        if not in_path:
            raise click.UsageError("--box needs --in <cloud.csv>")
        cloud = _load_cloud(in_path)
        schedule = _schedule_from_flags(eps_start, eps_ratio, count, eps_list)
        try:
            est = box_counting_dimension(cloud, schedule)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
        for e, c in zip(est.diagnostics["scales"], est.diagnostics["counts"]):
            per_scale_rows.append(
                f"{format_g17(e)},nan,{format_g17(c)},box-cover,false"
            )
    else:
        if not in_path:
            raise click.UsageError("--scan needs --in <set file>")
        target = _load_intervals(in_path) if kind == "intervals" else _load_cloud(in_path)
        if not s_grid:
            raise click.UsageError("--scan needs --s-grid")
        try:
            grid = [float(v) for v in s_grid.split(",") if v.strip()]
            schedule = _schedule_from_flags(eps_start, eps_ratio, count, eps_list)
            est = critical_exponent_scan(target, grid, schedule)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
        for s_probe in est.diagnostics["s_grid"]:
            sweep = scale_sweep(target, s_probe, schedule)
            for eps, m in sweep.entries:
                per_scale_rows.append(
                    f"{format_g17(eps)},{format_g17(m.exponent_s)},"
                    f"{format_g17(m.value)},{m.method},{str(m.is_exact).lower()}"
                )

    if as_json:
        d = est.diagnostics
        doc = {"method": est.method, "value": est.value}
        if "bracket" in d:
            doc["lo"], doc["hi"] = d["bracket"]
        if "regression" in d:
            reg = d["regression"]
            doc["r_squared"] = None if math.isnan(reg.r_squared) else reg.r_squared
            doc["n_scales"] = reg.n_points
        payload = json.dumps(doc, indent=2) + "\n"
    else:
        payload = dim_mod.dimension_report_csv(est)
    if out:
        _write_atomic(out, payload)
    if per_scale_rows and scales_out:
        _write_atomic(scales_out, SWEEP_HEADER + "\n" + "\n".join(per_scale_rows) + "\n")
    click.echo(f"dimension[{est.method}] = {format_g17(est.value)}")
    if not out:
        click.echo(payload, nl=False)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@cli.command("verify")
@click.option("--suite", type=click.Choice(sorted(verify_mod.SUITES)), required=True)
@click.option("--n", "n_points", type=int, default=6, show_default=True)
@click.option("--trials", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--depth", type=int, default=8, show_default=True)
@click.option("--table", "table_path", type=str, default=None,
              help="outer-measure table CSV to check (axioms suite)")
@click.pass_context
def verify_cmd(ctx, suite, n_points, trials, seed, depth, table_path):
    """Run a named property suite over seeded randomized instances."""
    kwargs = {}
    if suite == "cantor":
        kwargs["depth"] = depth
    elif suite == "axioms":
        kwargs.update(n=n_points, trials=trials, seed=seed)
        if table_path:
            try:
                kwargs["table"] = OuterMeasureTable.from_csv(_read_text(table_path))
            except CsvFormatError as exc:
                raise click.UsageError(f"{table_path}: {exc}") from exc
    elif suite in ("caratheodory", "metric"):
        kwargs.update(n=n_points, trials=trials, seed=seed)
    else:
        kwargs.update(trials=trials, seed=seed)
    rep = verify_mod.run_suite(suite, **kwargs)
    for line in rep.lines():
        click.echo(line)
    if not rep.passed:
        ctx.exit(1)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@cli.command("report")
@click.option("--in", "in_paths", type=str, multiple=True, required=True,
              help="sweep CSV file(s); repeatable")
@click.option("--out", type=str, default=None, help="combined sweep CSV path")
@click.option("--fig", type=str, required=True, help="figure output path (png/pdf/svg)")
@click.option("--title", type=str, default="")
def report_cmd(in_paths, out, fig, title):
    """Render sweep CSVs as a log-log figure, with a combined CSV alongside."""
    sweeps = []
    for p in in_paths:
        try:
            sweeps.append((os.path.basename(p), sweep_from_csv(_read_text(p))))
        except CsvFormatError as exc:
            raise click.UsageError(f"{p}: {exc}") from exc
    try:
        report_mod.plot_sweeps(sweeps, fig, title=title)
    except OSError as exc:
        raise IOFailure(f"cannot write figure {fig}: {exc}") from exc
    if out:
        rows = [SWEEP_HEADER]
        for _, sweep in sweeps:
            for line in sweep_to_csv(sweep).splitlines()[1:]:
                rows.append(line)
        _write_atomic(out, "\n".join(rows) + "\n")
    click.echo(f"report: {len(sweeps)} sweep(s) -> {fig}")


def main():
    cli(prog_name="hausdorff-lab")


if __name__ == "__main__":
    main()
