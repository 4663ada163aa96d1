"""Command-line surface: gen / split / metrics / certify / anneal / pareto /
oracle / serve.

Exit codes: 0 on success, 1 on usage errors (bad flags), 2 on domain errors
(infeasible or invalid inputs).  Domain failures print a single
machine-parsable line ``error: <message>`` to stderr.
"""

from __future__ import annotations

import sys

import click

from .anneal import AnnealConfig, anneal as run_anneal, pareto_sweep
from .certifier import (
    TheoremParams,
    brute_force_oracle,
    construct_witness,
    verify_witness,
    witness_electorate,
)
from .electorate import LatticeParams, generate_lattice_electorate, load_electorate, save_electorate
from .errors import GerrylabError
from .fileio import (
    load_plan,
    render_certification,
    render_oracle,
    render_pareto,
    render_report,
    render_trace,
    save_plan,
)
from .metrics import DesiderataParams, plan_report
from .service import DEFAULT_PORT, serve as run_serve
from .splitline import SplitlineConfig, shortest_splitline

__all__ = ["cli", "main"]


@click.group()
def cli() -> None:
    """Redistricting lab: metrics, witnesses, splitline, annealing, service."""


@cli.command()
@click.option("--n", type=int, required=True, help="epsilon-squares per side")
@click.option("--l", type=int, required=True, help="voters per square side")
@click.option("--a", type=int, required=True, help="A-voters per square")
@click.option("--b", type=int, required=True, help="B-voters per square")
@click.option("--pattern", default="row_major", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def gen(n: int, l: int, a: int, b: int, pattern: str, out: str) -> None:
    """Write a striped lattice electorate file."""
    e = generate_lattice_electorate(LatticeParams(n=n, l=l, a=a, b=b, pattern=pattern))
    save_electorate(e, out)
    click.echo(f"wrote {out}: {e.a_count} A / {e.b_count} B voters")


@cli.command()
@click.option("--electorate", "electorate_path", type=click.Path(exists=False), required=True)
@click.option("--k", type=int, required=True)
@click.option("--g", type=int, required=True)
@click.option("--angle-steps", type=int, default=180, show_default=True)
@click.option("--pop-tolerance", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--figure", type=click.Path(dir_okay=False), default=None)
def split(
    electorate_path: str,
    k: int,
    g: int,
    angle_steps: int,
    pop_tolerance: int,
    out: str,
    figure: str | None,
) -> None:
    """Run the shortest-splitline districter and write a plan file."""
    e = load_electorate(electorate_path)
    cfg = SplitlineConfig(angle_steps=angle_steps, population_tolerance=pop_tolerance)
    plan = shortest_splitline(e, k, g, cfg)
    save_plan(plan, out)
    rep = plan_report(e, plan)
    click.echo(
        f"wrote {out}: seats {rep.seats_a}-{rep.seats_b}-{rep.ties}, "
        f"eg {rep.eg} ({float(rep.eg):.4f}), delta {float(rep.delta_achieved):.4f}, "
        f"min_pp {rep.min_pp:.4f}"
    )
    if figure is not None:
        from .figures import plot_plan

        plot_plan(e, plan, figure, title=f"splitline k={k} g={g}")
        click.echo(f"wrote {figure}")


def _desiderata_params(delta, compactness_c, alpha, beta) -> DesiderataParams:
    defaults = DesiderataParams()
    return DesiderataParams(
        delta=defaults.delta if delta is None else delta,
        compactness_c=defaults.compactness_c if compactness_c is None else compactness_c,
        alpha=defaults.alpha if alpha is None else alpha,
        beta=defaults.beta if beta is None else beta,
    )


@cli.command()
@click.option("--electorate", "electorate_path", required=True)
@click.option("--plan", "plan_path", required=True)
@click.option("--delta", type=float, default=None, help="balance threshold (i)")
@click.option("--compactness-c", type=float, default=None, help="perimeter^2 <= C*area (ii)")
@click.option("--alpha", type=float, default=None, help="|EG| < 1/2 - alpha (iii)")
@click.option("--beta", type=float, default=None, help="(iii) binds below this imbalance")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--figure", type=click.Path(dir_okay=False), default=None)
def metrics(
    electorate_path: str,
    plan_path: str,
    delta: float | None,
    compactness_c: float | None,
    alpha: float | None,
    beta: float | None,
    out: str | None,
    figure: str | None,
) -> None:
    """Score a plan file and print the full report."""
    e = load_electorate(electorate_path)
    plan = load_plan(plan_path)
    rep = plan_report(e, plan, _desiderata_params(delta, compactness_c, alpha, beta))
    text = render_report(rep)
    click.echo(text, nl=False)
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if figure is not None:
        from .figures import plot_plan

        plot_plan(e, plan, figure)
        click.echo(f"wrote {figure}")


@cli.command()
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--compactness-c", type=float, default=18.5, show_default=True)
@click.option("--alpha", type=float, default=0.42, show_default=True)
@click.option("--beta", type=float, default=0.58, show_default=True)
@click.option("--g", type=int, default=24, show_default=True, help="plan grid resolution")
@click.option("--angle-steps", type=int, default=180, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--figure", type=click.Path(dir_okay=False), default=None)
def certify(
    k: int,
    delta: float,
    compactness_c: float,
    alpha: float,
    beta: float,
    g: int,
    angle_steps: int,
    out: str | None,
    figure: str | None,
) -> None:
    """Construct an impossibility witness and certify it against a splitline plan."""
    params = TheoremParams(delta=delta, compactness_c=compactness_c, alpha=alpha, beta=beta, k=k)
    witness = construct_witness(params)
    e = witness_electorate(witness)
    # One lattice line of tolerance lets the splitter keep cuts straight
    # (relative quota miss ~2/(nl)), capped so the per-district drift stays
    # inside the delta budget; at delta=0 splits stay as exact as possible.
    tol = min(witness.n * witness.l, int(delta * e.total / (2 * k)))
    cfg = SplitlineConfig(angle_steps=angle_steps, population_tolerance=tol)
    plan = shortest_splitline(e, k, g, cfg)
    report = verify_witness(witness, params, plan, e)
    text = render_certification(report)
    click.echo(text, nl=False)
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if figure is not None:
        from .figures import plot_plan

        plot_plan(e, plan, figure, title=f"witness n={witness.n} l={witness.l}")
        click.echo(f"wrote {figure}")


@cli.command(name="anneal")
@click.option("--electorate", "electorate_path", required=True)
@click.option("--k", type=int, required=True)
@click.option("--g", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--steps", type=int, default=200_000, show_default=True)
@click.option("--t-initial", type=float, default=0.30, show_default=True)
@click.option("--t-final", type=float, default=1e-4, show_default=True)
@click.option("--lambda-pop", type=float, default=10.0, show_default=True)
@click.option("--lambda-pp", type=float, default=20.0, show_default=True)
@click.option("--lambda-conn", type=float, default=0.0, show_default=True)
@click.option("--pp-floor", type=float, default=0.10, show_default=True)
@click.option("--delta-cap", type=float, default=0.05, show_default=True)
@click.option("--trace-every", type=int, default=1000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--trace-out", type=click.Path(dir_okay=False), default=None)
@click.option("--figure", type=click.Path(dir_okay=False), default=None)
@click.option("--trace-figure", type=click.Path(dir_okay=False), default=None)
def anneal_cmd(
    electorate_path: str,
    k: int,
    g: int,
    seed: int,
    steps: int,
    t_initial: float,
    t_final: float,
    lambda_pop: float,
    lambda_pp: float,
    lambda_conn: float,
    pp_floor: float,
    delta_cap: float,
    trace_every: int,
    out: str,
    trace_out: str | None,
    figure: str | None,
    trace_figure: str | None,
) -> None:
    """Anneal toward a low-|EG| plan and write it out."""
    e = load_electorate(electorate_path)
    cfg = AnnealConfig(
        seed=seed,
        steps=steps,
        t_initial=t_initial,
        t_final=t_final,
        lambda_pop=lambda_pop,
        lambda_pp=lambda_pp,
        lambda_conn=lambda_conn,
        pp_floor=pp_floor,
        delta_cap=delta_cap,
        trace_every=trace_every,
    )
    result = run_anneal(e, k, g, cfg)
    save_plan(result.plan, out)
    rep = plan_report(e, result.plan)
    click.echo(
        f"wrote {out}: best objective {result.best_objective:.6f}, "
        f"eg {rep.eg} ({float(rep.eg):.4f}), min_pp {rep.min_pp:.4f}, "
        f"delta {float(rep.delta_achieved):.4f}, seats {rep.seats_a}-{rep.seats_b}-{rep.ties}"
    )
    if trace_out is not None:
        with open(trace_out, "w", encoding="utf-8") as fh:
            fh.write(render_trace(result.trace))
        click.echo(f"wrote {trace_out}")
    if figure is not None:
        from .figures import plot_plan

        plot_plan(e, result.plan, figure, title=f"annealed plan (pp floor {pp_floor})")
        click.echo(f"wrote {figure}")
    if trace_figure is not None:
        from .figures import plot_trace

        plot_trace(result.trace, trace_figure)
        click.echo(f"wrote {trace_figure}")


@cli.command()
@click.option("--electorate", "electorate_path", required=True)
@click.option("--k", type=int, required=True)
@click.option("--g", type=int, required=True)
@click.option("--floors", required=True, help="comma-separated pp floors, descending")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--steps", type=int, default=200_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--figure", type=click.Path(dir_okay=False), default=None)
def pareto(
    electorate_path: str,
    k: int,
    g: int,
    floors: str,
    seed: int,
    steps: int,
    out: str | None,
    figure: str | None,
) -> None:
    """Sweep compactness floors and report the |EG| tradeoff."""
    try:
        floor_values = [float(tok) for tok in floors.split(",") if tok.strip()]
    except ValueError as exc:
        raise click.UsageError(f"bad --floors value: {exc}") from exc
    e = load_electorate(electorate_path)
    cfg = AnnealConfig(seed=seed, steps=steps)
    points = pareto_sweep(e, k, g, floor_values, cfg)
    text = render_pareto(points)
    click.echo(text, nl=False)
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if figure is not None:
        from .figures import plot_pareto

        plot_pareto(points, figure)
        click.echo(f"wrote {figure}")


@cli.command()
@click.option("--electorate", "electorate_path", required=True)
@click.option("--k", type=int, required=True)
@click.option("--g", type=int, required=True)
@click.option("--delta", type=float, default=0.05, show_default=True)
@click.option("--compactness-c", type=float, default=18.5, show_default=True)
@click.option("--alpha", type=float, default=0.42, show_default=True)
@click.option("--beta", type=float, default=0.58, show_default=True)
def oracle(
    electorate_path: str,
    k: int,
    g: int,
    delta: float,
    compactness_c: float,
    alpha: float,
    beta: float,
) -> None:
    """Exhaustively enumerate toy plans and summarize the survivors."""
    e = load_electorate(electorate_path)
    params = TheoremParams(delta=delta, compactness_c=compactness_c, alpha=alpha, beta=beta, k=k)
    summary = brute_force_oracle(e, g, k, params)
    click.echo(render_oracle(summary), nl=False)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None, help=f"default GERRYLAB_PORT or {DEFAULT_PORT}")
def serve(host: str, port: int | None) -> None:
    """Start the HTTP session service."""
    run_serve(host=host, port=port)


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        print(f"error: {exc.format_message()}", file=sys.stderr)
        return 1
    except click.Abort:
        print("error: aborted", file=sys.stderr)
        return 1
    except (GerrylabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
