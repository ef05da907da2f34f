"""Command-line front end: seeded, manifest-emitting workflows.

Exit codes: 0 success, 2 usage/input error, 3 incomplete numerical
evidence (partial results are still written).
"""

from __future__ import annotations

import json
import os
import re
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bounds import PRESETS, GluingSpec, asymptotic_base, glued_lower_bound, preset
from .catalog import get_entry, load_catalog
from .cayley import (
    build_cm_system,
    check_side_conditions,
    embedding_side_report,
    find_cm_square_subsystems,
)
from .graphs import (
    GEOMETRIES,
    RigidGraph,
    classify_last_move,
    enumerate_minimally_rigid,
)
from .manifest import RunManifest
from .sampler import (
    CouplerSubgraph,
    SearchConfig,
    curve_to_csv,
    find_coupler_subgraphs,
    heuristic_starts,
    linear_search,
    stochastic_walk,
    trace_coupler_curve,
    tree_search,
)
from .solve import count_real, monodromy_solve, parameter_homotopy
from .systems import LengthAssignment, lengths_from_file

EXIT_INPUT = 2
EXIT_INCOMPLETE = 3


def dumps17(obj, indent=None) -> str:
    """JSON with floats printed at 17 significant digits."""
    floats: list[str] = []

    def conv(o):
        if isinstance(o, bool) or o is None or isinstance(o, (int, str)):
            return o
        if isinstance(o, float):
            floats.append(f"{o:.17g}")
            return f"@@f{len(floats) - 1}@@"
        if isinstance(o, dict):
            return {k: conv(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [conv(v) for v in o]
        return o

    s = json.dumps(conv(obj), indent=indent)
    return re.sub(r'"@@f(\d+)@@"', lambda m: floats[int(m.group(1))], s)


def _load_graph(path) -> RigidGraph:
    try:
        with open(path) as fh:
            return RigidGraph.from_json_dict(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"cannot read graph file {path}: {exc}")


def _load_lengths(path) -> LengthAssignment:
    try:
        return lengths_from_file(path)
    except (OSError, ValueError, KeyError) as exc:
        raise click.UsageError(f"cannot read lengths file {path}: {exc}")


def _manifest(ctx, command, **arguments) -> RunManifest:
    return RunManifest(
        command=command,
        arguments={k: v for k, v in arguments.items() if v is not None},
        seed=arguments.get("seed"),
        version=__version__,
    )


def _finish(man: RunManifest, manifest_path, outputs=()):
    for p in outputs:
        man.add_output(p)
    man.write(manifest_path)


def _default_manifest_path(output, command):
    if output:
        return str(output) + ".manifest.json"
    return f"rigidembed-{command}.manifest.json"


@click.group()
@click.version_option(__version__)
@click.option("--threads", type=int, default=None, help="Path-tracking threads.")
def main(threads):
    """Rigid-graph embedding counting and maximization."""
    if threads is not None:
        os.environ["RIGID_EMBED_THREADS"] = str(threads)


# ---------------------------------------------------------------------------


@main.command("catalog")
@click.argument("name", required=False)
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_catalog(name, manifest_path):
    """List catalog entries, or dump one entry with its published lengths."""
    man = _manifest(None, "catalog", name=name)
    cat = load_catalog()
    if name is None:
        for e in cat:
            click.echo(
                f"{e.name:12s} {e.graph.geometry:7s} n={e.graph.n:2d} "
                f"complex={e.known_complex:4d} real={e.known_real:4d} "
                f"published={len(e.published)}"
            )
    else:
        try:
            e = get_entry(name)
        except KeyError:
            raise click.UsageError(f"unknown catalog entry {name!r}")
        doc = {
            "graph": e.graph.to_json_dict(),
            "known_complex": e.known_complex,
            "known_real": e.known_real,
            "metadata": e.metadata,
            "published_lengths": [
                dict(
                    p.lengths.to_json_dict(e.name),
                    id=p.id,
                    realized=p.realized,
                    **(
                        {"realized_filtered": p.realized_filtered}
                        if p.realized_filtered is not None
                        else {}
                    ),
                )
                for p in e.published
            ],
        }
        click.echo(dumps17(doc, indent=2))
    _finish(man, manifest_path or _default_manifest_path(None, "catalog"))


# ---------------------------------------------------------------------------


def _sphere_solve(G, lengths, seed, tau_im, known_count):
    gen = monodromy_solve(G, seed=seed, known_count=known_count)
    tgt = parameter_homotopy(gen, lengths, seed=seed)
    n_real, reals = count_real(tgt, tau_im)
    shape = tgt.shape
    filtered = 0
    for r in reals:
        pts = shape.vector_to_points(r.coordinates, tgt.lam2)
        if embedding_side_report(G, lengths, pts).ok:
            filtered += 1
    incomplete = tgt.incomplete or bool(gen.completeness.get("lower_bound_only"))
    return len(gen), n_real, filtered, tgt, incomplete


def _cm_solve(G, lengths, seed, tau_im, known_count):
    from .solve import cm_monodromy_solve

    subs = find_cm_square_subsystems(G, seed=seed)
    if not subs:
        raise click.UsageError("no Cayley-Menger square subsystem found")
    sub = subs[0]
    gen = cm_monodromy_solve(sub, seed=seed, known_count=known_count)
    tgt = parameter_homotopy(gen, lengths, seed=seed)
    n_real, reals = count_real(tgt, tau_im)
    cm = build_cm_system(sub, lengths)
    filtered = sum(
        1
        for r in reals
        if check_side_conditions(r.coordinates, cm.side_conditions).ok
    )
    incomplete = tgt.incomplete or bool(gen.completeness.get("lower_bound_only"))
    return len(gen), n_real, filtered, tgt, incomplete


@main.command("solve")
@click.argument("graph_file", type=click.Path(exists=True))
@click.argument("lengths_file", type=click.Path(exists=True))
@click.option("--geometry", type=click.Choice(GEOMETRIES), default=None)
@click.option(
    "--formulation", type=click.Choice(["sphere", "cm"]), default="sphere"
)
@click.option("--seed", type=int, default=0)
@click.option("--tau-im", type=float, default=1e-8)
@click.option("--known-count", type=int, default=None,
              help="Stop monodromy early at this complex count.")
@click.option("--solutions", "solutions_path", type=click.Path(), default=None,
              help="Write solutions as JSON lines.")
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_solve(graph_file, lengths_file, geometry, formulation, seed, tau_im,
              known_count, solutions_path, manifest_path):
    """Count complex/real embeddings at given edge lengths."""
    man = _manifest(None, "solve", graph_file=graph_file,
                    lengths_file=lengths_file, geometry=geometry,
                    formulation=formulation, seed=seed, tau_im=tau_im,
                    known_count=known_count)
    man.add_input(graph_file)
    man.add_input(lengths_file)
    G = _load_graph(graph_file)
    if geometry is not None:
        G = G.with_geometry(geometry)
    lengths = _load_lengths(lengths_file)
    try:
        lengths.check_graph(G)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    solver = _sphere_solve if formulation == "sphere" else _cm_solve
    try:
        n_complex, n_real, n_filtered, tgt, incomplete = solver(
            G, lengths, seed, tau_im, known_count
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(dumps17(
        {"complex": n_complex, "real": n_real, "real_filtered": n_filtered}
    ))
    outputs = []
    if solutions_path:
        with open(solutions_path, "w") as fh:
            for s in tgt.solutions(tau_im):
                fh.write(dumps17({
                    "coords": [[z.real, z.imag] for z in s.coordinates],
                    "residual": s.residual,
                    "class": s.classification,
                }) + "\n")
        outputs.append(solutions_path)
    _finish(man, manifest_path or _default_manifest_path(solutions_path, "solve"),
            outputs)
    if incomplete:
        sys.exit(EXIT_INCOMPLETE)


# ---------------------------------------------------------------------------


def _parse_subgraph(text) -> CouplerSubgraph:
    try:
        parts = [int(t) for t in text.replace(" ", "").split(",")]
        if len(parts) != 5:
            raise ValueError
    except ValueError:
        raise click.UsageError(f"--subgraph must be 'u,v,w,p,c', got {text!r}")
    return CouplerSubgraph(*parts)


STRATEGIES = ("random", "near-unit", "degenerate-perturb", "forward-induced")


@main.command("maximize")
@click.argument("graph_file", type=click.Path(exists=True))
@click.option("--start", "start", default="random",
              help="Strategy (random, near-unit, degenerate-perturb, "
                   "forward-induced) or a lengths file.")
@click.option("--method", type=click.Choice(["linear", "tree", "walk"]),
              default="tree")
@click.option("--target", type=int, default=None)
@click.option("--seed", type=int, default=0)
@click.option("--starts", "n_starts", type=int, default=1,
              help="Number of heuristic starts to try.")
@click.option("--walk-steps", type=int, default=200)
@click.option("--grid", type=int, default=20, help="Coarse grid per angle.")
@click.option("--max-iterations", type=int, default=50)
@click.option("--known-count", type=int, default=None)
@click.option("--subgraph", "subgraph_texts", multiple=True,
              help="Restrict search to these u,v,w,p,c subgraphs.")
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Best lengths JSON file.")
@click.option("--trace", "trace_path", type=click.Path(), default=None,
              help="Search trace as JSON lines.")
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_maximize(graph_file, start, method, target, seed, n_starts, walk_steps,
                 grid, max_iterations, known_count, subgraph_texts, output,
                 trace_path, manifest_path):
    """Search for edge lengths maximizing the real embedding count."""
    man = _manifest(None, "maximize", graph_file=graph_file, start=start,
                    method=method, target=target, seed=seed, starts=n_starts,
                    grid=grid, known_count=known_count)
    man.add_input(graph_file)
    G = _load_graph(graph_file)
    if start in STRATEGIES:
        starts = heuristic_starts(G, start, seed=seed, count=n_starts)
    elif Path(start).exists():
        man.add_input(start)
        starts = [_load_lengths(start)]
    else:
        raise click.UsageError(
            f"--start must be a strategy {STRATEGIES} or a lengths file"
        )
    sgs = [_parse_subgraph(t) for t in subgraph_texts] or None
    cfg = SearchConfig(coarse=(grid, grid), seed=seed, target=target,
                       max_iterations=max_iterations,
                       known_complex=known_count, subgraphs=sgs)
    best_count, best_lengths = -1, starts[0]
    trace_rows = []
    reached = False
    for k, lam0 in enumerate(starts):
        if method == "walk":
            lam = stochastic_walk(G, lam0, steps=walk_steps, seed=seed + k,
                                  known_complex=known_count)
            gen = monodromy_solve(G, seed=seed + k, known_count=known_count)
            n, _ = count_real(parameter_homotopy(gen, lam, seed=seed + k))
            rows = [{"subgraph": [], "count": n, "lengths": lam}]
        else:
            search = linear_search if method == "linear" else tree_search
            try:
                if method == "linear":
                    sub = sgs or find_coupler_subgraphs(G)
                    lam, tr = search(G, lam0, sub, cfg)
                else:
                    lam, tr = search(G, lam0, cfg)
            except ValueError as exc:
                raise click.UsageError(str(exc))
            gen = monodromy_solve(G, seed=seed + 991, known_count=known_count)
            n, _ = count_real(parameter_homotopy(gen, lam, seed=seed))
            rows = [
                {"subgraph": list(t.subgraph), "count": t.real_count,
                 "lengths": t.lengths}
                for t in tr
            ]
        trace_rows.extend(rows)
        if n > best_count:
            best_count, best_lengths = n, lam
        if target is not None and best_count >= target:
            reached = True
            break
    report = {"best_count": best_count, "target": target,
              "reached": target is None or reached,
              "starts_used": k + 1}
    click.echo(dumps17(report))
    outputs = []
    if output:
        Path(output).write_text(
            dumps17(best_lengths.to_json_dict(G.name), indent=2) + "\n"
        )
        outputs.append(output)
    if trace_path:
        with open(trace_path, "w") as fh:
            for row in trace_rows:
                row = dict(row, lengths=row["lengths"].to_json_dict(G.name)["lengths"])
                fh.write(dumps17(row) + "\n")
        outputs.append(trace_path)
    _finish(man, manifest_path or _default_manifest_path(output, "maximize"),
            outputs)


# ---------------------------------------------------------------------------


@main.command("curve")
@click.argument("graph_file", type=click.Path(exists=True))
@click.argument("lengths_file", type=click.Path(exists=True))
@click.option("--subgraph", "subgraph_text", required=True,
              help="u,v,w,p,c vertices of the coupler subgraph.")
@click.option("--steps", type=int, default=2000)
@click.option("--seeds", type=int, default=8)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_curve(graph_file, lengths_file, subgraph_text, steps, seeds, seed,
              output, manifest_path):
    """Trace the coupler curve of c with edge uc removed; CSV output."""
    man = _manifest(None, "curve", graph_file=graph_file,
                    lengths_file=lengths_file, subgraph=subgraph_text,
                    steps=steps, seed=seed)
    man.add_input(graph_file)
    man.add_input(lengths_file)
    G = _load_graph(graph_file)
    lengths = _load_lengths(lengths_file)
    sg = _parse_subgraph(subgraph_text)
    try:
        valid = {s.as_tuple() for s in find_coupler_subgraphs(G)}
    except ValueError as exc:
        raise click.UsageError(str(exc))
    t = sg.as_tuple()
    if t not in valid and (t[0], t[2], t[1], t[4], t[3]) not in valid:
        raise click.UsageError(f"{t} is not a coupler subgraph of {G.name}")
    try:
        comps = trace_coupler_curve(G, lengths, sg, steps=steps, seeds=seeds,
                                    seed=seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    csv = curve_to_csv(comps)
    outputs = []
    if output:
        Path(output).write_text(csv)
        outputs.append(output)
    else:
        click.echo(csv, nl=False)
    _finish(man, manifest_path or _default_manifest_path(output, "curve"),
            outputs)
    if any(c.truncated for c in comps):
        sys.exit(EXIT_INCOMPLETE)


# ---------------------------------------------------------------------------


@main.command("bounds")
@click.option("--preset", "preset_name", type=click.Choice(PRESETS), default=None)
@click.option("--n", "n", type=int, default=None, help="Target vertex count.")
@click.option("--nG", "ng", type=int, default=None)
@click.option("--nH", "nh", type=int, default=None)
@click.option("--rG", "rg", type=int, default=None)
@click.option("--rH", "rh", type=int, default=None)
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_bounds(preset_name, n, ng, nh, rg, rh, manifest_path):
    """Gluing lower bound and asymptotic growth base."""
    man = _manifest(None, "bounds", preset=preset_name, n=n, nG=ng, nH=nh,
                    rG=rg, rH=rh)
    try:
        if preset_name is not None:
            spec = preset(preset_name, n)
        else:
            if None in (ng, nh, rg, rh, n):
                raise click.UsageError(
                    "provide --preset or all of --nG --nH --rG --rH --n"
                )
            spec = GluingSpec(nG=ng, nH=nh, rG=rg, rH=rh, n=n)
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc))
    bound = glued_lower_bound(spec)
    click.echo(dumps17({
        "bound": bound.value,
        "exact": bound.exact,
        "base": asymptotic_base(spec),
        "spec": {"nG": spec.nG, "nH": spec.nH, "rG": spec.rG,
                 "rH": spec.rH, "n": spec.n},
    }))
    _finish(man, manifest_path or _default_manifest_path(None, "bounds"))


# ---------------------------------------------------------------------------


@main.command("enumerate")
@click.option("--n", type=int, required=True)
@click.option("--dim", type=click.Choice(["2", "3"]), default="2")
@click.option("--classify", is_flag=True, help="Tag the last Henneberg move.")
@click.option("--geometry", type=click.Choice(GEOMETRIES), default=None)
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Graph list as JSON lines.")
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def cmd_enumerate(n, dim, classify, geometry, output, manifest_path):
    """Enumerate minimally rigid graphs up to isomorphism."""
    d = int(dim)
    man = _manifest(None, "enumerate", n=n, dim=d, classify=classify,
                    geometry=geometry)
    try:
        graphs = enumerate_minimally_rigid(n, d, geometry)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rows = []
    tally = {"H1-last": 0, "H2-last": 0}
    for G in graphs:
        row = G.to_json_dict()
        if classify:
            tag = classify_last_move(G, d)
            row["last_move"] = tag
            tally[tag] += 1
        rows.append(row)
    outputs = []
    if output:
        with open(output, "w") as fh:
            for row in rows:
                fh.write(dumps17(row) + "\n")
        outputs.append(output)
    summary = {"n": n, "dim": d, "count": len(rows)}
    if classify:
        summary.update(tally)
    click.echo(dumps17(summary))
    if not output:
        for row in rows:
            click.echo(dumps17(row))
    _finish(man, manifest_path or _default_manifest_path(output, "enumerate"),
            outputs)


if __name__ == "__main__":
    main()
