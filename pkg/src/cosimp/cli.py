"""Command-line driver.

Exit status: 0 on success, 1 when a checked invariant fails (a JSON report is
printed), 2 on usage errors (bad arguments, unreadable or malformed input).
"""
from __future__ import annotations

import json
import math
import os
import random

import click

from . import coface_graphs as cg
from . import permutohedra as pm
from .coherence_words import fuzz
from .csso import (EnhancedCSSO, ReferenceChoice, build_complex, check_csso, cohomology,
                   dual_path_complex, random_towers)
from .pseudofunctor import Pseudofunctor, check_pseudofunctor, cochain_hom, csso_of, load_model

DEFAULT_SEED = 20240611
DEFAULT_COORDINATES = 20_000


class Fail(Exception):
    """An invariant failed; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__("invariant violated")
        self.report = report


def _seed(value: str) -> int:
    if value == "random":
        return random.SystemRandom().randrange(2 ** 32)
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter("expected an integer or 'random'", param_hint="--seed")


def _budget(value: int | None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("COSIMP_COORDINATE_BUDGET", DEFAULT_COORDINATES))


def _emit(ctx, report: dict, text: str):
    fmt = ctx.obj["format"]
    out = ctx.obj["output"]
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n" if fmt == "json" else text.rstrip("\n") + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        click.echo(payload, nl=False)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read {path}: {exc}")


def _load_model(path: str):
    try:
        return load_model(_load_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise click.UsageError(f"malformed model {path}: {exc}")


def _check_budget(F: Pseudofunctor, top: int, budget: int):
    total = sum(cochain_hom(F, n).dim for n in range(1, top + 1))
    if total > budget:
        raise click.UsageError(f"{total} coordinates exceed the budget {budget}")


class Main(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except Fail as exc:
            click.echo(json.dumps(exc.report, sort_keys=True, indent=2), err=True)
            ctx.exit(1)


@click.group(cls=Main)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "dot"]), default="text",
              help="Report format (dot applies to graph).")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write to a file.")
@click.option("--seed", default=str(DEFAULT_SEED), help="Integer seed, or 'random'.")
@click.option("--budget", type=int, default=None, help="Coordinate budget for complexes.")
@click.pass_context
def main(ctx, fmt, output, seed, budget):
    """Cosemisimplicial coherence and pseudofunctor deformations."""
    if budget is not None and budget <= 0:
        raise click.BadParameter("must be positive", param_hint="--budget")
    ctx.obj = {"format": fmt, "output": output, "seed": _seed(seed), "budget": _budget(budget)}


# --- graph / perm / iso --------------------------------------------------------------------

@main.command()
@click.option("--s", "s", type=click.IntRange(1), required=True)
@click.option("--k", "k", type=click.IntRange(1), required=True)
@click.option("--enhanced", is_flag=True, help="Add φ edges (s = 1 only).")
@click.option("--vertex-budget", type=click.IntRange(1), default=cg.DEFAULT_BUDGET)
@click.pass_context
def graph(ctx, s, k, enhanced, vertex_budget):
    """Build and analyse G_{s,k} or G^φ_{1,k}."""
    try:
        g = cg.build_graph(s, k, enhanced, vertex_budget)
    except (ValueError, cg.BudgetError) as exc:
        raise click.UsageError(str(exc))
    if ctx.obj["format"] == "dot":
        _emit(ctx, {}, g.to_dot())
        return
    report = {"s": s, "k": k, "enhanced": enhanced, "vertices": len(g.vertices),
              "coherer_edges": len(g.coherer_edges), "phi_edges": len(g.phi_edges),
              "components": len(g.components)}
    if enhanced:
        text = (f"{report['vertices']} vertices, {report['coherer_edges']} coherer edges, "
                f"{report['phi_edges']} φ edges, {report['components']} component"
                f"{'s' if report['components'] != 1 else ''}")
        _emit(ctx, report, text)
        return
    cay = pm.cayley_graph(k).adjacency()
    skeleton = True
    for cid in range(len(g.components)):
        phi = pm.phi_map(g, cid)
        skeleton &= phi.path_independent and phi.edges_ok and \
            pm.is_graph_isomorphism(pm.component_adjacency(g, cid), cay, phi.mapping)
    report["components_are_permutohedra"] = skeleton
    expected = {"vertices": math.prod(range(s + 1, s + k + 2)), "coherer_edges": k * len(g.vertices) // 2,
                "components": math.comb(s + k + 1, k + 1)}
    report["expected"] = expected
    text = (f"{report['vertices']} vertices, {report['coherer_edges']} edges, {report['components']} components, "
            + (f"each ≅ P{k} skeleton" if skeleton else "components are NOT permutohedral skeleta"))
    if not skeleton or any(report[key] != v for key, v in expected.items()):
        raise Fail(report)
    _emit(ctx, report, text)


@main.command()
@click.option("--k", "k", type=click.IntRange(1, 7), required=True)
@click.option("--faces", is_flag=True, help="List every face as an ordered partition.")
@click.pass_context
def perm(ctx, k, faces):
    """The permutohedron P_k: Cayley graph of S_{k+1} and its faces."""
    P = pm.build_permutohedron(k)
    counts = P.face_counts()
    report = {"k": k, "vertices": len(P.cayley.vertices), "edges": len(P.cayley.edges),
              "face_counts": {str(r): c for r, c in counts.items()}}
    if faces:
        report["faces"] = P.faces_json()
    lines = [f"P{k}: {report['vertices']} vertices, {report['edges']} edges"]
    lines += [f"  {r}-block faces: {c}" for r, c in sorted(counts.items())]
    if faces:
        lines += ["  " + " | ".join(",".join(map(str, b)) for b in f["blocks"]) for f in report["faces"]]
    _emit(ctx, report, "\n".join(lines))


def _parse_graph_spec(spec: str):
    """gphi:1:K, graph:S:K, component:S:K[:C], cayley:K -> (label, adjacency)."""
    parts = spec.split(":")
    try:
        kind, nums = parts[0], [int(x) for x in parts[1:]]
        if kind == "gphi" and len(nums) == 2:
            return spec, pm.graph_adjacency(cg.build_graph(nums[0], nums[1], enhanced=True))
        if kind == "graph" and len(nums) == 2:
            return spec, pm.graph_adjacency(cg.build_graph(nums[0], nums[1]))
        if kind == "component" and len(nums) in (2, 3):
            g = cg.build_graph(nums[0], nums[1])
            c = nums[2] if len(nums) == 3 else 0
            if not 0 <= c < len(g.components):
                raise ValueError(f"component {c} out of range")
            return spec, pm.component_adjacency(g, c)
        if kind == "cayley" and len(nums) == 1:
            return spec, pm.cayley_graph(nums[0]).adjacency()
    except ValueError as exc:
        raise click.UsageError(f"bad graph spec {spec!r}: {exc}")
    raise click.UsageError(f"bad graph spec {spec!r} (gphi:1:K, graph:S:K, component:S:K[:C], cayley:K)")


@main.command()
@click.option("--left", required=True, help="gphi:1:K | graph:S:K | component:S:K[:C] | cayley:K")
@click.option("--right", required=True)
@click.pass_context
def iso(ctx, left, right):
    """Decide whether two graphs are isomorphic; prints an explicit bijection."""
    (l, a1), (r, a2) = _parse_graph_spec(left), _parse_graph_spec(right)
    res = pm.check_graph_isomorphism(a1, a2)
    report = {"left": l, "right": r, "isomorphic": res.isomorphic, "reason": res.reason}
    if res.isomorphic:
        if not pm.is_graph_isomorphism(a1, a2, res.mapping):
            raise Fail({**report, "reason": "returned bijection is not an isomorphism"})
        report["mapping"] = sorted([[list(u) if isinstance(u, tuple) else u,
                                     list(v) if isinstance(v, tuple) else v] for u, v in res.mapping.items()])
    _emit(ctx, report, "isomorphic" if res.isomorphic else f"not isomorphic: {res.reason}")
    if not res.isomorphic:
        ctx.exit(1)


# --- words --------------------------------------------------------------------------------

@main.command()
@click.option("--fuzz", "pairs", type=click.IntRange(1), required=True, help="Number of word pairs.")
@click.option("--k", "k", type=click.IntRange(1, 4), default=2)
@click.option("--models", type=click.IntRange(0), default=10, help="Random coherer models to evaluate in.")
@click.option("--max-len", type=click.IntRange(1), default=6)
@click.pass_context
def words(ctx, pairs, k, models, max_len):
    """Fuzz the coherence theorem on G^φ_{1,k}."""
    seed = ctx.obj["seed"]
    g = cg.build_graph(1, k, enhanced=True)
    ms = random_towers(models, k + 2, seed=seed, enhanced=True) if models else []
    rep = fuzz(g, pairs, random.Random(seed), ms, max_len=max_len)
    report = {"seed": seed, "k": k, "models": models, **rep.to_json()}
    if not rep.ok or (models and rep.evaluated_equal != rep.pairs):
        raise Fail(report)
    _emit(ctx, report, f"{rep.pairs} pairs: {rep.normalized_equal} normalize equal, "
                       f"{rep.evaluated_equal} evaluate equal in {models} models (seed {seed})")


# --- complex -------------------------------------------------------------------------------

@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--refs", "refs_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--dual-path", is_flag=True, help="Use the φ-free construction (degrees >= 2).")
@click.option("--top", type=click.IntRange(2, 6), default=4)
@click.pass_context
def complex(ctx, model_path, refs_path, dual_path, top):
    """Build the derived cochain complex of a model and its cohomology."""
    model = _load_model(model_path)
    if isinstance(model, Pseudofunctor):
        _check_budget(model, top, ctx.obj["budget"])
        rep = check_pseudofunctor(model)
        if not rep.ok:
            raise Fail({"model": "invalid pseudofunctor", **rep.to_json()})
        m = csso_of(model, top)
        base = ()
    elif isinstance(model, EnhancedCSSO):
        rep = check_csso(model)
        if not rep.ok:
            raise Fail({"model": "invalid cosemisimplicial object", **rep.to_json()})
        m = model
        base = model.category(0).objects[0]
    else:
        raise click.UsageError("unsupported model")
    try:
        if refs_path:
            ref = ReferenceChoice.from_json(_load_json(refs_path))
        elif dual_path:
            ref = ReferenceChoice.dual_default(base, top)
        else:
            ref = ReferenceChoice.default(base, top)
        c = dual_path_complex(m, ref, top) if dual_path else build_complex(m, ref, top)
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise click.UsageError(f"cannot build the complex: {exc}")
    h = cohomology(c)
    report = {"label": c.label, "dims": {str(n): d for n, d in c.dims.items()},
              "square_zero": {str(n): v for n, v in c.square_zero.items()},
              "cohomology": {str(n): v for n, v in h.items()}}
    if not c.certified:
        raise Fail(report)
    text = ("dims " + ", ".join(f"M^{n}={d}" for n, d in c.dims.items()) + "; δδ = 0; "
            + ", ".join(f"H^{n}={v}" for n, v in h.items()))
    _emit(ctx, report, text)


# --- deform -------------------------------------------------------------------------------

@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--data", "data_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--check", "action", flag_value="check")
@click.option("--obstruct", "action", flag_value="obstruct")
@click.option("--extend", "action", flag_value="extend")
@click.option("--classify", "action", flag_value="classify")
@click.pass_context
def deform(ctx, model_path, data_path, action):
    """Check, obstruct, extend or classify deformations of a pseudofunctor."""
    from . import deformation as dm
    if action is None:
        raise click.UsageError("choose one of --check, --obstruct, --extend, --classify")
    F = _load_model(model_path)
    if not isinstance(F, Pseudofunctor):
        raise click.UsageError("deform needs a pseudofunctor model")
    _check_budget(F, 4, ctx.obj["budget"])
    if action == "classify":
        try:
            cl = dm.classify_first_order(F)
        except dm.DeformationError as exc:
            raise click.UsageError(str(exc))
        report = cl.to_json()
        if not cl.matches:
            raise Fail(report)
        _emit(ctx, report, f"first-order deformations: {cl.dim_solutions}-dimensional solution space, "
                           f"{cl.dim_classes} classes, dim H^2 = {cl.dim_h2}")
        return
    if data_path is None:
        raise click.UsageError("--data is required")
    try:
        d = dm.DeformationData.from_json(F, _load_json(data_path))
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise click.UsageError(f"malformed deformation data: {exc}")
    if action == "check":
        rep = dm.check_deformation(d)
        if not rep.ok:
            raise Fail(rep.to_json())
        _emit(ctx, rep.to_json(), f"valid deformation of order {d.order} ({rep.checked} checks)")
        return
    try:
        ob = dm.obstruction(d)
    except dm.DeformationError as exc:
        raise Fail({"error": str(exc)})
    report = ob.to_json(F.field)
    if not (ob.natural and ob.delta_psi_zero):
        raise Fail(report)
    text = ("δΨ = 0; " + ("class vanishes" if ob.class_vanishes else "class is nonzero") + "; "
            + ("extension found" if ob.extension is not None else "obstructed"))
    if action == "extend":
        if ob.extension is None:
            raise Fail(report)
        ext = d.extended(ob.extension)
        if not dm.check_deformation(ext).ok:
            raise Fail({**report, "error": "extension fails the structural equations"})
        report = {"obstruction": report, "extended": ext.to_json()}
        text += f"\n{json.dumps(ext.to_json(), sort_keys=True)}"
    _emit(ctx, report, text)


# --- selftest -----------------------------------------------------------------------------

@main.command()
@click.option("--only", type=click.IntRange(1, 9), multiple=True, help="Run selected criteria.")
@click.pass_context
def selftest(ctx, only):
    """Run the acceptance criteria."""
    from .acceptance import run_all
    results = run_all(list(only) or None)
    report = {"criteria": [{k: v for k, v in r.to_json().items() if k != "seconds"} for r in results]}
    if ctx.obj["format"] == "json":
        _emit(ctx, report, "")
    else:
        for r in results:
            click.echo(r.line())
    if not all(r.ok for r in results):
        ctx.exit(1)


if __name__ == "__main__":
    main()
