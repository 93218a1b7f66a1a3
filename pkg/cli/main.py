import sys
from functools import wraps
from pathlib import Path
from typing import List, Optional, Sequence

import click
import typer
from pydantic import ValidationError
from rich.panel import Panel
from rich.table import Table
from typing_extensions import Annotated

from complextrees.connectivity import (
    Certificate,
    connectivity_verdict,
    dendrite_heuristic,
    member_escape_test,
    overlap_localization,
)
from complextrees.core import (
    EPWord,
    FiniteWord,
    exact_piece_overlap,
    children_overlap,
    neighbor_map,
    phi,
    phi_partial,
    post_critical_set,
    sorted_words,
)
from complextrees.dimension import alpha_loci_on_ray, in_m2, post_critically_finite, similarity_dimension
from complextrees.errors import ComplexTreesError, InputError
from complextrees.family import preset, preset_names, verify_family_identity
from complextrees.render import (
    overlay_cloud,
    render_tipset,
    render_tree,
    scan_grid,
    write_cloud,
    write_image,
    write_json,
)
from complextrees.roots import m0_root_cloud, m_root_cloud
from cli.models import CheckMode, RunConfig
from cli.utils import *

app = typer.Typer(
    name="ComplexTrees",
    help="ComplexTrees CLI: tip points, tipsets and parameter spaces of complex trees",
    add_completion=True,
    no_args_is_help=True,
)

# Shared options
PresetOpt = Annotated[Optional[str], typer.Option("--preset", help="Family preset, e.g. ternary-up or ngon5")]
NgonOpt = Annotated[Optional[int], typer.Option("--n", help="Order for the ngon preset")]
AlphabetOpt = Annotated[Optional[str], typer.Option("--alphabet", help='Letters, e.g. "i/2,1/2,-i/2"')]
FamilyOpt = Annotated[Optional[str], typer.Option("--family", help="Family JSON file")]
ReferenceOpt = Annotated[
    Optional[str], typer.Option("--reference", help="Reference tree: sierpinski, rauzy-binary, dendrite")
]
ZOpt = Annotated[Optional[str], typer.Option("--z", help="Family parameter, e.g. 0+0.5i or (-1+1.3228756555322954i)/4")]
ResOpt = Annotated[Optional[str], typer.Option("--res", help="Image size WIDTHxHEIGHT")]
LowerOpt = Annotated[Optional[str], typer.Option("--lower", help="Lower-left corner of the viewport")]
UpperOpt = Annotated[Optional[str], typer.Option("--upper", help="Upper-right corner of the viewport")]
OutOpt = Annotated[Optional[str], typer.Option("--out", help="Output file")]
WorkersOpt = Annotated[Optional[int], typer.Option("--workers", help="Worker threads")]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Random seed")]
TailsOpt = Annotated[Optional[str], typer.Option("--tails", help="Tail periods, e.g. 2,31")]
RelationsOpt = Annotated[Optional[str], typer.Option("--relations", help='Relations, e.g. "13~2=21~2;31~2=23~2"')]
ExpectOpt = Annotated[Optional[str], typer.Option("--expect", help="Expected outcome; exit 2 on mismatch")]
ProgressOpt = Annotated[bool, typer.Option("--progress/--quiet", help="Show progress bars")]


def emit(text: str) -> None:
    console.print(text, markup=False)


def guarded(func):
    """Turn library and validation errors into a one-line diagnostic and exit code 1."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ComplexTreesError, ValidationError) as e:
            err_console.print(f"error: {e}", markup=False)
            raise typer.Exit(code=1)

    return wrapper


def _config(ctx: typer.Context, command: str, **flags) -> RunConfig:
    base = ctx.obj if isinstance(ctx.obj, dict) else {}
    res = flags.pop("res", None)
    if res is not None:
        flags["width"], flags["height"] = parse_resolution(res)
    for key in ("relations", "tails", "tests"):
        if isinstance(flags.get(key), str):
            flags[key] = parse_list(flags[key])
    return build_config(base, command, **flags)


def _expect(cfg: RunConfig, actual: str) -> None:
    if cfg.expect is not None and cfg.expect.strip().lower() != actual.strip().lower():
        err_console.print(f"expectation failed: expected {cfg.expect}, got {actual}", markup=False)
        raise typer.Exit(code=2)


def _tails(cfg: RunConfig) -> Optional[List[FiniteWord]]:
    return [FiniteWord.parse(t) for t in cfg.tails] or None


@app.callback()
def main(
    ctx: typer.Context,
    config: Annotated[Optional[Path], typer.Option("--config", help="RunConfig JSON file")] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")] = False,
):
    """Load the optional run configuration shared by every command."""
    configure_logging(verbose)
    try:
        ctx.obj = load_config_file(str(config) if config else None)
    except InputError as e:
        err_console.print(f"error: {e}", markup=False)
        raise typer.Exit(code=1)


@app.command()
@guarded
def tip(
    ctx: typer.Context,
    word: Annotated[str, typer.Option("--word", help="Address, e.g. 21~2 for 21 followed by 2 repeated")],
    preset: PresetOpt = None,
    n: NgonOpt = None,
    alphabet: AlphabetOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    terms: Annotated[Optional[int], typer.Option("--terms", help="Also print the partial sum with this many terms")] = None,
):
    """Evaluate the geometric map φ on a finite or eventually periodic word."""
    cfg = _config(
        ctx, "tip", word=word, preset=preset, ngon=n, alphabet=alphabet, family=family, reference=reference, z=z
    )
    alph = resolve_alphabet(cfg)
    w = parse_word(cfg.word)
    alph.check_word(w)
    emit(format_complex(phi(w, alph)))
    if terms is not None and isinstance(w, EPWord):
        emit(f"partial sum ({terms} terms): {format_complex(phi_partial(w, alph, terms))}")


@app.command()
@guarded
def tree(
    ctx: typer.Context,
    depth: Annotated[Optional[int], typer.Option("--depth", help="Word length")] = None,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    alphabet: AlphabetOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    res: ResOpt = None,
    lower: LowerOpt = None,
    upper: UpperOpt = None,
    trunk: Annotated[bool, typer.Option("--trunk", help="Draw the trunk from 0 to the root")] = False,
    out: OutOpt = None,
):
    """Render the complex tree T_A as a PPM image."""
    cfg = _config(
        ctx, "tree", depth=depth, preset=preset, ngon=n, alphabet=alphabet, family=family,
        reference=reference, z=z, res=res, lower=lower, upper=upper, output=out,
    )
    lo, hi = viewport(cfg)
    img = render_tree(resolve_alphabet(cfg), cfg.depth or 8, cfg.width, cfg.height, lo, hi, trunk=trunk)
    emit(f"wrote {write_image(img, output_path(cfg, 'tree.ppm'))}")


@app.command()
@guarded
def tipset(
    ctx: typer.Context,
    depth: Annotated[Optional[int], typer.Option("--depth", help="Address length")] = None,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    alphabet: AlphabetOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    res: ResOpt = None,
    lower: LowerOpt = None,
    upper: UpperOpt = None,
    plain: Annotated[bool, typer.Option("--plain", help="Single color instead of one per piece")] = False,
    out: OutOpt = None,
):
    """Render the depth-limited tipset F_A as a PPM image."""
    cfg = _config(
        ctx, "tipset", depth=depth, preset=preset, ngon=n, alphabet=alphabet, family=family,
        reference=reference, z=z, res=res, lower=lower, upper=upper, output=out,
    )
    lo, hi = viewport(cfg)
    img = render_tipset(resolve_alphabet(cfg), cfg.depth or 10, cfg.width, cfg.height, lo, hi, by_piece=not plain)
    emit(f"wrote {write_image(img, output_path(cfg, 'tipset.ppm'))}")


@app.command()
@guarded
def scan(
    ctx: typer.Context,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    family: FamilyOpt = None,
    tests: Annotated[Optional[str], typer.Option("--tests", help="Comma list of m2, m0, disconnect")] = None,
    res: ResOpt = None,
    lower: LowerOpt = None,
    upper: UpperOpt = None,
    workers: WorkersOpt = None,
    overlay_level: Annotated[
        Optional[int], typer.Option("--overlay-level", help="Overlay the M root cloud of this level")
    ] = None,
    out: OutOpt = None,
    progress: ProgressOpt = False,
):
    """Label parameter space pixels by the M2, M0 and disconnection tests."""
    cfg = _config(
        ctx, "scan", preset=preset, ngon=n, family=family, tests=tests, res=res,
        lower=lower, upper=upper, workers=workers, output=out,
    )
    fam = resolve_family(cfg)
    lo, hi = viewport(cfg)
    grid = scan_grid(fam, [t.value for t in cfg.tests], cfg.width, cfg.height, lo, hi, progress=progress)
    img = grid.to_image()
    if overlay_level is not None:
        img = overlay_cloud(img, m_root_cloud(fam, overlay_level, progress=progress))
    path = write_image(img, output_path(cfg, "scan.ppm"))

    table = Table(title=f"{fam.name} {cfg.width}x{cfg.height}", show_header=True, header_style="bold magenta")
    table.add_column("Label", style="cyan")
    table.add_column("Pixels", justify="right")
    table.add_column("Fraction", justify="right")
    for row in grid.summary().itertuples(index=False):
        table.add_row(row.label, str(row.pixels), f"{row.fraction:.4f}")
    console.print(table)
    emit(f"wrote {path}")


@app.command()
@guarded
def mcloud(
    ctx: typer.Context,
    level: Annotated[Optional[int], typer.Option("--level", help="Word length m of u and v")] = None,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    family: FamilyOpt = None,
    tails: TailsOpt = None,
    include_declared: Annotated[
        bool, typer.Option("--include-declared", help="Keep declared relations among the defects")
    ] = False,
    workers: WorkersOpt = None,
    seed: SeedOpt = None,
    out: OutOpt = None,
    progress: ProgressOpt = False,
):
    """Root cloud approximating the unstable set M at level m."""
    cfg = _config(
        ctx, "mcloud", level=level, preset=preset, ngon=n, family=family, tails=tails,
        workers=workers, seed=seed, output=out,
    )
    cloud = m_root_cloud(
        resolve_family(cfg), cfg.level or 4, _tails(cfg), exclude_declared=not include_declared, progress=progress
    )
    emit(f"{len(cloud)} points -> {write_cloud(cloud, output_path(cfg, 'mcloud.csv'))}")


@app.command()
@guarded
def m0cloud(
    ctx: typer.Context,
    order: Annotated[Optional[int], typer.Option("--order", help="Largest node word length")] = None,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    family: FamilyOpt = None,
    tails: TailsOpt = None,
    workers: WorkersOpt = None,
    seed: SeedOpt = None,
    out: OutOpt = None,
    progress: ProgressOpt = False,
):
    """Root cloud of the root connectivity set M0 up to the given order."""
    cfg = _config(
        ctx, "m0cloud", order=order, preset=preset, ngon=n, family=family, tails=tails,
        workers=workers, seed=seed, output=out,
    )
    cloud = m0_root_cloud(resolve_family(cfg), cfg.order or 6, _tails(cfg), progress=progress)
    emit(f"{len(cloud)} points -> {write_cloud(cloud, output_path(cfg, 'm0cloud.csv'))}")


@app.command()
@guarded
def dim(
    ctx: typer.Context,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    alphabet: AlphabetOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    ray: Annotated[Optional[float], typer.Option("--ray", help="Angle of a ray for the alpha locus")] = None,
    alpha: Annotated[float, typer.Option("--alpha", help="Dimension of the locus traced on --ray")] = 2.0,
    tol: Annotated[Optional[float], typer.Option("--tol")] = None,
):
    """Similarity dimension of one tree, or the alpha locus of a family along a ray."""
    cfg = _config(
        ctx, "dim", preset=preset, ngon=n, alphabet=alphabet, family=family, reference=reference, z=z, tol=tol
    )
    if ray is not None:
        loci = alpha_loci_on_ray(resolve_family(cfg), ray, alpha, cfg.tol)
        emit(f"alpha={alpha:g} locus on ray {ray:g}: " + (", ".join(f"{t:.15g}" for t in loci) or "none"))
        return
    report = similarity_dimension(resolve_alphabet(cfg), cfg.tol)
    emit(f"alpha = {report.alpha:.15g}")
    if cfg.z is not None and (cfg.preset or cfg.family):
        emit(f"M2: {str(in_m2(resolve_family(cfg), parse_complex(cfg.z))).lower()}")


@app.command()
@guarded
def check(
    ctx: typer.Context,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    alphabet: AlphabetOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    relations: RelationsOpt = None,
    mode: Annotated[CheckMode, typer.Option("--mode", help="verdict, escape or dendrite")] = CheckMode.VERDICT,
    max_k: Annotated[Optional[int], typer.Option("--max-k", help="Largest disk cover level")] = None,
    level: Annotated[Optional[int], typer.Option("--level", help="Cover level for the dendrite check")] = None,
    target: Annotated[str, typer.Option("--target", help="Point tested by the escape mode")] = "0",
    depth: Annotated[Optional[int], typer.Option("--depth", help="Escape depth")] = None,
    tol: Annotated[Optional[float], typer.Option("--tol")] = None,
    out: OutOpt = None,
    expect: ExpectOpt = None,
):
    """Connectivity certificate: relations with the letter graph, disk covers, escape or dendrite tests."""
    cfg = _config(
        ctx, "check", preset=preset, ngon=n, alphabet=alphabet, family=family, reference=reference, z=z,
        relations=relations, max_k=max_k, level=level, depth=depth, tol=tol, output=out, expect=expect,
    )
    alph = resolve_alphabet(cfg)
    if mode is CheckMode.ESCAPE:
        cert = member_escape_test(alph, parse_complex(target), cfg.depth)
    elif mode is CheckMode.DENDRITE:
        cert = dendrite_heuristic(alph, resolve_relations(cfg), cfg.level or 8, cfg.tol)
    else:
        cert = connectivity_verdict(alph, resolve_relations(cfg), cfg.max_k or 12, cfg.tol)
    _report(cert)
    if cfg.output:
        emit(f"wrote {write_json(cert.to_dict(), cfg.output)}")
    _expect(cfg, cert.kind.value)


def _report(cert: Certificate) -> None:
    emit(str(cert))
    if cert.detail:
        emit(cert.detail)


@app.command()
@guarded
def overlap(
    ctx: typer.Context,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    alphabet: AlphabetOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    u: Annotated[Optional[str], typer.Option("--u", help="First piece address")] = None,
    v: Annotated[Optional[str], typer.Option("--v", help="Second piece address")] = None,
    pair: Annotated[Optional[str], typer.Option("--pair", help="Letters j,k for overlap localization")] = None,
    level: Annotated[Optional[int], typer.Option("--level", help="Localization level m")] = None,
    depth: Annotated[int, typer.Option("--depth", help="Child levels for the union test")] = 1,
    tol: Annotated[Optional[float], typer.Option("--tol")] = None,
    expect: ExpectOpt = None,
):
    """Exact piece overlap of two addresses, or localization of F_j ∩ F_k."""
    cfg = _config(
        ctx, "overlap", preset=preset, ngon=n, alphabet=alphabet, family=family, reference=reference, z=z,
        level=level, tol=tol, expect=expect,
    )
    alph = resolve_alphabet(cfg)
    if u is not None and v is not None:
        a, b = FiniteWord.parse(u), FiniteWord.parse(v)
        exact = exact_piece_overlap(a, b, alph, cfg.tol)
        union = exact or children_overlap(a, b, alph, cfg.tol, depth)
        h = neighbor_map(a, b, alph)
        emit(f"exact overlap: {str(exact).lower()}")
        emit(f"children overlap: {str(union).lower()}")
        emit(f"neighbor map: z -> {format_complex(h.node)} + ({format_complex(h.scale)})(z - 1)")
        _expect(cfg, str(union).lower())
        return
    if pair is None:
        raise InputError("overlap needs --u and --v, or --pair j,k")
    j, k = (int(x) for x in parse_list(pair))
    m = cfg.level or 6
    found = overlap_localization(alph, j, k, m)
    emit(f"{len(found)} intersecting disk pairs at level {m}")
    if found:
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("v", style="cyan")
        table.add_column("w", style="green")
        table.add_column("midpoint", justify="right")
        for word_v, word_w, mid in found[:20]:
            table.add_row(str(word_v), str(word_w), format_complex(mid))
        console.print(table)
    emit(f"disjoint: {str(not found).lower()}")
    _expect(cfg, str(not found).lower())


@app.command()
@guarded
def pcf(
    ctx: typer.Context,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    family: FamilyOpt = None,
    reference: ReferenceOpt = None,
    z: ZOpt = None,
    relations: RelationsOpt = None,
    expect: ExpectOpt = None,
):
    """Post-critical set of the declared or given relations, and the p.c.f. check."""
    cfg = _config(
        ctx, "pcf", preset=preset, ngon=n, family=family, reference=reference, z=z, relations=relations,
        expect=expect,
    )
    relations = resolve_relations(cfg)
    alph = resolve_alphabet(cfg) if cfg.z is not None or cfg.reference else None
    words = sorted_words(post_critical_set(relations))
    finite = post_critically_finite(relations, alph)
    emit("{" + ", ".join(str(w) for w in words) + "}")
    emit(f"p.c.f.: {str(finite).lower()} (cardinality {len(words)})")
    _expect(cfg, str(finite).lower())


@app.command("verify-family")
@guarded
def verify_family(
    ctx: typer.Context,
    preset: PresetOpt = None,
    n: NgonOpt = None,
    family: FamilyOpt = None,
    samples: Annotated[Optional[int], typer.Option("--samples", help="Admissible parameters to sample")] = None,
    seed: SeedOpt = None,
    tol: Annotated[Optional[float], typer.Option("--tol")] = None,
    expect: ExpectOpt = None,
):
    """Check the declared relations of a family at sampled admissible parameters."""
    cfg = _config(
        ctx, "verify-family", preset=preset, ngon=n, family=family, samples=samples, seed=seed, tol=tol, expect=expect
    )
    fam = resolve_family(cfg)
    worst = verify_family_identity(fam, cfg.samples, cfg.seed)
    holds = worst <= (cfg.tol if cfg.tol is not None else 1e-10)
    emit(f"max defect = {worst:.3e} over {cfg.samples} samples")
    emit(f"identity: {str(holds).lower()}")
    _expect(cfg, "identity" if holds else "broken")


@app.command()
def presets():
    """List the family presets."""
    table = Table(show_header=True, header_style="bold magenta", title="Family presets")
    table.add_column("Name", style="cyan")
    table.add_column("Letters")
    table.add_column("Declared relations", style="green")
    table.add_column("Domain")
    for name in preset_names():
        fam = preset(name, 5 if name == "ngon" else None)
        letters = ", ".join(str(c) for c in fam.letters)
        rels = "; ".join(sorted(str(r) for r in fam.declared_relations)) or "-"
        table.add_row(name, letters, rels, fam.domain_label)
    console.print(Panel(table, border_style="cyan", padding=(1, 2)))


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the exit code: 0 success, 1 input error, 2 failed --expect."""
    command = typer.main.get_command(app)
    try:
        result = command.main(
            args=list(argv) if argv is not None else None, prog_name="complextrees", standalone_mode=False
        )
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        err_console.print(f"error: {e.format_message()}", markup=False)
        return 1
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
