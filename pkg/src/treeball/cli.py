"""Command-line surface.

Each subcommand wraps one library operation, reads groups from document
files, and prints either text or JSON. Everything is deterministic; there
is no seed anywhere. Exit codes: 0 on success, 1 when --expect is given
and the computed answer differs, 2 on unusable input.
"""

import json
import sys

import click

from .census import (census_compatible_classes, census_discrete_lifts,
                     degree3_table, format_table)
from .compat import (check_compatibility, check_trivial_seams,
                     compatibility_core, find_involutive_cocycles)
from .constructions import (build_centered, build_diagonal, build_full_lift,
                            build_parity_lift, build_tower,
                            build_wreath_local)
from .documents import (document_from_group, group_from_document,
                        load_document, serialize_document)
from .errors import CapacityError, DocumentError, HypothesisError
from .permcore import Perm, PermGroup, classify_action
from .universal import (is_discrete_universal, local_action_group,
                        pk_local_action, restriction_count_factors,
                        count_restrictions)

_FMT = click.option("--format", "fmt", type=click.Choice(["text", "json"]),
                    default="text", show_default=True,
                    help="Output rendering.")
_IN = click.option("--in", "path", required=True,
                   type=click.Path(exists=True, dir_okay=False),
                   help="Group document to read.")
_EXPECT = click.option("--expect", type=click.Choice(["yes", "no"]),
                       default=None,
                       help="Exit 1 if the answer differs from this.")


def _load_group(path):
    try:
        return group_from_document(load_document(path))
    except DocumentError as err:
        raise click.UsageError(str(err)) from err


def _named_group(spec):
    """A permutation group from a short name like S3, A4, C5, D6, V4."""
    name = spec.strip().lower()
    fixed = {
        "v4": lambda: PermGroup.from_elements([
            Perm((0, 1, 2, 3)), Perm((1, 0, 3, 2)),
            Perm((2, 3, 0, 1)), Perm((3, 2, 1, 0))]),
        "sl23": _sl23,
        "flips6": lambda: PermGroup.generated([
            Perm((1, 0, 2, 3, 4, 5)), Perm((0, 1, 3, 2, 4, 5)),
            Perm((0, 1, 2, 3, 5, 4))]),
    }
    if name in fixed:
        return fixed[name]()
    if len(name) >= 2 and name[0] in "sacd" and name[1:].isdigit():
        n = int(name[1:])
        if n < 2:
            raise click.UsageError("group %r is too small" % spec)
        maker = {"s": PermGroup.symmetric, "a": PermGroup.alternating,
                 "c": PermGroup.cyclic, "d": PermGroup.dihedral}[name[0]]
        return maker(n)
    raise click.UsageError(
        "unknown group %r; use Sn, An, Cn, Dn, V4, SL23 or FLIPS6" % spec)


def _sl23():
    vecs = [(0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
    index = {v: i for i, v in enumerate(vecs)}

    def mat_perm(a, b, c, d):
        images = []
        for x, y in vecs:
            images.append(index[((a * x + b * y) % 3, (c * x + d * y) % 3)])
        return Perm(tuple(images))

    return PermGroup.generated([mat_perm(1, 1, 0, 1), mat_perm(0, 2, 1, 0)])


_DEFAULT_BLOCKS = {
    "sl23": ((0, 1), (2, 5), (3, 7), (4, 6)),
    "flips6": ((0, 1), (2, 3), (4, 5)),
}


def _fmt_count(n):
    if n <= 2 ** 63:
        return str(n)
    import sympy

    parts = []
    for prime, exp in sorted(sympy.factorint(n).items()):
        parts.append("%d^%d" % (prime, exp) if exp > 1 else str(prime))
    return " * ".join(parts)


def _yes(flag):
    return "yes" if flag else "no"


def _finish_bool(label, value, expect, fmt, json_key):
    if fmt == "json":
        click.echo(json.dumps({json_key: bool(value)}))
    else:
        click.echo("%s: %s" % (label, _yes(value)))
    if expect is not None and (expect == "yes") != bool(value):
        sys.exit(1)


@click.group()
def main():
    """Gluing data for groups acting on balls of a regular tree."""


@main.command("classify")
@_IN
@_FMT
def classify_cmd(path, fmt):
    """Describe the one-step action at the center of the input group."""
    group = _load_group(path)
    report = classify_action(local_action_group(group))
    body = {
        "degree": report.degree,
        "transitive": report.transitive,
        "semiregular": report.semiregular,
        "regular": report.regular,
        "primitive": report.primitive,
        "quasiprimitive": report.quasiprimitive,
        "semiprimitive": report.semiprimitive,
        "rank": report.rank,
        "orbits": [list(o) for o in report.orbits],
        "minimal_blocks": [[list(b) for b in sys_]
                           for sys_ in report.minimal_blocks],
    }
    if fmt == "json":
        click.echo(json.dumps(body, sort_keys=True))
        return
    for key in ("degree", "transitive", "semiregular", "regular",
                "primitive", "quasiprimitive", "semiprimitive", "rank"):
        value = body[key]
        click.echo("%s: %s" % (key, _yes(value)
                               if isinstance(value, bool) else value))
    click.echo("orbits: %s" % (body["orbits"],))


@main.command("check-c")
@_IN
@_FMT
@_EXPECT
def check_c_cmd(path, fmt, expect):
    """Does every pair of elements glue in every direction."""
    group = _load_group(path)
    _finish_bool("C", check_compatibility(group), expect, fmt, "C")


@main.command("check-d")
@_IN
@_FMT
@_EXPECT
def check_d_cmd(path, fmt, expect):
    """Are all seam groups of the input trivial."""
    group = _load_group(path)
    _finish_bool("D", check_trivial_seams(group), expect, fmt, "D")


@main.command("discrete")
@_IN
@_FMT
@_EXPECT
def discrete_cmd(path, fmt, expect):
    """Does the input prescribe a discrete universal completion."""
    group = _load_group(path)
    _finish_bool("discrete", is_discrete_universal(group), expect, fmt,
                 "discrete")


@main.command("ccore")
@_IN
@_FMT
def ccore_cmd(path, fmt):
    """Largest subgroup of the input whose elements all glue."""
    group = _load_group(path)
    core = compatibility_core(group)
    if fmt == "json":
        doc = document_from_group(
            core, metadata={"construction": "compatibility core"})
        click.echo(serialize_document(doc), nl=False)
        return
    click.echo("core order: %d (input order %d)" % (core.order, group.order))


@main.command("cocycles")
@_IN
@_FMT
@_EXPECT
def cocycles_cmd(path, fmt, expect):
    """Count the involutive gluing cocycles of the input."""
    group = _load_group(path)
    found = find_involutive_cocycles(group)
    if fmt == "json":
        click.echo(json.dumps({"involutive_cocycles": len(found)}))
    else:
        click.echo("involutive cocycles: %d" % len(found))
    if expect is not None and (expect == "yes") != bool(found):
        sys.exit(1)


@main.command("construct")
@click.argument("kind", type=click.Choice(
    ["diagonal", "centered", "full-lift", "parity", "wreath"]))
@click.argument("group_name")
@click.option("--top", "top_name", default=None,
              help="Acting group for wreath (required there).")
@click.option("--spheres", default="1",
              help="Comma-separated sphere indices for parity.")
@click.option("--radius", type=int, default=None,
              help="Target radius for full-lift.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default=None, help="Write the document here instead of stdout.")
@_FMT
def construct_cmd(kind, group_name, top_name, spheres, radius, out_path, fmt):
    """Build one of the named extension constructions."""
    F = _named_group(group_name)
    try:
        if kind == "diagonal":
            built = build_diagonal(F)
        elif kind == "centered":
            built = build_centered(F)
        elif kind == "full-lift":
            built = build_full_lift(F, radius=radius)
        elif kind == "parity":
            sign = {p: (0 if p.sign() == 1 else 1) for p in F.elements}
            levels = sorted(int(s) for s in spheres.split(","))
            built = build_parity_lift(F, sign, 2, levels)
        else:
            if top_name is None:
                raise click.UsageError("wreath needs --top")
            built = build_wreath_local(F, _named_group(top_name)).group
    except (HypothesisError, CapacityError, ValueError) as err:
        raise click.UsageError(str(err)) from err
    meta = {"construction": "%s(%s)" % (kind, group_name)}
    doc = document_from_group(built, metadata=meta)
    text = serialize_document(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo("wrote %s" % out_path)
        return
    if fmt == "json":
        click.echo(text, nl=False)
        return
    click.echo("%s(%s): degree %d radius %d order %s"
               % (kind, group_name, built.degree, built.radius,
                  _fmt_count(built.order)))


@main.command("tower")
@click.argument("kind", type=click.Choice(
    ["pinned-orbit", "partition", "pinned-center"]))
@click.option("--steps", type=int, required=True,
              help="Number of levels to build, the base included.")
@click.option("--group", "group_name", default=None,
              help="Base group (default: FLIPS6, or SL23 for partition).")
@click.option("--blocks", "blocks_spec", default=None,
              help="Partition blocks, e.g. '0,1;2,5;3,7;4,6'.")
@_FMT
def tower_cmd(kind, steps, group_name, blocks_spec, fmt):
    """Grow a block-constant self-extension tower and report its orders."""
    if steps < 1:
        raise click.UsageError("--steps must be at least 1")
    if group_name is None:
        group_name = "sl23" if kind == "partition" else "flips6"
    F = _named_group(group_name)
    blocks = None
    if blocks_spec:
        blocks = tuple(tuple(int(x) for x in part.split(","))
                       for part in blocks_spec.split(";"))
    elif kind == "partition":
        blocks = _DEFAULT_BLOCKS.get(group_name.strip().lower())
        if blocks is None:
            raise click.UsageError("partition towers need --blocks")
    try:
        tower = build_tower(F, kind, steps, blocks=blocks)
    except (HypothesisError, CapacityError) as err:
        raise click.UsageError(str(err)) from err
    if fmt == "json":
        body = [{"radius": lv.radius, "order": str(lv.order),
                 "materialized": lv.group is not None}
                for lv in tower.levels]
        click.echo(json.dumps(body))
        return
    for lv in tower.levels:
        tag = "" if lv.group is not None else " (certified only)"
        click.echo("level %d: order %s%s"
                   % (lv.radius, _fmt_count(lv.order), tag))


@main.command("census")
@click.option("--degree", type=int, required=True)
@click.option("--radius", type=int, required=True)
@_FMT
def census_cmd(degree, radius, fmt):
    """All gluable conjugacy classes of transitive ball groups."""
    try:
        rows = census_compatible_classes(degree, radius)
    except CapacityError as err:
        raise click.UsageError(str(err)) from err
    if fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in rows]))
        return
    click.echo(format_table(rows), nl=False)


@main.command("cd-lifts")
@_FMT
def cd_lifts_cmd(fmt):
    """Rigid gluable classes one level above the degree-3 census."""
    base = census_compatible_classes(3, 2)
    lifts = census_discrete_lifts(base)
    fresh = [r for r in lifts if r.gamma_image_of is None]
    if fmt == "json":
        click.echo(json.dumps({
            "rows": [r.to_dict() for r in lifts],
            "new_classes": len(fresh)}))
        return
    click.echo(format_table(fresh), nl=False)
    click.echo("new classes: %d (plus %d unique-lift images of rigid rows)"
               % (len(fresh), len(lifts) - len(fresh)))


@main.command("s3-table")
@_FMT
def s3_table_cmd(fmt):
    """The full degree-3 classification table, both levels."""
    rows = degree3_table()
    if fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in rows]))
        return
    click.echo(format_table(rows), nl=False)


@main.command("count-restrictions")
@_IN
@click.option("--ball", type=int, required=True,
              help="Radius of the larger ball to restrict from.")
@click.option("--stabilizer", is_flag=True,
              help="Count only maps fixing the center (required).")
@_FMT
def count_restrictions_cmd(path, ball, stabilizer, fmt):
    """How many larger-ball maps restrict into the input group."""
    group = _load_group(path)
    try:
        total = count_restrictions(group, ball, stabilizer_only=stabilizer)
    except CapacityError:
        factors = restriction_count_factors(group, ball,
                                            stabilizer_only=stabilizer)
        if fmt == "json":
            click.echo(json.dumps({"count": None,
                                   "factored": " * ".join(factors)}))
        else:
            click.echo("count: %s" % " * ".join(factors))
        return
    except HypothesisError as err:
        raise click.UsageError(str(err)) from err
    if fmt == "json":
        click.echo(json.dumps({"count": total}))
    else:
        click.echo("count: %d" % total)


@main.command("pk-local")
@_IN
@click.option("--target", type=int, required=True,
              help="Radius of the derived local prescription.")
@_FMT
def pk_local_cmd(path, target, fmt):
    """Project or lift the input to its action on another ball size."""
    group = _load_group(path)
    try:
        derived = pk_local_action(group, target)
    except (HypothesisError, CapacityError) as err:
        raise click.UsageError(str(err)) from err
    if fmt == "json":
        doc = document_from_group(
            derived, generators_only=True,
            metadata={"construction": "local action at radius %d" % target})
        click.echo(serialize_document(doc), nl=False)
        return
    click.echo("radius %d action: order %s, %d generators"
               % (target, _fmt_count(derived.order),
                  len(derived.generators)))


if __name__ == "__main__":
    main()
