"""Finite windows onto the universal completion of a ball group.

The group of all tree automorphisms whose local actions of the group's radius
lie in the group is infinite, so nothing here ever materializes it. What is
computable: how many distinct restrictions it has to a ball of given radius,
the restrictions themselves (streamed, assembled chart by chart), the seam
groups its kernel leaves on the boundary, and whether the completion is
discrete. The label-respecting isometries of the labelled tree round out the
geometric side; they are the translations and inversions every such
completion contains.
"""

from __future__ import annotations

from .balls import (
    BallAut,
    ball_points,
    follow,
    words_of_length,
)
from .compat import (
    check_trivial_seams,
    compat_set,
    compatibility_core,
    first_compat_failure,
)
from .errors import CapacityError, HypothesisError
from .permcore import PermGroup


def count_restrictions(group, radius, stabilizer_only=True):
    """How many ball maps of `radius` have all their local actions in `group`.

    When the group can always be glued to itself (generator fibers nonempty),
    these are exactly the restrictions to the ball of the center-stabilizing
    part of its universal completion. The count factors over the assignment
    tree because fibers are cosets of the identity's fiber: the root
    contributes the group order and every deeper chart contributes the fiber
    size of its last direction. Counting center-moving restrictions is not
    supported. Counts past 2**63 raise, with the factorization in the
    message, rather than pretending such a group could be handled further.
    """
    total, factors = _restriction_count(group, radius, stabilizer_only)
    if total > 2 ** 63:
        raise CapacityError(
            "restriction count exceeds 2^63; factored: %s"
            % " * ".join(factors))
    return total


def restriction_count_factors(group, radius, stabilizer_only=True):
    """The restriction count as a list of factor strings, any size."""
    return _restriction_count(group, radius, stabilizer_only)[1]


def _restriction_count(group, radius, stabilizer_only):
    if not stabilizer_only:
        raise HypothesisError(
            "only restrictions fixing the center are countable here")
    k = group.radius
    if radius < k:
        raise HypothesisError("radius must be at least the group's own")
    failure = first_compat_failure(group, generators_only=True)
    if failure is not None:
        raise HypothesisError(
            "gluing fails at direction %d, so restriction counting does not "
            "factor" % failure[1])
    ident = group.identity()
    fiber = [len(compat_set(group, ident, w)) for w in range(group.degree)]
    total = group.order
    factors = [str(group.order)]
    for depth in range(1, radius - k + 1):
        per_letter = (group.degree - 1) ** (depth - 1)
        for w in range(group.degree):
            total *= fiber[w] ** per_letter
            if fiber[w] != 1:
                factors.append("%d^%d" % (fiber[w], per_letter))
    return total, factors


def iter_extensions(group, radius):
    """Yield every ball map of `radius` whose local actions lie in `group`.

    Streams depth first through chart assignments: one group element per
    vertex down to depth radius-k, each gluing to its parent's chart, with the
    full map assembled only at the leaves. Order of the stream is the sorted
    order of the assignment choices, not of the resulting maps.
    """
    k = group.radius
    if radius < k:
        raise HypothesisError("radius must be at least the group's own")
    if radius == k:
        yield from group.elements
        return
    failure = first_compat_failure(group, generators_only=True)
    if failure is not None:
        raise HypothesisError(
            "gluing fails at direction %d, so extensions may not exist"
            % failure[1])
    for root in group.elements:
        yield from _extensions_of_seed(group, root, radius)


def extend_to_ball(group, seed, radius, chooser="deterministic"):
    """Extend one group element to a larger ball, charts staying in the group.

    With the deterministic chooser, picks the least compatible chart at every
    site and returns a single map; "exhaustive" returns an iterator over all
    distinct extensions of the seed. Either way the result restricts to the
    seed on the inner ball.
    """
    k = group.radius
    if radius < k:
        raise HypothesisError("radius must be at least the group's own")
    if seed not in group:
        raise HypothesisError("the seed must belong to the group")
    failure = first_compat_failure(group, generators_only=True)
    if failure is not None:
        raise HypothesisError(
            "gluing fails at direction %d, so extensions may not exist"
            % failure[1])
    if chooser == "deterministic":
        if radius == k:
            return seed
        assignments = {(): seed}
        for v in ball_points(group.degree, radius - k):
            if not v:
                continue
            fiber = compat_set(group, assignments[v[:-1]], v[-1])
            assignments[v] = fiber[0]
        return assemble_extension(group.degree, radius, assignments)
    if chooser == "exhaustive":
        return _extensions_of_seed(group, seed, radius)
    raise ValueError("chooser must be 'deterministic' or 'exhaustive'")


def _extensions_of_seed(group, seed, radius):
    k = group.radius
    if radius == k:
        yield seed
        return
    sites = [v for v in ball_points(group.degree, radius - k) if v]

    def descend(assignments, i):
        if i == len(sites):
            yield assemble_extension(group.degree, radius, assignments)
            return
        v = sites[i]
        for choice in compat_set(group, assignments[v[:-1]], v[-1]):
            assignments[v] = choice
            yield from descend(assignments, i + 1)
        del assignments[v]

    yield from descend({(): seed}, 0)


def pk_local_action(group, target_radius, cap=None):
    """The local action at `target_radius` of the group's universal completion.

    Below the group's own radius this is the plain restriction; above it,
    the iterated full lift: all maps one radius out whose charts lie in the
    level below.
    """
    if isinstance(group, PermGroup):
        from .balls import BallAut, BallGroup
        group = BallGroup(
            group.degree, 1, [BallAut(p) for p in group.elements],
            [BallAut(p) for p in group.generators])
    failure = first_compat_failure(group, generators_only=True)
    if failure is not None:
        raise HypothesisError(
            "gluing fails at direction %d; the completion has no well-defined "
            "local action" % failure[1])
    if target_radius < 1:
        raise HypothesisError("radius must be positive")
    if target_radius <= group.radius:
        out = group
        while out.radius > target_radius:
            out = out.project()
        return out
    from .constructions import MATERIALIZE_CAP, build_full_lift
    if cap is None:
        cap = MATERIALIZE_CAP
    return build_full_lift(group, radius=target_radius, cap=cap)


def assemble_extension(degree, radius, assignments):
    """Glue charts into one ball map.

    `assignments` maps each word of length at most radius-k (k the charts'
    radius) to the chart at that vertex. Adjacent charts must glue, which the
    resulting map's validity witnesses; the assembled map acts on a prefix by
    following one letter at a time through the chart owning that step.
    """
    charts = dict(assignments)
    k = next(iter(charts.values())).radius

    def one_step_action(v):
        head, tail = v[:radius - k], v[radius - k:]
        return charts[head].local_action(tail, 1).root

    mapping = {}
    for w in ball_points(degree, radius):
        img = ()
        for j, letter in enumerate(w):
            img = follow(img, (one_step_action(w[:j])(letter),))
        mapping[w] = img
    return BallAut.from_wordmap(degree, radius, mapping)


def seam_groups(group, level1=None):
    """The one-step actions at depth k-1 of maps restricting to the identity.

    Returns a mapping from each word of length k-1 to the permutation group
    formed there by the kernel of restriction-to-the-inner-ball. Each seam
    group sits subnormally, with depth at most k-1, inside the stabilizer of
    the word's last letter in the one-step local group; `level1` overrides
    the default local group (the closure of all one-step actions).
    """
    k = group.radius
    if k < 2:
        raise HypothesisError("seams only exist past radius one")
    kernel = group.projection_kernel()
    out = {}
    for w in words_of_length(group.degree, k - 1):
        perms = {g.local_action(w, 1).root for g in kernel}
        out[w] = PermGroup.from_elements(sorted(perms), group.degree)
    return out


def local_action_group(group):
    """The closure of every one-step local action of the group's elements."""
    perms = set()
    for g in group.generators:
        perms.add(g.level1())
        for v in ball_points(group.degree, group.radius - 1):
            if v:
                perms.add(g.local_action(v, 1).root)
    return PermGroup.generated(sorted(perms), group.degree)


def is_discrete_universal(group):
    """Whether the group's universal completion is discrete.

    The completion only sees the largest subgroup that glues to itself, and
    it is discrete exactly when that core leaves no seam: no nontrivial
    member glues to the identity.
    """
    return check_trivial_seams(compatibility_core(group))


# ---------------------------------------------------------------------------
# label-respecting isometries of the labelled tree
# ---------------------------------------------------------------------------

def label_respecting_map(center_image):
    """The unique tree isometry with identity local actions sending the
    center to `center_image`.

    Acts on reduced words by prepending the target and cancelling backtracks.
    Composing two of these is another one; the ones indexed by a single
    letter are the edge inversions, and only even-length targets can give
    translations.
    """
    base = tuple(center_image)

    def act(word):
        return follow(base, tuple(word))

    return act


def edge_inversion(direction):
    """Swap the center with its neighbour along `direction`, labels intact."""
    return label_respecting_map((direction,))
