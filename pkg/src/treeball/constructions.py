"""Standard ways to manufacture groups of ball automorphisms.

Each builder takes finite permutation data, checks the hypotheses it actually
needs (raising HypothesisError with the failing clause in the message), and
returns an explicit BallGroup. Orders are computed from the defining
parameters first and the materialized group is checked against them, so a
silent modelling mistake cannot slip through as a wrong-sized group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .balls import (
    BallAut,
    BallGroup,
    ball_compatible,
    words_of_length,
)
from .compat import (
    CompatCocycle,
    compat_set,
    joint_compat_set,
)
from .errors import CapacityError, HypothesisError
from .permcore import Perm, PermGroup

#: Largest group any builder will materialize element by element.
MATERIALIZE_CAP = 500_000


def _r1(perm):
    return BallAut(perm)


def _as_radius2(root_perm, child_perms):
    return BallAut(_r1(root_perm), tuple(_r1(c) for c in child_perms))


def _check_order(group, expected, what):
    if group.order != expected:
        raise RuntimeError(
            "%s has order %d, expected %d; bug" % (what, group.order, expected))
    return group


# ---------------------------------------------------------------------------
# radius-2 builders over a permutation group
# ---------------------------------------------------------------------------

def build_diagonal(F):
    """Each permutation extends by acting the same way around every neighbour."""
    elems = [_as_radius2(a, [a] * F.degree) for a in F.elements]
    gens = [_as_radius2(a, [a] * F.degree) for a in F.generators]
    return _check_order(
        BallGroup(F.degree, 2, elems, gens), F.order, "diagonal extension")


def build_centered(F, center=None, base=0, transversal=None):
    """Extensions twisting the diagonal by a stabilizer element at `base`.

    With `center` given (a subset of the center of the stabilizer of `base`),
    the element for (a, c) acts around the neighbour w as a followed by the
    conjugate of c moved to w; the result is a group isomorphic to F x center
    and does not depend on the transversal. With `center` omitted, the whole
    stabilizer is used with the alternative twist f[a(w)] c f[w]^{-1}, which
    may genuinely depend on the chosen transversal.
    """
    if not F.is_transitive():
        raise HypothesisError("centered extension requires a transitive group")
    stab = F.stabilizer(base)
    if transversal is None:
        transversal = F.transversal(base)
    else:
        transversal = dict(transversal)
        for w, f in transversal.items():
            if f(base) != w or f not in F:
                raise HypothesisError("transversal must map the base point "
                                      "to each point within the group")
    d = F.degree

    if center is not None:
        cent = list(center.elements if isinstance(center, PermGroup) else center)
        for c in cent:
            if c not in stab:
                raise HypothesisError("center elements must fix the base point")
            if any(c * s != s * c for s in stab.elements):
                raise HypothesisError(
                    "center elements must be central in the stabilizer")
        celems = set(cent)
        if not celems or any(
                a * b not in celems for a in celems for b in celems):
            raise HypothesisError("center must be a subgroup of the stabilizer")
        elems = []
        for a in F.elements:
            for c in celems:
                children = [a * transversal[w] * c * transversal[w].inverse()
                            for w in range(d)]
                elems.append(_as_radius2(a, children))
        group = BallGroup.from_elements(elems, verify=True)
        return _check_order(group, F.order * len(celems), "centered extension")

    elems = []
    for a in F.elements:
        for c in stab.elements:
            children = [transversal[a(w)] * c * transversal[w].inverse()
                        for w in range(d)]
            elems.append(_as_radius2(a, children))
    group = BallGroup.from_elements(elems, verify=True)
    return _check_order(group, F.order * stab.order, "centered extension")


def build_kernel_extension(F, normal, base=0, transversal=None):
    """Extensions with an independent normal twist around every neighbour.

    `normal` must be a normal subgroup of the stabilizer of `base`; each
    element is a pair (a, one twist per neighbour) acting around w as a
    followed by the w-conjugate of the local twist. The resulting group is a
    semidirect product of F with a direct power of `normal`, and as a set it
    does not depend on the transversal.
    """
    if not F.is_transitive():
        raise HypothesisError("kernel extension requires a transitive group")
    stab = F.stabilizer(base)
    nelems = tuple(normal.elements if isinstance(normal, PermGroup) else normal)
    nset = set(nelems)
    if not nset <= stab._eset:
        raise HypothesisError("the twist group must fix the base point")
    if any(a * b not in nset for a in nset for b in nset):
        raise HypothesisError("the twist set must be a subgroup")
    for s in stab.generators:
        si = s.inverse()
        if any(s * n * si not in nset for n in nset):
            raise HypothesisError(
                "the twist group must be normal in the stabilizer")
    if transversal is None:
        transversal = F.transversal(base)
    d = F.degree
    conj = {w: (transversal[w], transversal[w].inverse()) for w in range(d)}
    elems = []
    for a in F.elements:
        for tw in itertools.product(nelems, repeat=d):
            children = [a * conj[w][0] * tw[w] * conj[w][1] for w in range(d)]
            elems.append(_as_radius2(a, children))
    group = BallGroup.from_elements(elems, verify=True)
    return _check_order(group, F.order * len(nelems) ** d, "kernel extension")


def build_full_lift(F, blocks=None, radius=None, cap=MATERIALIZE_CAP):
    """The largest extension whose one-step local actions stay in F.

    For a permutation group this is every pairing of a root with arbitrary
    group elements around the neighbours that agree with it there; `blocks`
    restricts the choice to be constant on each block of a preserved
    partition. For a BallGroup the same construction runs one radius up: every
    element together with every choice of gluing partners inside the group.
    A `radius` beyond the next one iterates the construction.
    """
    if isinstance(F, PermGroup):
        base = BallGroup(
            F.degree, 1, [_r1(p) for p in F.elements],
            [_r1(p) for p in F.generators])
        if blocks is not None:
            if radius not in (None, 2):
                raise HypothesisError(
                    "block-constant lifts only reach one radius out")
            return _block_lift(F, blocks)
        if radius is None:
            radius = 2
    else:
        base = F
        if blocks is not None:
            raise HypothesisError("block-constant lifts are only defined over "
                                  "a permutation group")
        if radius is None:
            radius = F.radius + 1
    group = base
    while group.radius < radius:
        group = _one_step_full_lift(group, cap)
    return group


def _one_step_full_lift(group, cap):
    d = group.degree
    ident = group.identity()
    fiber_sizes = [len(compat_set(group, ident, w)) for w in range(d)]
    expected = group.order
    for s in fiber_sizes:
        expected *= s
    if expected > cap:
        raise CapacityError(
            "full lift would have order %d, beyond the cap of %d"
            % (expected, cap))
    elems = []
    for a in group.elements:
        fibers = [compat_set(group, a, w) for w in range(d)]
        for combo in itertools.product(*fibers):
            elems.append(BallAut(a, combo))
    lifted = BallGroup.from_elements(elems, verify=False)
    return _check_order(lifted, expected, "full lift")


def _block_lift(F, blocks):
    blocks = [tuple(sorted(b)) for b in blocks]
    flat = sorted(p for b in blocks for p in b)
    if flat != list(range(F.degree)):
        raise HypothesisError("blocks must partition the points")
    block_of = {}
    for i, b in enumerate(blocks):
        for p in b:
            block_of[p] = i
    for g in F.generators:
        for b in blocks:
            if len({block_of[g(p)] for p in b}) != 1:
                raise HypothesisError("the group must map blocks to blocks")
    stabs = [F.pointwise_stabilizer(b) for b in blocks]
    expected = F.order
    for s in stabs:
        expected *= s.order
    elems = []
    for a in F.elements:
        for tw in itertools.product(*(s.elements for s in stabs)):
            children = [a * tw[block_of[w]] for w in range(F.degree)]
            elems.append(_as_radius2(a, children))
    group = BallGroup.from_elements(elems, verify=True)
    return _check_order(group, expected, "block-constant lift")


def build_parity_lift(F, weight, modulus, spheres, radius=None,
                      cap=MATERIALIZE_CAP):
    """Full lift filtered by a weight balance over chosen spheres.

    `weight` maps every element of F to an integer, additively modulo
    `modulus`, and must be a homomorphism. An extension belongs to the result
    when the weights of its one-step local actions at all vertices on the
    chosen spheres sum to zero. Sphere 0 is the center.
    """
    spheres = sorted(set(spheres))
    if not spheres or spheres[0] < 0:
        raise HypothesisError("spheres must be nonnegative distances")
    if radius is None:
        radius = spheres[-1] + 1
    if radius < spheres[-1] + 1:
        raise HypothesisError("radius must see one step past every sphere")
    for a in F.elements:
        if a not in weight:
            raise HypothesisError("weight must be defined on all of F")
        for b in F.elements:
            if (weight[a * b] - weight[a] - weight[b]) % modulus:
                raise HypothesisError("weight must be a homomorphism")
    ambient = build_full_lift(F, radius=radius, cap=cap)
    elems = []
    for alpha in ambient.elements:
        total = 0
        for r in spheres:
            if r == 0:
                total += weight[alpha.level1()]
            else:
                for v in words_of_length(F.degree, r):
                    total += weight[alpha.local_action(v, 1).root]
        if total % modulus == 0:
            elems.append(alpha)
    return BallGroup.from_elements(elems, verify=True)


def build_split_lift(F, kernel):
    """Extensions splitting as F against a chosen group of neighbour twists.

    `kernel` is a subgroup of the product of point stabilizers, one twist per
    point, each fixing its own point; it must be invariant under permuting
    coordinates and conjugating by group elements. The element for (a, k)
    acts around w as a followed by the twist at w.
    """
    d = F.degree
    tuples = list(kernel.elements if hasattr(kernel, "elements") else kernel)
    if not tuples:
        raise HypothesisError("the twist group must contain the identity tuple")
    tset = set(tuples)
    for tw in tuples:
        if len(tw) != d:
            raise HypothesisError("need one twist per point")
        for w in range(d):
            if tw[w](w) != w:
                raise HypothesisError("each twist must fix its own point")
            if tw[w] not in F:
                raise HypothesisError("twists must come from the group")
    ident = tuple(Perm.identity(F.degree) for _ in range(d))
    if ident not in tset:
        raise HypothesisError("the twist group must contain the identity tuple")
    for x in tuples:
        for y in tuples:
            if tuple(p * q for p, q in zip(x, y)) not in tset:
                raise HypothesisError("the twist set must be a subgroup")
    for a in F.generators:
        ai = a.inverse()
        for tw in tuples:
            moved = tuple(a * tw[ai(w)] * ai for w in range(d))
            if moved not in tset:
                raise HypothesisError(
                    "the twist group must be invariant under the group action")
    elems = []
    for a in F.elements:
        for tw in tuples:
            elems.append(_as_radius2(a, [a * tw[w] for w in range(d)]))
    group = BallGroup.from_elements(elems, verify=True)
    return _check_order(group, F.order * len(tuples), "split lift")


# ---------------------------------------------------------------------------
# cocycle extensions
# ---------------------------------------------------------------------------

def build_cocycle_extension(cocycle, kernel, cap=MATERIALIZE_CAP):
    """The group generated by a cocycle's lift together with kernel elements.

    `kernel` is a group of automorphisms one radius above the cocycle's group
    that restrict to the identity on the inner ball. Admissibility demands
    (a) the lifted group normalizes the kernel and (b) for every kernel
    element and direction, some kernel element's view in that direction is
    the inverse of the cocycle's choice at the original element's view. Both
    clauses are checked.
    """
    if not isinstance(cocycle, CompatCocycle):
        raise TypeError("expected a CompatCocycle")
    F = cocycle.group
    d = F.degree
    kelems = list(kernel.elements if hasattr(kernel, "elements") else kernel)
    kset = set(kelems)
    for k in kelems:
        if (k.degree, k.radius) != (F.degree, F.radius + 1):
            raise HypothesisError("kernel elements must live one radius up")
        if not k.root.is_identity():
            raise HypothesisError(
                "kernel elements must restrict to the identity inside")
    for x in kelems:
        for y in kelems:
            if x * y not in kset:
                raise HypothesisError("the kernel must be a subgroup")
    lifted_gens = [cocycle.section(g) for g in F.generators]
    for lg in lifted_gens:
        lgi = lg.inverse()
        for k in kelems:
            if lg * k * lgi not in kset:
                raise HypothesisError(
                    "the lifted group must normalize the kernel")
    for k in kelems:
        for w in range(d):
            view = k.children[w]
            if view not in F:
                raise HypothesisError(
                    "kernel views must lie in the base group")
            want = cocycle.z(view, w).inverse()
            if not any(kk.children[w] == want for kk in kelems):
                raise HypothesisError(
                    "no kernel element inverts the choice map in direction %d"
                    % w)
    expected = F.order * len(kelems)
    if expected > cap:
        raise CapacityError("extension would have order %d, beyond cap %d"
                            % (expected, cap))
    kernel_gens = ball_generating_set(kelems)
    group = BallGroup.generated(lifted_gens + list(kernel_gens), cap=expected)
    return _check_order(group, expected, "cocycle extension")


def ball_generating_set(elements):
    """Greedy generating set for a closed set of ball automorphisms."""
    elems = sorted(elements)
    if len(elems) == 1:
        return (elems[0],)
    target = len(elems)
    gens = []
    have = None
    for x in elems:
        if x.is_identity():
            continue
        if have is not None and x in have:
            continue
        gens.append(x)
        have = _close_ballauts(gens)
        if len(have) == target:
            break
    return tuple(gens)


def _close_ballauts(gens):
    ident = BallAut.identity(gens[0].degree, gens[0].radius)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# local wreath groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WreathLocal:
    """A local wreath extension on pairs (point, slot).

    The point (w, l) is encoded as w + |Omega| * l. `group` is the extension;
    the three generator families are kept by name so tests and callers can
    refer to them: `inner[l][a]` acts as `a` on slot l both at the center and
    around that slot's points, `outer[l][a]` is trivial at the center and
    acts as `a` around the points of the other slots, and `top[rho]` is the
    diagonal extension of the slot permutation rho.
    """

    group: BallGroup
    inner: dict
    outer: dict
    top: dict
    point_degree: int
    slot_count: int

    def encode(self, point, slot):
        return point + self.point_degree * slot

    def decode(self, x):
        return (x % self.point_degree, x // self.point_degree)


def build_wreath_local(F, P, cap=MATERIALIZE_CAP):
    """Wreath-shaped extension of F slots arranged by P, one radius out.

    Acts on pairs (point of F, slot of P). The result is generated by slot
    copies of F at the center paired with either matching or complementary
    behaviour around the neighbours, plus diagonal slot permutations; it is
    isomorphic to (F^slots x F^slots) semidirect P.
    """
    n, m = F.degree, P.degree
    D = n * m
    if D < 3:
        raise HypothesisError("need at least three points overall")
    expected = F.order ** (2 * m) * P.order
    if expected > cap:
        raise CapacityError("wreath extension would have order %d, beyond %d"
                            % (expected, cap))

    def iota(a, lam):
        images = list(range(D))
        for w in range(n):
            images[w + n * lam] = a(w) + n * lam
        return Perm(images)

    def slotperm(rho):
        images = list(range(D))
        for lam in range(m):
            for w in range(n):
                images[w + n * lam] = w + n * rho(lam)
        return Perm(images)

    inner = {}
    outer = {}
    for lam in range(m):
        inner[lam] = {}
        outer[lam] = {}
        for a in F.elements:
            ia = iota(a, lam)
            ident = Perm.identity(D)
            children_in = []
            children_out = []
            for x in range(D):
                slot = x // n
                children_in.append(ia if slot == lam else ident)
                children_out.append(ident if slot == lam else ia)
            inner[lam][a] = _as_radius2(ia, children_in)
            outer[lam][a] = _as_radius2(ident, children_out)
    top = {}
    for rho in P.elements:
        sp = slotperm(rho)
        top[rho] = _as_radius2(sp, [sp] * D)

    gens = []
    for lam in range(m):
        for a in F.generators:
            gens.append(inner[lam][a])
            gens.append(outer[lam][a])
    for rho in P.generators:
        gens.append(top[rho])
    group = BallGroup.generated(gens, cap=expected)
    _check_order(group, expected, "wreath extension")
    return WreathLocal(group=group, inner=inner, outer=outer, top=top,
                       point_degree=n, slot_count=m)


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TowerCertificate:
    """Evidence about a tower level too large to materialize.

    `order` comes from the layer formula. `generators` generate the level (the
    lifts of the previous level's generators plus one-block kernel twists).
    `compat_witnesses` maps (generator index, direction) to a member gluing to
    that generator, establishing nonempty fibers for the whole level;
    `seam` is a nontrivial member gluing to the identity, refuting rigidity;
    `central` is the full diagonal of a central element when one exists.
    """

    radius: int
    order: int
    generators: tuple
    compat_witnesses: dict
    seam: object
    central: object


@dataclass(frozen=True)
class TowerLevel:
    radius: int
    order: int
    group: object        # BallGroup, or None when only certified
    certificate: object  # TowerCertificate, or None when materialized


@dataclass(frozen=True)
class Tower:
    kind: str
    blocks: tuple
    pinned_block: object
    levels: tuple

    def level(self, radius):
        for lv in self.levels:
            if lv.radius == radius:
                return lv
        raise KeyError("no level of radius %d" % radius)


def build_tower(F, kind, levels, blocks=None, pinned_point=0,
                cap=MATERIALIZE_CAP):
    """Iterated block-constant self-extensions of a permutation group.

    Each step extends every element by gluing partners chosen from the level
    below, constant on each block of directions; the pinned kinds additionally
    force the partner on the pinned block to be the element itself. The three
    kinds differ only in their hypotheses:

    - "pinned-orbit": at least three orbits, used as the blocks; every block's
      pointwise stabilizer is nontrivial; the pinned block has at least two
      points.
    - "partition": a transitive group preserving the given blocks, where
      either the subgroup generated by point stabilizers is abelian, or the
      action is semiprimitive with a nontrivial center; block pointwise
      stabilizers must be nontrivial. No block is pinned.
    - "pinned-center": at least three orbits, used as the blocks; a central
      element moves the pinned point; the other blocks have nontrivial
      pointwise stabilizers.

    Levels beyond `cap` elements are certified rather than materialized, and
    certification stops after the first such level.
    """
    blocks, pinned = _tower_hypotheses(F, kind, blocks, pinned_point)
    base = BallGroup(
        F.degree, 1, [_r1(p) for p in F.elements],
        [_r1(p) for p in F.generators])
    out = [TowerLevel(radius=1, order=F.order, group=base, certificate=None)]
    central = _central_block_preserving(F, blocks, pinned_point, kind)
    for _ in range(levels - 1):
        prev = out[-1]
        if prev.group is None:
            break
        step = _tower_step(prev.group, blocks, pinned, central, cap)
        out.append(step)
    return Tower(kind=kind, blocks=tuple(blocks), pinned_block=pinned,
                 levels=tuple(out))


def _tower_hypotheses(F, kind, blocks, pinned_point):
    if kind == "pinned-orbit":
        orbits = list(F.orbits())
        if blocks is not None and [tuple(sorted(b)) for b in blocks] != [
                tuple(o) for o in orbits]:
            raise HypothesisError("pinned-orbit towers use the orbits as blocks")
        blocks = orbits
        if len(blocks) < 3:
            raise HypothesisError("need at least three orbits")
        for b in blocks:
            if F.pointwise_stabilizer(b).order == 1:
                raise HypothesisError(
                    "every orbit needs a nontrivial pointwise stabilizer")
        pinned = _block_index(blocks, pinned_point)
        if len(blocks[pinned]) < 2:
            raise HypothesisError("the pinned orbit needs at least two points")
        return blocks, pinned

    if kind == "partition":
        if blocks is None:
            raise HypothesisError("partition towers need explicit blocks")
        blocks = [tuple(sorted(b)) for b in blocks]
        flat = sorted(p for b in blocks for p in b)
        if flat != list(range(F.degree)):
            raise HypothesisError("blocks must partition the points")
        if not F.is_transitive():
            raise HypothesisError("partition towers need a transitive group")
        if not _preserves_blocks(F, blocks):
            raise HypothesisError("the group must map blocks to blocks")
        for b in blocks:
            if F.pointwise_stabilizer(b).order == 1:
                raise HypothesisError(
                    "every block needs a nontrivial pointwise stabilizer")
        plus_gens = []
        for p in range(F.degree):
            plus_gens.extend(F.stabilizer(p).generators)
        plus = PermGroup.generated(plus_gens, F.degree)
        abelian_route = plus.is_abelian() and _preserves_blocks(plus, blocks)
        central_route = False
        if not abelian_route:
            from .permcore import center, classify_action
            zen = center(F)
            report = classify_action(F)
            central_route = (report.semiprimitive and zen.order > 1
                             and _preserves_blocks(zen, blocks))
        if not (abelian_route or central_route):
            raise HypothesisError(
                "need either an abelian stabilizer closure or a semiprimitive "
                "action with nontrivial center")
        return blocks, None

    if kind == "pinned-center":
        orbits = list(F.orbits())
        if blocks is not None and [tuple(sorted(b)) for b in blocks] != [
                tuple(o) for o in orbits]:
            raise HypothesisError("pinned-center towers use the orbits as blocks")
        blocks = orbits
        if len(blocks) < 3:
            raise HypothesisError("need at least three orbits")
        from .permcore import center
        zen = center(F)
        if not any(z(pinned_point) != pinned_point for z in zen.elements):
            raise HypothesisError(
                "need a central element moving the pinned point")
        pinned = _block_index(blocks, pinned_point)
        for i, b in enumerate(blocks):
            if i != pinned and F.pointwise_stabilizer(b).order == 1:
                raise HypothesisError("every other orbit needs a nontrivial "
                                      "pointwise stabilizer")
        return blocks, pinned

    raise ValueError("unknown tower kind %r" % (kind,))


def _block_index(blocks, point):
    for i, b in enumerate(blocks):
        if point in b:
            return i
    raise HypothesisError("pinned point is outside the blocks")


def _preserves_blocks(G, blocks):
    block_of = {}
    for i, b in enumerate(blocks):
        for p in b:
            block_of[p] = i
    for g in G.generators:
        for b in blocks:
            if len({block_of[g(p)] for p in b}) != 1:
                return False
    return True


def _central_block_preserving(F, blocks, pinned_point, kind):
    from .permcore import center
    zen = center(F)
    for z in zen.elements:
        if z.is_identity():
            continue
        if kind == "pinned-center" and z(pinned_point) == pinned_point:
            continue
        if _preserves_blocks(PermGroup.generated([z], F.degree), blocks):
            return z
    return None


def _tower_step(prev, blocks, pinned, central, cap):
    d = prev.degree
    ident = prev.identity()
    id_fibers = [joint_compat_set(prev, ident, b) for b in blocks]
    expected = prev.order
    for i, fib in enumerate(id_fibers):
        if i == pinned:
            continue
        expected *= len(fib)
    if expected > cap:
        cert = _tower_certificate(prev, blocks, pinned, central, expected,
                                  id_fibers)
        return TowerLevel(radius=prev.radius + 1, order=expected,
                          group=None, certificate=cert)
    block_of = {}
    for i, b in enumerate(blocks):
        for w in b:
            block_of[w] = i
    elems = []
    for a in prev.elements:
        options = []
        for i, b in enumerate(blocks):
            if i == pinned:
                options.append((a,))
                continue
            fib = joint_compat_set(prev, a, b)
            if len(fib) != len(id_fibers[i]):
                raise RuntimeError("tower fibers are not uniform; bug")
            options.append(fib)
        for combo in itertools.product(*options):
            children = tuple(combo[block_of[w]] for w in range(d))
            elems.append(BallAut(a, children))
    group = BallGroup.from_elements(elems, verify=True)
    level = _check_order(group, expected, "tower step")
    return TowerLevel(radius=prev.radius + 1, order=expected,
                      group=level, certificate=None)


def _tower_certificate(prev, blocks, pinned, central, order, id_fibers):
    d = prev.degree
    block_of = {}
    for i, b in enumerate(blocks):
        for w in b:
            block_of[w] = i

    def lift(a):
        children = [None] * d
        for i, b in enumerate(blocks):
            if i == pinned:
                c = a
            else:
                fib = joint_compat_set(prev, a, b)
                if not fib:
                    raise RuntimeError("tower fiber empty; bug")
                c = fib[0]
            for w in b:
                children[w] = c
        return BallAut(a, tuple(children))

    ident = prev.identity()
    gens = [lift(g) for g in prev.generators]
    for i, fib in enumerate(id_fibers):
        if i == pinned:
            continue
        fib_gens = ball_generating_set(fib)
        for x in fib_gens:
            if x.is_identity():
                continue
            children = [None] * d
            for j, b in enumerate(blocks):
                c = x if j == i else ident
                for w in b:
                    children[w] = c
            gens.append(BallAut(ident, tuple(children)))

    witnesses = {}
    for gi, g in enumerate(gens):
        for w in range(d):
            partner_root = g.children[w]
            children = [None] * d
            for j, b in enumerate(blocks):
                if j == block_of[w]:
                    c = g.root
                else:
                    fib = joint_compat_set(prev, partner_root, b)
                    if not fib:
                        raise RuntimeError("tower fiber empty; bug")
                    c = fib[0]
                for u in b:
                    children[u] = c
            if pinned is not None and block_of[w] != pinned:
                # the pinned block of the witness must carry its own root
                for u in blocks[pinned]:
                    children[u] = partner_root
            witness = BallAut(partner_root, tuple(children))
            if not ball_compatible(g, witness, w):
                raise RuntimeError("constructed witness does not glue; bug")
            witnesses[(gi, w)] = witness

    seam = None
    for i, fib in enumerate(id_fibers):
        if i == pinned:
            continue
        nontrivial = [x for x in fib if not x.is_identity()]
        if nontrivial:
            children = [None] * d
            for j, b in enumerate(blocks):
                c = nontrivial[0] if j == i else ident
                for w in b:
                    children[w] = c
            seam = BallAut(ident, tuple(children))
            break

    central_lift = None
    if central is not None:
        # climb the central element to the previous radius as a full diagonal
        c = _r1(central)
        while c.radius < prev.radius:
            c = BallAut(c, (c,) * d)
        if c in prev:
            central_lift = BallAut(c, (c,) * d)
            for g in gens:
                if central_lift * g != g * central_lift:
                    raise RuntimeError("diagonal central element does not "
                                       "commute; bug")

    return TowerCertificate(radius=prev.radius + 1, order=order,
                            generators=tuple(gens),
                            compat_witnesses=witnesses,
                            seam=seam, central=central_lift)


def tower_member(level_below, blocks, pinned, candidate):
    """Does `candidate` belong to the tower level above `level_below`?

    Decidable without materializing the level: the root must belong below,
    the partners must be constant on blocks and glue jointly, and the pinned
    block must carry the root itself.
    """
    if candidate.root not in level_below:
        return False
    for i, b in enumerate(blocks):
        c = candidate.children[b[0]]
        if any(candidate.children[w] != c for w in b[1:]):
            return False
        if pinned is not None and i == pinned:
            if c != candidate.root:
                return False
            continue
        if any(not ball_compatible(candidate.root, c, w) for w in b):
            return False
        if c not in level_below:
            return False
    return True
