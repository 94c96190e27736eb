"""Restriction counting, extensions, seams, and discreteness."""

import random

import pytest

from treeball.balls import (BallAut, BallGroup, ball_points, full_aut,
                            full_aut_order, random_ball_aut)
from treeball.errors import CapacityError, HypothesisError
from treeball.permcore import (Perm, PermGroup, is_subnormal,
                               normal_subgroups, subnormal_depth)
from treeball.universal import (assemble_extension, count_restrictions,
                                edge_inversion, extend_to_ball,
                                is_discrete_universal, iter_extensions,
                                label_respecting_map, local_action_group,
                                pk_local_action, restriction_count_factors,
                                seam_groups)


def hidden_swap_group():
    e1 = BallAut(Perm((0, 1, 2)))
    swap = BallAut(Perm((0, 2, 1)))
    return BallGroup.generated([BallAut(e1, (swap, e1, e1))])


def test_rigid_groups_count_themselves(gamma_s3, delta_s3, phi_a3):
    for n in range(2, 7):
        assert count_restrictions(gamma_s3, n) == 6
    for n in range(2, 5):
        assert count_restrictions(delta_s3, n) == 12
        assert count_restrictions(phi_a3, n) == 3


def test_full_lift_counts_match_the_ball_group(phi_s3):
    assert count_restrictions(phi_s3, 2) == 48
    assert count_restrictions(phi_s3, 3) == 3072
    assert count_restrictions(phi_s3, 4) == 12582912
    assert count_restrictions(phi_s3, 4) == full_aut_order(3, 4)


def test_parity_groups_count_at_depth_three(pi_one, pi_both):
    assert count_restrictions(pi_one, 3) == 192
    assert count_restrictions(pi_both, 3) == 192


def test_streaming_agrees_with_the_formula(gamma_s3, phi_s3, phi_a3,
                                           pi_one, pi_both):
    for group, radius in [(gamma_s3, 3), (gamma_s3, 4), (phi_a3, 3),
                          (pi_one, 3), (pi_both, 3), (phi_s3, 3)]:
        seen = set(iter_extensions(group, radius))
        assert len(seen) == count_restrictions(group, radius)
        sample = next(iter(seen))
        assert sample.radius == radius
        assert sample.project(group.radius) in group


def test_count_failure_modes(phi_s3, gamma_s3):
    with pytest.raises(HypothesisError):
        count_restrictions(phi_s3, 3, stabilizer_only=False)
    with pytest.raises(HypothesisError):
        count_restrictions(phi_s3, 1)
    with pytest.raises(HypothesisError):
        count_restrictions(hidden_swap_group(), 3)
    with pytest.raises(CapacityError):
        count_restrictions(phi_s3, 8)


def test_factored_counts_multiply_out(phi_s3):
    factors = restriction_count_factors(phi_s3, 5)
    total = 1
    for f in factors:
        if "^" in f:
            base, exp = f.split("^")
            total *= int(base) ** int(exp)
        else:
            total *= int(f)
    direct = 48
    for depth in range(1, 4):
        direct *= (4 ** (2 ** (depth - 1))) ** 3
    assert total == direct


def test_local_action_cocycle_identity():
    rng = random.Random(77)
    inner = ((),) + ball_points(3, 2)
    checked = 0
    for _ in range(120):
        g = random_ball_aut(3, 3, rng)
        h = random_ball_aut(3, 3, rng)
        gh = g * h
        for v in inner:
            assert gh.local_action(v, 1) == \
                g.local_action(h.apply(v), 1) * h.local_action(v, 1)
            checked += 1
    assert checked >= 1000


def test_label_respecting_maps_compose_by_the_target():
    words = [(), (0,), (2, 1), (0, 1, 0), (1, 2, 1, 0)]
    for w in range(3):
        inv = edge_inversion(w)
        assert inv(()) == (w,)
        for word in words:
            assert inv(inv(word)) == tuple(word)
    translate = label_respecting_map((0, 1))
    for word in words:
        moved = translate(word)
        assert moved != tuple(word)
        double = label_respecting_map((0, 1, 0, 1))
        assert translate(translate(word)) == double(word)


def test_seam_groups_of_the_full_lift(phi_s3):
    seams = seam_groups(phi_s3)
    assert sorted(seams) == [(0,), (1,), (2,)]
    for (w,), P in seams.items():
        assert P.order == 2
        nontrivial = next(p for p in P.elements if not p.is_identity())
        assert nontrivial(w) == w


def test_seams_sit_normally_one_level_down(census_rows):
    for row in census_rows:
        level1 = local_action_group(row.group)
        for (w,), seam in seam_groups(row.group).items():
            stab = level1.stabilizer(w)
            assert all(p in stab for p in seam.elements)
            assert any(seam.order == n.order and
                       set(seam.elements) == set(n.elements)
                       for n in normal_subgroups(stab))


def test_deep_seams_sit_subnormally(lift_rows):
    checked = 0
    for row in lift_rows:
        if row.group is None or row.radius != 3:
            continue
        level1 = local_action_group(row.group)
        for w, seam in seam_groups(row.group).items():
            stab = level1.stabilizer(w[-1])
            assert all(p in stab for p in seam.elements)
            assert is_subnormal(stab, seam)
            assert subnormal_depth(stab, seam) <= 2
            checked += 1
    assert checked > 0


def test_discreteness_verdicts(census_rows, gamma_s3, phi_s3, pi_one,
                               pi_both, flips6):
    for row in census_rows:
        assert is_discrete_universal(row.group) == row.trivial_seams
    assert is_discrete_universal(gamma_s3)
    assert is_discrete_universal(hidden_swap_group())
    assert not is_discrete_universal(phi_s3)
    assert not is_discrete_universal(pi_one)
    assert not is_discrete_universal(pi_both)
    from treeball.constructions import build_tower, build_wreath_local
    wreath = build_wreath_local(PermGroup.cyclic(2), PermGroup.cyclic(2))
    assert not is_discrete_universal(wreath.group)
    tower = build_tower(flips6, "pinned-orbit", 3)
    for lv in tower.levels:
        assert not is_discrete_universal(lv.group)


def test_discreteness_matches_constant_counts(census_rows):
    for row in census_rows:
        k = row.group.radius
        counts = [count_restrictions(row.group, n) for n in (k, k + 1, k + 2)]
        if row.trivial_seams:
            assert counts == [row.order] * 3
        else:
            assert counts[0] < counts[1] < counts[2]


def test_extend_to_ball_deterministic_and_exhaustive(phi_s3, gamma_s3):
    seed = phi_s3.identity()
    one = extend_to_ball(phi_s3, seed, 3)
    assert one.radius == 3
    assert one.project(2) == seed
    everything = set(extend_to_ball(phi_s3, seed, 3, chooser="exhaustive"))
    assert len(everything) == 64
    assert one in everything
    assert all(e.project(2) == seed for e in everything)
    for g in gamma_s3.elements:
        exts = list(extend_to_ball(gamma_s3, g, 4, chooser="exhaustive"))
        assert len(exts) == 1
        assert extend_to_ball(gamma_s3, g, 4) == exts[0]
    with pytest.raises(HypothesisError):
        extend_to_ball(phi_s3, BallAut.identity(3, 2), 1)
    with pytest.raises(ValueError):
        extend_to_ball(phi_s3, seed, 3, chooser="greedy")
    outsider = next(a for a in full_aut(3, 2) if a not in gamma_s3)
    with pytest.raises(HypothesisError):
        extend_to_ball(gamma_s3, outsider, 3)


def test_assemble_extension_round_trip():
    rng = random.Random(13)
    for _ in range(10):
        g = random_ball_aut(3, 3, rng)
        charts = {(): g.project(2)}
        for w in range(3):
            charts[(w,)] = g.local_action((w,), 2)
        assert assemble_extension(3, 3, charts) == g


def test_pk_local_action_levels(s3, gamma_s3, pi_one, phi_s3):
    level1 = pk_local_action(s3, 1)
    assert level1.order == 6
    assert level1.radius == 1
    level2 = pk_local_action(s3, 2)
    assert level2.order == 48
    assert set(level2.elements) == set(phi_s3.elements)
    assert pk_local_action(gamma_s3, 3).order == 6
    assert pk_local_action(pi_one, 3).order == 192
    back_down = pk_local_action(phi_s3, 1)
    assert back_down.radius == 1
    assert back_down.order == 6
    with pytest.raises(HypothesisError):
        pk_local_action(hidden_swap_group(), 3)
    with pytest.raises(CapacityError):
        pk_local_action(s3, 4)


def test_local_action_group_collects_all_charts(phi_s3, gamma_s3, pi_one):
    assert local_action_group(phi_s3).order == 6
    assert local_action_group(gamma_s3).order == 6
    assert local_action_group(pi_one).order == 6
    assert local_action_group(hidden_swap_group()).order == 2
