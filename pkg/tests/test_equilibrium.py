import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from expgames.equilibrium import (
    Equilibrium, NotEquilibrium, Unknown, best_response_dynamics, composition_count,
    compositions, grid_improvement, grid_profiles, grid_refute, is_certifiable,
    pure_deviation_refute, search_equilibrium, verify_equilibrium,
)
from expgames.errors import CapExceeded
from expgames.expectation import eval_goal, point_mass, profile, pure_profile, uniform
from expgames.game import make_game, strategy_count
from expgames.logic import Const, Distance, ModalAtom, Neg, Product, Var
from gamegen import random_game, random_profile, seeds
from oracles import brute_best_value, grid_points, witness_reverifies

HALF = F(1, 2)


def solo(goal=None):
    return make_game(1, {"P1": ["p1"]}, {"P1": Var("p1")}, {"P1": goal} if goal else None)


def test_compositions():
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert list(compositions(1, 3)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for total, parts in [(4, 2), (3, 3), (5, 4)]:
        got = list(compositions(total, parts))
        assert len(got) == len(set(got)) == composition_count(total, parts)
        assert sorted(got, reverse=True) == got


def test_certifiable_goals():
    assert is_certifiable(ModalAtom(0))
    assert is_certifiable(Const(HALF))
    assert not is_certifiable(Neg(ModalAtom(0)))
    assert not is_certifiable(Product(ModalAtom(0), ModalAtom(0)))


def test_pure_examples(example2):
    assert pure_deviation_refute(solo(), 0, pure_profile(1)) is None
    w = pure_deviation_refute(example2, 0, profile(uniform(example2, 0), point_mass(1, 1)))
    assert w.new_strategy == point_mass(0, 1)
    assert (w.old_value, w.new_value) == (HALF, 1)
    w = pure_deviation_refute(example2, 1, pure_profile(0, 0))
    assert w.new_strategy == point_mass(1, 1)
    assert (w.old_value, w.new_value) == (0, 1)


def test_grid_example():
    g = solo(Neg(Distance(ModalAtom(0), Const(HALF))))
    w = grid_refute(g, 0, pure_profile(0), 2)
    assert w.new_strategy == uniform(g, 0)
    assert (w.old_value, w.new_value) == (HALF, 1)
    assert pure_deviation_refute(g, 0, pure_profile(0)) is None


def test_grid_errors(example1):
    with pytest.raises(ValueError):
        grid_refute(example1, 0, pure_profile(0, 0), 0)
    g = make_game(2, {"P1": ["a", "b", "c"]}, {"P1": Var("a")}, {"P1": Neg(ModalAtom(0))})
    with pytest.raises(CapExceeded):
        grid_refute(g, 0, pure_profile(0), 50, cap=1000)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_grid_dominates_pure_and_refines(seed):
    rng = random.Random(seed)
    g = random_game(rng, n_max=2, m_max=3)
    p = random_profile(rng, g)
    for i in range(g.n):
        pure = pure_deviation_refute(g, i, p)
        assert grid_refute(g, i, p, 1) == pure
        g2, g4 = grid_improvement(g, i, p, 2), grid_improvement(g, i, p, 4)
        if pure is not None:
            assert g2 >= pure.improvement
        assert g4 >= g2
        if strategy_count(g, i) <= 9:
            best = brute_best_value(g, i, p, 2)
            w = grid_refute(g, i, p, 2)
            if best > eval_goal(g, i, p):
                assert w.new_value == best
            else:
                assert w is None


def test_verify_examples(example1, example2):
    r = verify_equilibrium(example1, pure_profile(1, 1))
    assert r.overall == Equilibrium("exact")
    assert r.players == (Equilibrium("exact"),) * 2

    r = verify_equilibrium(example2, profile(uniform(example2, 0), point_mass(1, 1)))
    assert isinstance(r.overall, NotEquilibrium) and r.overall.witness.player == 0

    r = verify_equilibrium(example2, profile(uniform(example2, 0), uniform(example2, 1)))
    assert isinstance(r.players[0], Unknown)
    w = r.overall.witness
    assert w.player == 1 and (w.old_value, w.new_value) == (0, HALF)


def test_unknown_when_only_grid_is_available(example2):
    # P1 is content at (0,0) and cannot be certified; P2 can improve
    r = verify_equilibrium(example2, pure_profile(0, 0), 4)
    assert isinstance(r.players[0], Unknown) and r.players[0].grid_denominator == 4
    assert isinstance(r.players[1], NotEquilibrium)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_certification_is_sound_on_a_finer_grid(seed):
    rng = random.Random(seed)
    g = random_game(rng, n_max=2, m_max=2, atomic_goals=True)
    result = search_equilibrium(g, 1)
    assert result.certified
    p = result.profile
    for i in range(g.n):
        assert brute_best_value(g, i, p, 2) <= eval_goal(g, i, p)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_witnesses_reverify(seed):
    rng = random.Random(seed)
    g = random_game(rng, n_max=3, m_max=3)
    p = random_profile(rng, g)
    for d in (1, 3):
        for v in verify_equilibrium(g, p, d).players:
            if isinstance(v, NotEquilibrium):
                assert witness_reverifies(g, p, v.witness)


def test_dynamics_examples(example1, example2):
    for start in [pure_profile(0, 0), pure_profile(1, 0), profile(uniform(example1, 0), point_mass(1, 0))]:
        trace = best_response_dynamics(example1, start)
        assert trace.status == "fixed-point"
        assert verify_equilibrium(example1, trace.steps[-1].profile).overall == Equilibrium("exact")

    trace = best_response_dynamics(example2, pure_profile(0, 0))
    assert trace.status == "cycle" and trace.period == 4

    trace = best_response_dynamics(example2, pure_profile(0, 0), max_iters=0)
    assert trace.status == "max-iters" and len(trace.steps) == 1


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_dynamics_changes_one_player_at_a_time(seed):
    rng = random.Random(seed)
    g = random_game(rng, n_max=3, m_max=3)
    trace = best_response_dynamics(g, random_profile(rng, g), max_iters=20, denominator=2)
    for before, after in zip(trace.steps, trace.steps[1:]):
        changed = [i for i in range(g.n) if before.profile[i] != after.profile[i]]
        assert changed == [after.mover]
        assert after.values[after.mover] > before.values[after.mover]


def test_search_examples(example1, example2):
    r = search_equilibrium(example1, 1)
    assert r.certified and r.profile == pure_profile(1, 1)
    r = search_equilibrium(example2, 2)
    assert not r.certified and r.epsilon > 0 and r.examined == 9
    r = search_equilibrium(solo(), 1)
    assert r.certified and r.profile == pure_profile(1)


def test_grid_profile_count(example2):
    assert len(list(grid_profiles(example2, 4))) == 25
    with pytest.raises(CapExceeded):
        grid_profiles(example2, 4, cap=20)


def test_grid_points_oracle_agrees_with_compositions():
    assert sorted(tuple(sorted(w.items())) for w in grid_points(3, 3)) == sorted(
        tuple((s, F(c, 3)) for s, c in enumerate(comp) if c) for comp in compositions(3, 3))
