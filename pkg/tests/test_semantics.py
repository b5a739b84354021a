import threading

import pytest

from pytopoapal import (BOTTOM, Announce, Atom, Box, BoxMode, ModelChecker,
                        PointSet, TopoFrame, TopoModel, Topology,
                        UnknownSymbolError, counterexample, definable_family,
                        evaluate, extension, find_distinguishing, parse,
                        update, valid_in_model)
from pytopoapal.model import NeighbourhoodFunction, enumerate_phi
from pytopoapal.semantics import (BoundedCache, build_family,
                                  default_candidates, know_operator)
from pytopoapal.testkit import check_identities, family_problems, random_model

from .helpers import mask, single_cell_model


def test_extension_jewel(jewel, theta_prime):
    assert extension(jewel, theta_prime, parse("j")) == jewel.valuation["j"]
    assert extension(jewel, theta_prime, parse("int(j)")) == mask(jewel, "110", "111")
    assert extension(jewel, theta_prime, parse("false")) == 0
    assert extension(jewel, theta_prime, parse("true")) == jewel.space.full


def test_extension_is_inside_domain(jewel, theta_prime):
    u = mask(jewel, "110", "111")
    restricted = theta_prime.restricted(u)
    assert extension(jewel, restricted, parse("~j")) == 0
    assert extension(jewel, restricted, parse("d")) == u


def test_know_operator(jewel, theta_prime):
    e = jewel.frame.agent("e")
    assert know_operator(theta_prime, e, jewel.valuation["t"]) == mask(jewel, "011", "111")


def test_update_jewel(jewel, theta_prime):
    updated = update(jewel, theta_prime, parse("j"))
    k = jewel.space.index["111"]
    assert updated.domain == mask(jewel, "110", "111")
    assert updated.assign(k, jewel.frame.agent("e")) == mask(jewel, "111")
    assert updated.assign(k, jewel.frame.agent("i")) == mask(jewel, "110", "111")
    assert updated.name == "thetaPrime^(j)"


def test_update_by_tautology_is_identity(jewel, theta):
    assert update(jewel, theta, parse("j | ~j")) == theta


def test_update_composition(jewel, theta_prime):
    phi, psi = parse("j"), parse("K_e t")
    twice = update(jewel, update(jewel, theta_prime, phi), psi)
    assert twice == update(jewel, theta_prime, parse("<j> int(K_e t)"))


def test_announcement_is_vacuous_outside_interior(jewel, theta):
    s = jewel.situation("theta", "000")
    # Int[[~d]] is the undiscovered cell, Int[[j & ~d]] is empty
    assert evaluate(jewel, s, parse("[j & ~d] false"))
    assert not evaluate(jewel, s, parse("[~d] false"))


def test_unknown_symbols(jewel, theta):
    checker = ModelChecker(jewel)
    with pytest.raises(UnknownSymbolError):
        checker.extension(theta, parse("x"))
    with pytest.raises(UnknownSymbolError):
        checker.extension(theta, parse("K_z j"))
    assert checker.extension(theta, BOTTOM) == 0


def test_family_discrete_singletons():
    space = PointSet(["a", "b"])
    theta = NeighbourhoodFunction.from_partitions([[0b01, 0b10]], 2, "theta")
    model = TopoModel(TopoFrame(Topology.discrete(space), ["a"], {"theta": theta}), {"p": 0b01})
    family = definable_family(model, theta)
    assert len(family) == 4
    assert all(m in family for m in range(4))
    for m, witness in family.members():
        assert extension(model, theta, witness) == m


def test_family_indiscrete_without_atoms():
    model = single_cell_model(["x", "y", "z"])
    family = definable_family(model, model.generators["theta"])
    assert len(family) == 2
    assert [m for m, _ in family.members()] == [0, 0b111]
    assert 0b001 not in family


def test_family_of_empty_function():
    model = single_cell_model(["x"], valuation={"p": ["x"]})
    family = build_family(model, NeighbourhoodFunction.empty(1, 1))
    assert len(family) == 1
    assert family.opens() == (0,)


def test_jewel_family_contains_every_open(jewel, theta, theta_prime):
    for t in (theta, theta_prime):
        family = definable_family(jewel, t)
        assert set(family.opens()) == jewel.topology.opens
        for u in family.opens():
            assert extension(jewel, t, family.witness(u)) == u
        assert family_problems(jewel, t) == []
    restricted = theta.restricted(mask(jewel, "110", "111"))
    with pytest.raises(KeyError):
        definable_family(jewel, restricted).witness(mask(jewel, "000"))


def test_family_is_shared_between_checkers(jewel, theta):
    a = ModelChecker(jewel).family(theta)
    b = ModelChecker(jewel, BoxMode.EFFORT).family(theta)
    assert a is b


def test_family_cache_under_threads(small_cfg):
    model = random_model(small_cfg)
    thetas = enumerate_phi(model.frame)
    results = {}

    def work(n):
        results[n] = [ModelChecker(model).family(t) for t in thetas]

    threads = [threading.Thread(target=work, args=(n,)) for n in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for n in range(1, 4):
        assert all(a is b for a, b in zip(results[0], results[n]))


def test_validity(jewel):
    assert valid_in_model(jewel, parse("[j] false <-> ~int(j)"))
    assert valid_in_model(jewel, parse("K_e t -> int(t)"))
    assert not valid_in_model(jewel, parse("K_e t"))
    s = counterexample(jewel, parse("K_e t"))
    assert not evaluate(jewel, s, parse("K_e t"))


def test_box_modes_on_indiscrete_model():
    model = single_cell_model(["x", "y"], valuation={"p": ["x"]})
    s = model.situation("theta", "x")
    f = parse("box p")
    assert evaluate(model, s, f, BoxMode.ANNOUNCEMENT)
    assert evaluate(model, s, f, BoxMode.EFFORT)
    assert not evaluate(model, s, parse("box K_a p"))


def test_effort_ranges_over_all_opens():
    # y and z agree on every atom, only the topology tells them apart
    model = single_cell_model(["x", "y", "z"], subbase=[["x", "y"]], valuation={"p": ["x", "y"]})
    theta = model.generators["theta"]
    announcement = ModelChecker(model, BoxMode.ANNOUNCEMENT)
    effort = ModelChecker(model, BoxMode.EFFORT)
    assert set(effort.box_range(theta)) == {0b011, 0b111}
    assert set(announcement.box_range(theta)) <= set(effort.box_range(theta))


def test_find_distinguishing_jewel(jewel):
    assert find_distinguishing(jewel, default_candidates(jewel)) is None


def test_find_distinguishing_separating_atoms():
    model = single_cell_model(
        ["x", "y", "z"],
        subbase=[["x"], ["x", "y"]],
        valuation={"p": ["x"], "q": ["y"]},
    )
    assert find_distinguishing(model, default_candidates(model)) is None


def test_find_distinguishing_reports_a_real_disagreement(small_cfg):
    for trial in range(10):
        model = random_model(small_cfg, small_cfg.rng(trial))
        found = find_distinguishing(model, default_candidates(model))
        if found is None:
            continue
        assert found.announcement != found.effort
        s = found.situation
        assert evaluate(model, s, found.formula, BoxMode.ANNOUNCEMENT) == found.announcement
        assert evaluate(model, s, found.formula, BoxMode.EFFORT) == found.effort


def test_default_candidates_have_box(jewel):
    candidates = default_candidates(jewel)
    assert candidates
    assert all(f.box_depth > 0 for f in candidates)


@pytest.mark.parametrize("mode", list(BoxMode))
def test_identities_jewel(jewel, theta, theta_prime, mode):
    pairs = [("j", "K_e t"), ("~d", "t"), ("K_i j", "int(d)"), ("box ~K_i t", "[j] K_e t")]
    for t in (theta, theta_prime):
        for phi, psi in pairs:
            assert check_identities(jewel, t, parse(phi), parse(psi), mode) == []


def test_identities_random(small_cfg):
    from pytopoapal.testkit import FormulaGenerator

    for trial in range(25):
        rng = small_cfg.rng(trial)
        model = random_model(small_cfg, rng)
        generator = FormulaGenerator(small_cfg, rng, model.atoms(), model.agents)
        thetas = enumerate_phi(model.frame)
        for t in thetas[:6]:
            phi, psi = generator.formula(), generator.formula()
            assert check_identities(model, t, phi, psi) == []
            assert family_problems(model, t) == []


@pytest.mark.parametrize("mode", list(BoxMode))
def test_announcing_a_witness_restricts_to_its_open(small_cfg, mode):
    from pytopoapal.testkit import FormulaGenerator

    checked = 0
    for trial in range(40):
        rng = small_cfg.rng(trial)
        model = random_model(small_cfg, rng)
        generator = FormulaGenerator(small_cfg, rng, model.atoms(), model.agents)
        for t in enumerate_phi(model.frame)[:4]:
            f = generator.formula()
            family = definable_family(model, t)
            for u in family.opens():
                if not u:
                    continue
                w = family.witness(u)
                announced = extension(model, t, Announce(w, f), mode)
                assert announced & u == extension(model, t.restricted(u), f, mode)
                checked += 1
    assert checked


@pytest.mark.slow
def test_identities_acceptance():
    from pytopoapal.testkit import FormulaGenerator, GenConfig

    cfg = GenConfig.from_preset("suite", seed=11)
    checked = 0
    for trial in range(200):
        rng = cfg.rng(trial)
        model = random_model(cfg, rng)
        generator = FormulaGenerator(cfg, rng, model.atoms(), model.agents)
        for t in enumerate_phi(model.frame)[:3]:
            for _ in range(2):
                assert check_identities(model, t, generator.formula(), generator.formula()) == []
                checked += 1
            assert family_problems(model, t) == []
    assert checked >= 500


def test_atom_outside_valuation_in_family():
    # the reserved atom of false is always available
    model = single_cell_model(["x"])
    assert extension(model, model.generators["theta"], Atom("_bot")) == 0
    assert evaluate(model, model.situation("theta", "x"), Box(parse("true")))


def test_bounded_cache_evicts_least_recently_used():
    cache = BoundedCache(2)
    assert cache.setdefault("a", 1) == 1
    assert cache.setdefault("b", 2) == 2
    assert cache.get("a") == 1
    assert cache.setdefault("c", 3) == 3
    assert "b" not in cache
    assert cache.get("a") == 1
    assert cache.setdefault("c", 4) == 3
    assert len(cache) == 2


def test_family_cache_is_bounded(monkeypatch):
    import pytopoapal.semantics as semantics

    monkeypatch.setattr(semantics, "FAMILY_CACHE_SIZE", 3)
    model = single_cell_model(["x", "y", "z"], subbase=[["x"], ["x", "y"]], valuation={"p": ["x"]})
    checker = ModelChecker(model)
    thetas = enumerate_phi(model.frame)
    assert len(thetas) > 3
    for t in thetas:
        checker.family(t)
    assert len(checker.families) == 3
