import pytest

from pytopoapal import (Atom, ConfigError, SchemaError, box_depth,
                        model_to_dict, parse, size, validate)
from pytopoapal.formula import is_el
from pytopoapal.model import enumerate_phi
from pytopoapal.testkit import (SCHEMAS, FormulaEnumerator, FormulaGenerator,
                                GenConfig, SoundnessReport, SoundnessSuite,
                                Verdict, box_oracle, family_problems,
                                instantiate_schema, load_bindings,
                                oracle_agreement, random_bindings,
                                random_formula, random_model, soundness_suite,
                                submodel)

from .helpers import mask, overlapping_model, single_cell_model


# Configuration

def test_presets():
    cfg = GenConfig.from_preset("small")
    assert cfg.max_points == 5
    assert GenConfig.from_preset("small", seed=None).seed == 0
    assert GenConfig.from_preset("suite", seed=9).seed == 9


@pytest.mark.parametrize(
    "overrides",
    [{"max_points": 13}, {"num_agents": 0}, {"num_atoms": 5}, {"subbase_density": 1.5}, {"seed": -1}],
)
def test_bad_config(overrides):
    with pytest.raises(ConfigError):
        GenConfig(**overrides)


def test_bad_preset():
    with pytest.raises(ConfigError):
        GenConfig.from_preset("huge")
    with pytest.raises(ConfigError):
        GenConfig.from_preset("small", colour="red")


# Generation

def test_random_models_are_valid(small_cfg):
    for trial in range(30):
        model = random_model(small_cfg, small_cfg.rng(trial))
        assert validate(model) == []
        assert 1 <= len(model.space) <= small_cfg.max_points


def test_random_model_is_deterministic():
    cfg = GenConfig(seed=42)
    assert model_to_dict(random_model(cfg)) == model_to_dict(random_model(cfg))


def test_one_point_model():
    model = random_model(GenConfig(max_points=1))
    assert len(model.space) == 1
    assert model.topology.opens == {0, 1}
    assert validate(model) == []


@pytest.mark.parametrize("fragment", ["EL", "PAL", "APAL"])
def test_random_formula_fragment(fragment):
    cfg = GenConfig(seed=4, max_formula_size=15, max_box_depth=2)
    generator = FormulaGenerator(cfg, cfg.rng())
    for _ in range(200):
        f = generator.formula(fragment)
        assert size(f) <= cfg.max_formula_size
        assert box_depth(f) <= cfg.max_box_depth
        if fragment == "EL":
            assert is_el(f)
        if fragment == "PAL":
            assert box_depth(f) == 0


def test_random_formula_is_deterministic():
    cfg = GenConfig(seed=8)
    assert random_formula(cfg) == random_formula(cfg)
    with pytest.raises(ValueError):
        random_formula(cfg, "LTL")


def test_necessity_form_has_one_hole(small_cfg):
    generator = FormulaGenerator(small_cfg, small_cfg.rng())
    marker = Atom("hole")
    for _ in range(20):
        f = generator.necessity_form()(marker)
        assert "hole" in str(f)


# Schemas

def test_schema_names():
    assert list(SCHEMAS) == [
        "P", "K-K", "K-T", "K-4", "K-5", "int-K", "int-T", "int-4", "K_int",
        "R1", "R2", "R3", "R4", "R5", "R6", "R7",
    ]


def test_instantiate_schema():
    p, q = parse("p"), parse("q")
    assert instantiate_schema("K_int", {"phi": p, "agent": "a"}) == parse("K_a p -> int(p)")
    assert instantiate_schema("R2", {"phi": p, "psi": q}) == parse("[p]~q <-> (int(p) -> ~[p]q)")
    assert instantiate_schema(SCHEMAS["R7"], {"phi": parse("box p"), "chi": q}) == parse(
        "box box p -> [q] box p"
    )
    assert instantiate_schema("int-T", {"phi": p, "agent": "ignored"}) == parse("int(p) -> p")


def test_schema_errors():
    p = parse("p")
    with pytest.raises(SchemaError):
        instantiate_schema("K-6", {"phi": p})
    with pytest.raises(SchemaError):
        instantiate_schema("K-4", {"phi": p})
    with pytest.raises(SchemaError):
        instantiate_schema("R1", {"phi": p, "p": parse("~q")})
    with pytest.raises(SchemaError):
        instantiate_schema("R7", {"phi": p, "chi": parse("box q")})


def test_random_bindings_respect_fragment(small_cfg):
    generator = FormulaGenerator(small_cfg, small_cfg.rng())
    for _ in range(50):
        bindings = random_bindings(generator)
        assert box_depth(bindings["chi"]) == 0
        assert isinstance(bindings["p"], Atom)
        instantiate_schema("R7", bindings)


def test_jewel_bindings_are_sound(jewel):
    suite = SoundnessSuite(GenConfig(), verbose=False)
    bindings = load_bindings("jewel")
    assert len(bindings) == 4
    for b in bindings:
        report = suite.check_model(jewel, b)
        assert report.ok, report.text()
        assert sum(report.checked.values()) == len(SCHEMAS)


# Soundness suite

def test_zero_trials():
    report = soundness_suite(GenConfig(), 0)
    assert report.trials == 0
    assert report.ok
    assert report.to_json() == {"schema": [], "trials": 0, "failures": []}


def test_small_run(capsys):
    cfg = GenConfig.from_preset("small", seed=1)
    report = SoundnessSuite(cfg).run(3)
    assert report.ok, report.text()
    assert report.trials == 3
    assert set(SCHEMAS) <= set(report.checked)
    assert {"DR2", "DR3", "DR4"} <= set(report.checked)
    assert report.text().splitlines()[0] == "3 trials"
    assert "trial 2:" in capsys.readouterr().out


def test_run_is_deterministic():
    cfg = GenConfig.from_preset("small", seed=2)
    assert soundness_suite(cfg, 2).to_json() == soundness_suite(cfg, 2).to_json()


@pytest.mark.parametrize("shrink", [False, True])
def test_corrupted_model_is_detected(shrink):
    suite = SoundnessSuite(GenConfig(), schemas=["K-4"], shrink=shrink, verbose=False)
    report = suite.check_model(overlapping_model(), {"phi": parse("p"), "agent": "a"}, trial=0)
    assert not report.ok
    (failure,) = report.failures
    assert failure.schema == "K-4"
    assert failure.situation == "(x, broken)"
    assert failure.trial == 0
    assert failure.model["points"] == ["x", "y", "z"]
    assert report.to_json()["failures"][0]["instance"] == failure.instance


def test_shrink_simplifies_bindings():
    suite = SoundnessSuite(GenConfig(), verbose=False)
    model = overlapping_model()
    shrunk_model, bindings = suite.shrink_failure(
        model, SCHEMAS["K-4"], {"phi": parse("p & (p | p)"), "agent": "a"}
    )
    assert bindings["phi"] == parse("p")
    assert shrunk_model is model


def test_submodel(jewel):
    keep = mask(jewel, "100", "101", "110", "111")
    sub = submodel(jewel, keep)
    assert list(sub.space) == ["100", "101", "110", "111"]
    assert validate(sub) == []
    assert sub.space.ids_of(sub.valuation["t"]) == ["101", "111"]


def test_report_merge():
    a, b = SoundnessReport(trials=1), SoundnessReport(trials=2)
    a.checked["P"] += 2
    b.checked["P"] += 3
    a.merge(b)
    assert a.trials == 3
    assert a.checked["P"] == 5


# Enumeration and the box oracle

def test_enumerator_levels(jewel, theta):
    enumerator = FormulaEnumerator(jewel, [theta])
    assert [str(f) for f, _ in enumerator.level(1)] == ["d", "j", "t", "false"]
    keys = [key for _, key in enumerator.formulas(3)]
    assert len(keys) == len(set(keys))
    assert all(is_el(f) for f, _ in enumerator.formulas(3))


def test_oracle_one_point():
    model = single_cell_model(["x"], valuation={"p": ["x"]})
    result = box_oracle(model, model.situation("theta", "x"), parse("box p"), bound=2)
    assert result.verdict is Verdict.TRUE
    assert result.closure
    assert result.witness is None


def test_oracle_unknown_below_closure(jewel):
    s = jewel.situation("theta", "111")
    result = box_oracle(jewel, s, parse("box (j | ~j)"), bound=1)
    assert result.verdict is Verdict.UNKNOWN
    assert result.explored == 3
    assert not result.closure


def test_oracle_requires_box(jewel):
    with pytest.raises(AssertionError):
        box_oracle(jewel, jewel.situation("theta", "111"), parse("p"), bound=2)


def test_oracle_agrees_with_evaluation():
    stats = oracle_agreement(GenConfig.from_preset("small", seed=3), n_models=5, bound=6)
    assert stats.instances > 0
    assert stats.contradictions == []
    assert sum(stats.verdicts.values()) == stats.instances


def test_family_problems_on_random_models(small_cfg):
    for trial in range(15):
        model = random_model(small_cfg, small_cfg.rng(trial))
        for theta in enumerate_phi(model.frame):
            assert family_problems(model, theta) == []


def test_family_problems_detects_bad_witness(monkeypatch):
    import pytopoapal.semantics as semantics

    model = single_cell_model(["x", "y"], subbase=[["x"]], valuation={"p": ["x"]})
    theta = model.generators["theta"]
    assert family_problems(model, theta) == []

    family = semantics.build_family(model, theta)
    monkeypatch.setattr(family, "witness", lambda m: parse("p"))
    monkeypatch.setattr(semantics.ModelChecker, "family", lambda self, t: family)
    assert any("defines another set" in p for p in family_problems(model, theta))


# Acceptance-size runs

@pytest.mark.slow
def test_soundness_acceptance():
    report = soundness_suite(GenConfig.from_preset("suite", seed=0), 200)
    assert report.ok, report.text()
    assert report.trials == 200


@pytest.mark.slow
def test_oracle_acceptance():
    cfg = GenConfig.from_preset("default", seed=1, max_points=6)
    stats = oracle_agreement(cfg, n_models=100, bound=9)
    assert stats.contradictions == []
    assert stats.definite_rate >= 0.9


@pytest.mark.slow
def test_structural_acceptance():
    cfg = GenConfig.from_preset("suite", seed=2)
    for trial in range(200):
        model = random_model(cfg, cfg.rng(trial))
        assert validate(model) == []
        for theta in enumerate_phi(model.frame):
            assert model.topology.is_open(theta.domain)
            assert family_problems(model, theta) == []
