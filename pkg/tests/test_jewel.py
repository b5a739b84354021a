"""
The jewel-in-the-tomb scenario on the bundled model
"""
import pytest

from pytopoapal import BoxMode, evaluate, extension, parse, update, valid_in_model
from pytopoapal.testkit import Verdict, box_oracle

from .helpers import mask


@pytest.mark.parametrize(
    "formula",
    [
        "K_e t",
        "K_e ~(K_i ~t | K_i t)",
        "K_e Khat_i ~(K_e t | K_e ~t)",
        "[j](K_e (j & d & t) & K_i (j & d) & ~K_i (t | K_i ~t))",
    ],
)
@pytest.mark.parametrize("mode", list(BoxMode))
def test_at_theta_prime(jewel, formula, mode):
    s = jewel.situation("thetaPrime", "111")
    assert evaluate(jewel, s, parse(formula), mode)


@pytest.mark.parametrize("mode", list(BoxMode))
def test_jewel_can_be_known_by_both(jewel, mode):
    s = jewel.situation("theta", "111")
    assert evaluate(jewel, s, parse("dia (K_e (j & d & t) & K_i (j & d & t))"), mode)


@pytest.mark.parametrize("mode", list(BoxMode))
def test_nothing_learned_about_undiscovered_tomb(jewel, mode):
    f = parse("~d -> box (~(K_e j | K_e ~j) & ~(K_e t | K_e ~t))")
    assert valid_in_model(jewel, f, mode)


def test_updates(jewel, theta_prime):
    u = mask(jewel, "110", "111")
    assert extension(jewel, theta_prime, parse("int(j)")) == u
    updated = update(jewel, theta_prime, parse("j"))
    k = jewel.space.index["111"]
    assert updated.assign(k, jewel.frame.agent("e")) == mask(jewel, "111")
    assert updated.assign(k, jewel.frame.agent("i")) == u


def test_indiana_learns_the_location(jewel):
    s = jewel.situation("theta", "111")
    assert not evaluate(jewel, s, parse("K_i t"))
    assert evaluate(jewel, s, parse("[t] K_i t"))
    assert not evaluate(jewel, s, parse("box ~K_i t"))


def test_oracle_refutes_with_announcement(jewel):
    s = jewel.situation("theta", "111")
    result = box_oracle(jewel, s, parse("box ~K_i t"), bound=3)
    assert result.verdict is Verdict.FALSE
    assert str(result.witness) == "t"
