
import pytest
from hypothesis import given, settings, strategies as st

from rtzsim.analysis import Indication, classify_indication
from rtzsim.analysis.indication import IndicationClass, proper_subsets
from rtzsim.builders import FullAdderKind, build_completion_detector, build_dual_rail_gate, build_full_adder
from rtzsim.errors import TooManyInputs

I = Indication


@pytest.mark.parametrize("kind, set_, reset, overall", [
    (FullAdderKind.SEITZ_WEAK, I.WEAK, I.WEAK, I.WEAK),
    (FullAdderKind.SEITZ_EARLY, I.WEAK, I.EARLY, I.EARLY),
    (FullAdderKind.AOPT_EO, I.WEAK, I.EARLY, I.EARLY),
    (FullAdderKind.LOPT_EO, I.WEAK, I.EARLY, I.EARLY),
])
def test_full_adders(kind, set_, reset, overall, default):
    c = classify_indication(build_full_adder(kind), default)
    assert (c.set_phase, c.reset_phase, c.overall) == (set_, reset, overall)


def test_bare_and_resets_early(default):
    assert classify_indication(build_dual_rail_gate("and"), default).reset_phase is I.EARLY


def test_or_sets_early(default):
    assert classify_indication(build_dual_rail_gate("or"), default).set_phase is I.EARLY


def test_completion_detector_is_strong(default):
    c = classify_indication(build_completion_detector(2), default)
    assert c.overall is I.STRONG


def test_overall_rule():
    assert IndicationClass(I.STRONG, I.STRONG).overall is I.STRONG
    assert IndicationClass(I.STRONG, I.WEAK).overall is I.WEAK
    assert IndicationClass(I.EARLY, I.STRONG).overall is I.EARLY


def test_subsets():
    assert len(proper_subsets(3)) == 7
    assert () in proper_subsets(3) and (0, 1, 2) not in proper_subsets(3)


def test_too_many_inputs(default):
    with pytest.raises(TooManyInputs):
        classify_indication(build_completion_detector(13), default)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(list(FullAdderKind)), st.randoms(use_true_random=False))
def test_order_insensitive(kind, rnd):
    from rtzsim.cells import default_delays
    d = default_delays()
    order = proper_subsets(3)
    rnd.shuffle(order)
    net = build_full_adder(kind)
    assert classify_indication(net, d, order) == classify_indication(net, d)
