"""Shared fixtures: the two worked example programs.

Both programs induce the same joint distribution over (treatment, recovery)
but answer counterfactual queries differently, which several tests lean on.
"""

import pytest

from causalog import parse_program

BOOST_TEXT = """\
0.5 :: treatment.
0.5 :: recovery.
0.4 :: recovery :- treatment.
"""

SWITCH_TEXT = """\
0.5 :: treatment.
0.7 :: recovery :- treatment.
0.5 :: recovery :- \\+ treatment.
"""

# Joint distribution shared by both programs, keyed (treatment, recovery).
SHARED_JOINT = {
    (True, True): 0.35,
    (True, False): 0.15,
    (False, True): 0.25,
    (False, False): 0.25,
}


@pytest.fixture
def boost_program():
    """Treatment-boosts-recovery: an unconditional chance plus a lift."""
    return parse_program(BOOST_TEXT)


@pytest.fixture
def switch_program():
    """Same joint, different mechanism: recovery switches on treatment."""
    return parse_program(SWITCH_TEXT)
