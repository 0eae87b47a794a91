"""Rule table for the semantic checks, with exact codes and spans pinned.

Spans are derived from the snippet texts themselves: a diagnostic points at
the whole offending declaration, from its first keyword to its last token.
"""

import random
import sys
import textwrap
from pathlib import Path

import pytest

from amdsl import semantics
from amdsl.ir import validate_model
from amdsl.parser import parse_system

sys.path.insert(0, str(Path(__file__).parent))
from modelgen import random_model


def span_of(text: str, first_line: int, last_line: int | None = None):
    """The (line, col) rectangle covering the trimmed content of the lines."""
    lines = text.splitlines()
    last_line = last_line or first_line
    first = lines[first_line - 1]
    last = lines[last_line - 1]
    start_col = len(first) - len(first.lstrip()) + 1
    end_col = len(last.rstrip())
    return (first_line, start_col, last_line, end_col)


def run(text: str):
    model, parse_diags = parse_system(text)
    assert model is not None, [d.render() for d in parse_diags]
    resolved, diags = semantics.analyze(model)
    return resolved, diags


def check_case(text: str, code: str, first_line: int, last_line: int | None = None):
    resolved, diags = run(text)
    assert resolved is None
    assert len(diags) == 1, [d.render() for d in diags]
    d = diags[0]
    assert d.code == code
    expected = span_of(text, first_line, last_line)
    got = (d.span.start_line, d.span.start_col, d.span.end_line, d.span.end_col)
    assert got == expected


# --- resolution ------------------------------------------------------------

def test_e201_duplicate_space():
    text = textwrap.dedent("""\
        system t {
          space q : Scalar(1)
          space q : Phase(1)
        }
        """)
    check_case(text, "E201", 3)


def test_e202_unknown_space():
    text = textwrap.dedent("""\
        system t {
          space q : Scalar(1)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution g
            out q
          }
        }
        """)
    check_case(text, "E202", 3, 8)


def test_e203_cross_category_collision():
    text = textwrap.dedent("""\
        system t {
          space a : JointAngles(3)
          space b : CartesianPosition(3)
          mapping x : ForwardKinematics from a to b
          transformation x : CoordinateTransformation from a to a
        }
        """)
    check_case(text, "E203", 5)


# --- space typing ----------------------------------------------------------

def test_e301_positive_forward_kinematics():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space x : CartesianPose(6)
          mapping fk : ForwardKinematics from q to x
        }
        """)
    resolved, diags = run(text)
    assert resolved is not None and diags == []


def test_e301_same_kind_mapping():
    text = textwrap.dedent("""\
        system t {
          space a : JointAngles(7)
          space b : JointAngles(7)
          mapping m : ForwardKinematics from a to b
        }
        """)
    check_case(text, "E301", 4)


def test_e302_positive_frame_change():
    text = textwrap.dedent("""\
        system t {
          space x : CartesianPose(6) @world
          space y : CartesianPose(6) @base
          transformation t1 : CoordinateTransformation from x to y
        }
        """)
    resolved, diags = run(text)
    assert resolved is not None and diags == []


def test_e302_cross_kind_transformation():
    text = textwrap.dedent("""\
        system t {
          space x : CartesianPose(6)
          space q : JointAngles(7)
          transformation t1 : CoordinateTransformation from x to q
        }
        """)
    check_case(text, "E302", 4)


def test_e302_dimension_mismatch():
    text = textwrap.dedent("""\
        system t {
          space a : JointAngles(7)
          space b : JointAngles(6)
          transformation t1 : CoordinateTransformation from a to b
        }
        """)
    check_case(text, "E302", 4)


def test_e303_positive_output_via():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          space x : CartesianPose(6)
          mapping fk : ForwardKinematics from u to x
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            out u
          }
          adaptive component C : PatternGenerator {
            module M
            out via fk
          }
        }
        """)
    resolved, diags = run(text)
    assert resolved is not None and diags == []


def test_e303_output_via_type_mismatch():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointTorques(7)
          space x : CartesianPose(6)
          mapping fk : ForwardKinematics from q to x
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            out u
          }
          adaptive component C : PatternGenerator {
            module M
            out via fk
          }
        }
        """)
    check_case(text, "E303", 12, 15)


def test_e304_positive_input_via():
    text = textwrap.dedent("""\
        system t {
          space gc : CartesianPosition(3)
          space g : JointAngles(7)
          space u : JointAngles(7)
          mapping ik : InverseKinematics from gc to g
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution g
            out u
          }
          adaptive component C : PatternGenerator {
            module M
            in via ik
          }
        }
        """)
    resolved, diags = run(text)
    assert resolved is not None and diags == []


def test_e304_input_via_misses_module_inputs():
    text = textwrap.dedent("""\
        system t {
          space gc : CartesianPosition(3)
          space g : JointAngles(7)
          space q : JointAngles(7)
          space u : JointAngles(7)
          mapping ik : InverseKinematics from gc to g
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            out u
          }
          adaptive component C : PatternGenerator {
            module M
            in via ik
          }
        }
        """)
    check_case(text, "E304", 13, 16)


# --- wiring ----------------------------------------------------------------

MODULE_OK = """\
  space q : JointAngles(7)
  space u : JointAngles(7)
"""


def test_e401_tracking_controller_needs_closed_loop():
    text = textwrap.dedent("""\
        system t {
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode open_loop
            out u
          }
          adaptive component C : TrackingController {
            module M
          }
        }
        """)
    check_case(text, "E401", 8, 10)


def test_e401_positive_closed_loop_tracking():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            out u
          }
          adaptive component C : TrackingController {
            module M
          }
        }
        """)
    resolved, diags = run(text)
    assert resolved is not None and diags == []


def test_e402_sequencer_without_children():
    text = textwrap.dedent("""\
        system t {
          adaptive component S : Sequencer {
          }
        }
        """)
    check_case(text, "E402", 2, 3)


def test_e403_shared_module():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            out u
          }
          adaptive component A : Generic {
            module M
          }
          adaptive component B : Generic {
            module M
          }
        }
        """)
    check_case(text, "E403", 13, 15)


def test_e404_module_without_output():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
          }
        }
        """)
    check_case(text, "E404", 3, 7)


def test_e405_closed_loop_without_execution_inputs():
    text = textwrap.dedent("""\
        system t {
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            out u
          }
        }
        """)
    check_case(text, "E405", 3, 7)


def test_e406_online_learner_without_learning_inputs():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            learner ExtremeLearningMachine
            mode closed_loop, online
            in execution q
            out u
          }
        }
        """)
    check_case(text, "E406", 4, 10)


def test_e406_positive_offline_learner_without_learning_inputs():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            learner ExtremeLearningMachine
            mode closed_loop, offline
            in execution q
            out u
          }
        }
        """)
    resolved, diags = run(text)
    assert resolved is not None and diags == []


def test_e407_children_on_non_sequencer():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            out u
          }
          adaptive component A : Generic {
            module M
          }
          adaptive component B : PatternGenerator {
            module M
            children A
          }
        }
        """)
    resolved, diags = run(text)
    assert resolved is None
    codes = sorted(d.code for d in diags)
    assert "E407" in codes
    # The same module is wired twice, so E403 also fires; both are pinned.
    assert codes == ["E403", "E407"]


def test_e408_missing_module():
    text = textwrap.dedent("""\
        system t {
          adaptive component C : Generic {
          }
        }
        """)
    check_case(text, "E408", 2, 3)


def test_e409_missing_dynamical_system():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            mode closed_loop
            in execution q
            out u
          }
        }
        """)
    check_case(text, "E409", 4, 8)


def test_e410_space_in_two_input_roles():
    text = textwrap.dedent("""\
        system t {
          space q : JointAngles(7)
          space u : JointAngles(7)
          adaptive module M {
            dynamical_system VelocityField
            mode closed_loop
            in execution q
            param goal q
            out u
          }
        }
        """)
    check_case(text, "E410", 4, 10)


# --- properties ------------------------------------------------------------

def test_checks_are_pure_and_ordered():
    text = textwrap.dedent("""\
        system t {
          space a : JointAngles(7)
          space b : JointAngles(7)
          mapping m1 : ForwardKinematics from a to b
          mapping m2 : Jacobian from b to a
        }
        """)
    model, _ = parse_system(text)
    resolved, _ = semantics.resolve(model)
    first = semantics.check_types(resolved)
    second = semantics.check_types(resolved)
    assert first == second
    positions = [(d.span.start_line, d.span.start_col) for d in first]
    assert positions == sorted(positions)
    assert [d.code for d in first] == ["E301", "E301"]


def test_diagnostic_text_format():
    text = "system t {\n  space q : Scalar(1)\n  space q : Scalar(1)\n}\n"
    model, _ = parse_system(text, file="dup.am")
    _, diags = semantics.analyze(model)
    assert diags[0].render() == (
        "dup.am:3:3: error[E201]: duplicate space name 'q'"
    )


@pytest.mark.parametrize("seed", range(8))
def test_passing_models_satisfy_core_invariants(seed):
    model = random_model(random.Random(seed * 31 + 1), seed)
    resolved, diags = semantics.analyze(model)
    assert resolved is not None, [d.render() for d in diags]
    assert validate_model(model) == []
