import re
import sys
from pathlib import Path

import pytest

from amdsl import cca, codegen
from amdsl.ir import CcaComponent, ComponentIR

sys.path.insert(0, str(Path(__file__).parent))
from conftest import load_corpus_model

BANNER_RE = re.compile(r"^// GENERATED by amdsl v\d+\.\d+\.\d+ — DO NOT EDIT$", re.M)


def paddling_ir() -> ComponentIR:
    return cca.lower_to_cca(load_corpus_model("paddling"))


class TestHull:
    def test_banner_pinned(self):
        text = codegen.emit_component_hull(paddling_ir(), "PaddleGen")
        assert BANNER_RE.match(text.splitlines()[0])

    def test_online_learning_hook_gating(self):
        # paddling: Execution + OnlineLearning.
        text = codegen.emit_component_hull(paddling_ir(), "PaddleGen")
        assert "void onExecute() override = 0;" in text
        assert "void onOnlineLearning() override = 0;" in text
        assert "onOfflineLearning" not in text

    def test_offline_learning_hook_gating(self):
        ir = cca.lower_to_cca(load_corpus_model("reaching"))
        text = codegen.emit_component_hull(ir, "ReachCtrl")
        assert "void onOfflineLearning() override = 0;" in text
        assert "onOnlineLearning" not in text

    def test_execution_only_component(self):
        ir = cca.lower_to_cca(load_corpus_model("balance_mix"))
        text = codegen.emit_component_hull(ir, "PostureCtrl")
        assert "onOnlineLearning" not in text
        assert "onOfflineLearning" not in text
        assert "void onInit() override = 0;" in text

    def test_zero_port_component_has_lifecycle_only(self):
        ir = ComponentIR("s", (CcaComponent("lone", "Generic"),))
        text = codegen.emit_component_hull(ir, "lone")
        assert "cca::Port<" not in text
        assert "void onInit() override = 0;" in text
        assert "void onExecute() override = 0;" in text

    def test_port_order_matches_cca_order(self):
        # (direction, name) sorted: all In ports alphabetically, then Out.
        text = codegen.emit_component_hull(paddling_ir(), "PaddleGen")
        members = re.findall(r"cca::Port<[^>]+>::(In|Out) (\w+);", text)
        assert members == [
            ("In", "goal"),
            ("In", "q_left"),
            ("In", "q_train"),
            ("In", "speed"),
            ("Out", "u"),
        ]

    def test_port_type_spelling(self):
        text = codegen.emit_component_hull(paddling_ir(), "PaddleGen")
        assert "cca::Port<cca::JointAngles, 7>::In q_left;" in text
        assert "cca::Port<cca::Scalar, 1>::In speed;" in text

    def test_criterion_hook(self):
        ir = cca.lower_to_cca(load_corpus_model("reaching"))
        text = codegen.emit_component_hull(ir, "ReachCtrl")
        assert "bool checkCriterion() override = 0;" in text
        no_criterion = codegen.emit_component_hull(paddling_ir(), "PaddleGen")
        assert "checkCriterion" not in no_criterion

    def test_unknown_component(self):
        with pytest.raises(codegen.UnknownComponent):
            codegen.emit_component_hull(paddling_ir(), "nope")


class TestBootstrap:
    def test_connect_lines(self):
        text = codegen.emit_system_bootstrap(paddling_ir())
        assert "cca::connect(c_PaddleGen.u, c_fk.src);" in text
        assert "cca::connect(c_ik.dst, c_PaddleGen.goal);" in text

    def test_unset_deployment_todo(self):
        text = codegen.emit_system_bootstrap(paddling_ir())
        assert "// TODO deploy host ? (PaddleGen)" in text

    def test_set_deployment_applied(self):
        fresh = paddling_ir()
        edited_text = cca.print_cca(fresh).replace("deploy host=?", "deploy host=left-pc", 1)
        ir, _ = cca.parse_cca(edited_text)
        text = codegen.emit_system_bootstrap(ir)
        assert 'c_PaddleGen.deploy("host", "left-pc");' in text
        assert "// TODO deploy host ? (PaddleGen)" not in text

    def test_state_schedule_gated_by_ir(self):
        text = codegen.emit_system_bootstrap(paddling_ir())
        assert "sched.step(cca::State::OnlineLearning);" in text
        assert "OfflineLearning" not in text
        assert "sched.step(cca::State::Execution);" in text

    def test_empty_ir_scaffold(self):
        text = codegen.emit_system_bootstrap(ComponentIR("bare"))
        assert "int main(" in text
        assert "sched.init();" in text
        assert "return 0;" in text


class TestEmitAll:
    def test_fresh_directory_has_all_files(self):
        files = codegen.emit_all(paddling_ir())
        assert set(files) == {
            "PaddleGen_hull.h", "PaddleGen_impl.h", "PaddleGen_impl.cpp",
            "fk_hull.h", "fk_impl.h", "fk_impl.cpp",
            "ik_hull.h", "ik_impl.h", "ik_impl.cpp",
            "system_paddling.cpp", "manifest.txt",
        }

    def test_existing_impls_not_regenerated(self):
        existing = {"PaddleGen_impl.h", "PaddleGen_impl.cpp", "fk_impl.cpp"}
        files = codegen.emit_all(paddling_ir(), existing)
        assert "PaddleGen_impl.h" not in files
        assert "PaddleGen_impl.cpp" not in files
        assert "fk_impl.cpp" not in files
        assert "fk_impl.h" in files
        assert "PaddleGen_hull.h" in files  # hulls always regenerate

    def test_manifest_lists_component_set(self):
        files = codegen.emit_all(paddling_ir(), {"PaddleGen_impl.h"})
        manifest = files["manifest.txt"].splitlines()
        assert "PaddleGen_impl.h" in manifest  # listed even when not rewritten
        assert manifest == sorted(manifest)

    def test_deterministic(self):
        a = codegen.emit_all(paddling_ir())
        b = codegen.emit_all(paddling_ir())
        assert a == b

    def test_impl_stub_contents(self):
        files = codegen.emit_all(paddling_ir())
        impl_h = files["PaddleGen_impl.h"]
        assert "class PaddleGenImpl : public PaddleGenHull" in impl_h
        assert "GENERATED ONCE" in impl_h
        impl_cpp = files["PaddleGen_impl.cpp"]
        assert "void PaddleGenImpl::onExecute() {}" in impl_cpp
