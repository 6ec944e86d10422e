import pytest

from compworkbench.algorithms import (ALL_RULES, Basic, Guard, Loop, alpha_rename, algorithm_to_function,
                                      dependence_graph, emit, normalize, same_algorithm, structure)
from compworkbench.core import UNARY, behaviorally_equivalent
from compworkbench.errors import UnsupportedError
from compworkbench.regmachine import Dec, Inc, parse_rm, reg_semantics, serialize_rm

COPY = """
inputs X1
outputs Y1
loop: if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
if W9 = 0 goto loop
done:
"""

COPY_RENAMED = """
inputs A
outputs B
top: if A = 0 goto out
A = A - 1
B = B + 1
if Z = 0 goto top
out:
"""

COPY_PEELED = """
inputs X1
outputs Y1
if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
loop: if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
if W9 = 0 goto loop
done:
"""

DOUBLE_FUSED = """
inputs X1
outputs Y1 Y2
loop: if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
Y2 = Y2 + 1
if W9 = 0 goto loop
done:
"""

DOUBLE_SPLIT = """
inputs X1
outputs Y1 Y2
first: if X1 = 0 goto second
X1 = X1 - 1
Y1 = Y1 + 1
W1 = W1 + 1
if W9 = 0 goto first
second: if W1 = 0 goto done
W1 = W1 - 1
Y2 = Y2 + 1
if W9 = 0 goto second
done:
"""

CONST_A = """
inputs X1
outputs Y1 Y2
Y1 = Y1 + 1
Y2 = Y2 + 1
"""

CONST_B = """
inputs X1
outputs Y1 Y2
Y2 = Y2 + 1
Y1 = Y1 + 1
"""

TANGLED = """
inputs X1
outputs Y1
if X1 = 0 goto mid
X1 = X1 - 1
top: Y1 = Y1 + 1
mid: if X1 = 0 goto end
X1 = X1 - 1
if W9 = 0 goto top
end:
"""

PAIRS = {
    "alpha": (COPY, COPY_RENAMED),
    "roll": (COPY, COPY_PEELED),
    "fission": (DOUBLE_FUSED, DOUBLE_SPLIT),
    "reorder": (CONST_A, CONST_B),
}


def _program(text: str, name: str):
    return parse_rm(text, name=name)


class TestStructure:
    @staticmethod
    def test_loop_is_recovered():
        statements = structure(_program(COPY, "copy"))
        assert statements == (Loop("X1", (Basic(Dec("X1")), Basic(Inc("Y1")))),)

    @staticmethod
    def test_peeled_iteration_is_a_guard():
        statements = structure(_program(COPY_PEELED, "peeled"))
        assert len(statements) == 1
        assert isinstance(statements[0], Guard)
        assert isinstance(statements[0].body[-1], Loop)

    @staticmethod
    def test_tangled_jumps_do_not_structure():
        assert structure(_program(TANGLED, "tangled")) is None

    @staticmethod
    def test_emit_relabels_and_keeps_the_function():
        p = _program(COPY, "copy")
        q = emit(structure(p), p.inputs, p.outputs, "copy")
        assert [label for label, _ in q.labels] == ["L1", "L2"]
        report = behaviorally_equivalent(reg_semantics(p), reg_semantics(q), UNARY, 6)
        assert report.verdict == "equal"

    @staticmethod
    def test_dependence_graph():
        statements = (Basic(Inc("Y1")), Basic(Inc("Y2")), Basic(Dec("Y1")))
        graph = dependence_graph(statements)
        assert set(graph.edges) == {(0, 2)}


class TestRewrites:
    @staticmethod
    @pytest.mark.parametrize("rule", sorted(PAIRS))
    def test_rewrite_pairs_share_a_normal_form(rule):
        first, second = PAIRS[rule]
        p1, p2 = _program(first, f"{rule}-a"), _program(second, f"{rule}-b")
        assert same_algorithm(p1, p2)
        report = behaviorally_equivalent(reg_semantics(p1), reg_semantics(p2), UNARY, 6)
        assert report.verdict == "equal"

    @staticmethod
    @pytest.mark.parametrize("rule", sorted(PAIRS))
    def test_each_pair_needs_its_rule(rule):
        first, second = PAIRS[rule]
        without = ALL_RULES - {rule}
        assert not same_algorithm(_program(first, "a"), _program(second, "b"), without)

    @staticmethod
    def test_alpha_rename():
        renamed = alpha_rename(_program(COPY_RENAMED, "copy"))
        assert renamed.inputs == ("X1",)
        assert renamed.outputs == ("Y1",)
        assert "W0" in renamed.registers

    @staticmethod
    def test_unknown_rule():
        with pytest.raises(UnsupportedError):
            normalize(_program(COPY, "copy"), frozenset({"inline"}))


class TestNormalForms:
    @staticmethod
    def test_same_function_different_algorithm(register_corpus):
        assert not same_algorithm(register_corpus["copy-direct"], register_corpus["copy-via-scratch"])

    @staticmethod
    def test_normal_form_is_stable(register_corpus):
        nf = normalize(register_corpus["mul"])
        again = normalize(nf.program)
        assert again.digest == nf.digest
        assert nf.text == serialize_rm(nf.program)
        assert len(nf.digest) == 64

    @staticmethod
    def test_unstructured_programs_are_only_renamed():
        nf = normalize(_program(TANGLED, "tangled"))
        assert not nf.structured
        assert nf.to_dict()['structured'] is False

    @staticmethod
    def test_normal_form_computes_the_same_function(register_corpus):
        for name in ("add", "mul", "monus", "copy-via-scratch"):
            p = register_corpus[name]
            report = behaviorally_equivalent(reg_semantics(p), algorithm_to_function(normalize(p)), UNARY, 4)
            assert report.verdict == "equal", name
