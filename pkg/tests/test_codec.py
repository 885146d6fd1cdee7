"""
The tree codec: phi_R, psi_R, the finite coding check and the round trips.
"""

import pytest

from codec import (
    CensoredWindowError,
    CodecError,
    CodeSequence,
    compare_with_window,
    decode_sequence_text,
    encode_tree_text,
    finite_code_check,
    phi_R,
    psi_R,
    resolved_code,
    roundtrip_check,
)
from experiments import finite_code_passed, fuzz_code
from increments import IncrementLaw, OffspringLaw, iid_window
from samplers import sample_gw
from trees import parse, serialize

COUNTEREXAMPLE = [-1, -1, 1, -1, -1, 2]
COMPONENT = "0[-1(),-2(),-3(-4(),-5())]"


class TestCodeSequence:
    def test_from_text_ends_at_zero(self):
        y = CodeSequence.from_text("-1 -1 1")
        assert (y.lo, y.hi) == (-3, 0)
        assert y.at(-1) == 1
        assert y.to_text() == "-1 -1 1"

    def test_explicit_lo(self):
        assert CodeSequence.from_text("0 2", lo=-1).hi == 1

    @pytest.mark.parametrize("text", ["1 x", "0.5"])
    def test_bad_text(self, text):
        with pytest.raises(CodecError):
            CodeSequence.from_text(text)

    def test_values_at_least_minus_one(self):
        with pytest.raises(CodecError):
            CodeSequence(lo=0, values=(-2,))

    def test_index_outside(self):
        with pytest.raises(CodecError):
            CodeSequence(lo=-1, values=(0,)).at(0)


class TestPhi:
    def test_two_leaves(self):
        assert encode_tree_text("[(),()]") == CodeSequence(lo=-3, values=(-1, -1, 1))

    def test_component_codes_its_own_increments(self):
        code = encode_tree_text(COMPONENT)
        assert code.lo == -6
        assert list(code.values) == COUNTEREXAMPLE

    def test_resolved_code_stops_at_the_boundary(self):
        t = parse("0[~-1(),~-2(),~-3()]")
        # b(0) = -1 has unknown children
        assert resolved_code(t, t.root, 5, 5) == CodeSequence(lo=-1, values=(2,))

    def test_censored_window_reports_first_index(self):
        t = psi_R(CodeSequence(lo=-3, values=(0, 0, 0)))
        assert phi_R(t, t.root, 2, 0) == CodeSequence(lo=-3, values=(0, 0, 0))
        with pytest.raises(CensoredWindowError) as e:
            phi_R(t, t.root, 3, 0)
        assert e.value.first_index == -4

    def test_negative_window(self):
        with pytest.raises(CodecError):
            phi_R(parse("[]"), 0, -1, 0)


class TestPsi:
    def test_two_leaves(self):
        t = psi_R(CodeSequence(lo=-3, values=(-1, -1, 1)))
        assert serialize(t) == "^0[-1(),-2()]"

    def test_all_zero_code_is_a_path(self):
        t = psi_R(CodeSequence(lo=-3, values=(0, 0, 0)))
        assert serialize(t) == "^0[-1(-2(?-3()))]"

    def test_decode_text(self):
        assert serialize(decode_sequence_text("-1 -1 1")) == "^0[-1(),-2()]"
        assert serialize(decode_sequence_text(" ".join(map(str, COUNTEREXAMPLE)))) == (
            "^" + COMPONENT
        )

    def test_window_must_hold_zero(self):
        with pytest.raises(CodecError):
            psi_R(CodeSequence(lo=1, values=(0,)))

    def test_radius(self):
        t = psi_R(CodeSequence(lo=-6, values=tuple(COUNTEREXAMPLE)), radius=1)
        assert serialize(t) == "^0[~-1(),~-2(),~-3()]"


class TestFiniteCode:
    def test_two_leaves(self):
        report = finite_code_check(parse("[(),()]"))
        assert report.passed
        assert report.total == -1
        assert report.code == [-1, -1, 1]
        assert report.violating_prefix is None

    def test_gw_trees(self):
        pi = OffspringLaw.from_atoms([[0, 0.5], [1, 0.25], [2, 0.25]])
        verdicts = [finite_code_passed(sample_gw(pi, [5, i]).tree) for i in range(100)]
        assert False not in verdicts
        assert verdicts.count(True) > 90

    def test_needs_a_resolved_tree(self):
        with pytest.raises(CodecError):
            finite_code_check(parse("0[?-1()]"))
        assert finite_code_passed(parse("0[?-1()]")) is None


class TestRoundTrips:
    def test_psi_then_phi(self):
        y = CodeSequence(lo=-6, values=tuple(COUNTEREXAMPLE))
        report = compare_with_window(psi_R(y), y, -y.lo - 1, y.hi)
        assert report.mismatches == 0
        assert report.compared == 6

    @pytest.mark.parametrize("seed", range(4))
    def test_fuzzed_codes(self, seed):
        for i in range(40):
            y = fuzz_code(seed, i, 10)
            report = compare_with_window(psi_R(y), y, -y.lo - 1, y.hi)
            assert report.passed, (y, report.mismatched_indices)

    def test_missing_root_is_censored(self):
        report = compare_with_window(parse("[()]"), CodeSequence(-1, (0,)), 0, 0)
        assert report.censored == 1
        assert report.compared == 0

    def test_walk_round_trip(self, zero_law):
        compared = 0
        for seed in range(6):
            report = roundtrip_check(iid_window(zero_law, seed), 4)
            assert report.mismatches == 0
            compared += report.compared
        assert compared > 0

    def test_walk_round_trip_needs_skip_free(self):
        law = IncrementLaw.from_atoms([[-2, 0.5], [2, 0.5]])
        with pytest.raises(CodecError):
            roundtrip_check(iid_window(law, 0), 2)
