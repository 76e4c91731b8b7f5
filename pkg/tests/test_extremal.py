import pytest

from synchrokit import (
    Dfa,
    HypothesisFailed,
    apply_word,
    assert_equivalence,
    build_extremal_dfa,
    check_condition_1,
    check_condition_2,
    check_condition_3,
    check_condition_4,
    extract_certificate,
    format_word,
    hypothesis_greedy,
    load_dfa,
    pincor_check,
    serialize_dfa,
    shortest_compressing_word,
)
from synchrokit.extremal import classify_greedy_letter

from oracles import (
    brute_condition_1,
    brute_condition_4,
    brute_hypothesis_greedy,
    random_dfas,
)


class TestHypothesisGreedy:
    def test_fixtures(self, c4, c5, e5, i3):
        assert hypothesis_greedy(c4)
        assert hypothesis_greedy(c5)
        assert hypothesis_greedy(e5)
        assert not hypothesis_greedy(i3)

    def test_matches_brute_force(self):
        for dfa in random_dfas(11, 60, 4, 2) + random_dfas(12, 25, 5, 2):
            assert hypothesis_greedy(dfa) == brute_hypothesis_greedy(dfa)


class TestConditionChecks:
    def test_e5_all_conditions_hold(self, e5):
        report = assert_equivalence(e5)
        assert report.conditions == (True, True, True, True)
        assert report.consistent
        assert report.renumbering3 == (1, 2, 3, 4, 5)

    def test_c4_is_extremal_too(self, c4):
        # The 4-state cycle-plus-merge automaton has a unique qualifying
        # word (the 9-step synchronizer), whose 4-prefix stays at size 3,
        # so all four conditions hold.
        report = assert_equivalence(c4)
        assert report.conditions == (True, True, True, True)
        assert report.consistent

    def test_c5_no_condition_holds(self, c5):
        report = assert_equivalence(c5)
        assert report.conditions == (False, False, False, False)
        assert report.consistent
        assert format_word(c5, report.witness1) == "baabaab"
        assert format_word(c5, report.witness4) == "baabaab"

    def test_witnesses_are_genuine(self, c5):
        cond1, witness = check_condition_1(c5)
        assert not cond1
        landed = apply_word(c5, c5.full_set(), witness)
        assert len(landed) == c5.n - 3 and len(witness) <= 9
        prefix = apply_word(c5, c5.full_set(), witness[:4])
        assert len(witness) < 4 or len(prefix) <= c5.n - 2

    def test_conditions_match_brute_force(self):
        checked = 0
        for dfa in random_dfas(21, 80, 4, 2) + random_dfas(22, 30, 5, 2):
            if not hypothesis_greedy(dfa):
                continue
            cond1, _ = check_condition_1(dfa)
            cond4, _ = check_condition_4(dfa)
            assert cond1 == brute_condition_1(dfa)
            assert cond4 == brute_condition_4(dfa)
            checked += 1
        assert checked >= 40

    def test_condition2_requires_certificate(self):
        # Fast compressor: hypothesis holds but the certificate does not.
        dfa = Dfa.from_tables([(2, 2, 3, 4), (1, 2, 2, 3)])
        assert hypothesis_greedy(dfa)
        res = check_condition_2(dfa)
        assert not res.holds and res.certificate is None

    def test_condition3_none_for_c5(self, c5):
        assert check_condition_3(c5) is None

    def test_condition3_soundness(self, e5):
        # Re-classifying under the returned renumbering must use only the
        # three permitted letter shapes.
        for dfa in (e5, build_extremal_dfa(6), build_extremal_dfa(4, False)):
            renum = check_condition_3(dfa)
            assert renum is not None
            numbering = tuple(renum.index(label) + 1 for label in (1, 2, 3, 4))
            classes = [
                classify_greedy_letter(dfa, s, numbering) for s in range(dfa.k)
            ]
            assert all(c in ("EQ_I", "EQ_A", "EQ_B") for c in classes)

    def test_equivalence_requires_hypothesis(self, i3):
        with pytest.raises(HypothesisFailed):
            assert_equivalence(i3)

    def test_random_equivalence_always_consistent(self):
        checked = 0
        for dfa in random_dfas(33, 120, 5, 2) + random_dfas(34, 40, 6, 3):
            if not hypothesis_greedy(dfa):
                continue
            assert assert_equivalence(dfa).consistent
            checked += 1
        assert checked >= 100


class TestLetterClasses:
    def test_e5_letter_classes(self, e5):
        numbering = (1, 2, 3, 4)
        classes = [classify_greedy_letter(e5, s, numbering) for s in range(e5.k)]
        assert classes == ["EQ_I", "EQ_A", "EQ_B"]

    def test_eq_d_letter(self):
        # 4-cycle + merge + the diagonal swap letter.
        dfa = load_dfa("4 3\n2 3 4 1\n2 2 3 4\n1 4 3 2\n")
        assert classify_greedy_letter(dfa, 2, (1, 2, 3, 4)) == "EQ_D"

    def test_other_letter(self, c5):
        assert classify_greedy_letter(c5, 0, (1, 2, 3, 4)) == "OTHER"


class TestBuildExtremal:
    def test_e5_matches_fixture(self, e5):
        assert build_extremal_dfa(5) == e5

    def test_without_identity_is_two_letters(self):
        dfa = build_extremal_dfa(5, include_identity=False)
        assert dfa.k == 2 and dfa.names == ("a", "b")
        assert assert_equivalence(dfa).conditions == (True, True, True, True)

    def test_n4_is_the_cycle_merge_automaton(self, c4):
        assert build_extremal_dfa(4, include_identity=False) == c4

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_family_is_extremal(self, n):
        report = assert_equivalence(build_extremal_dfa(n))
        assert report.conditions == (True, True, True, True)

    def test_tail_permutation(self):
        dfa = build_extremal_dfa(6, tail_permutation=(6, 5))
        assert dfa.delta(5, 1) == 6 and dfa.delta(6, 1) == 5
        assert assert_equivalence(dfa).conditions == (True, True, True, True)

    def test_validation(self):
        with pytest.raises(ValueError):
            build_extremal_dfa(3)
        with pytest.raises(ValueError):
            build_extremal_dfa(6, tail_permutation=(5, 5))

    def test_shortest_corank3_word_is_exactly_nine(self):
        for n in (5, 6):
            dfa = build_extremal_dfa(n)
            res = shortest_compressing_word(dfa, dfa.full_set(), n - 3)
            assert res.length == 9


class TestPincor:
    def test_e5_nonvacuous(self, e5):
        cert = extract_certificate(e5)
        # Q.badb needs 6 further steps, so the fallback word must land.
        start = apply_word(e5, e5.full_set(), (2, 1, 1, 2))
        assert shortest_compressing_word(e5, start, 2, max_len=5) is None
        assert pincor_check(e5, cert)

    def test_c4_nonvacuous(self, c4):
        cert = extract_certificate(c4)
        start = apply_word(c4, c4.full_set(), (1, 0, 0, 1))
        assert shortest_compressing_word(c4, start, 1, max_len=5) is None
        assert pincor_check(c4, cert)

    def test_c5_vacuous(self, c5):
        cert = extract_certificate(c5)
        word = (cert.b_letter, cert.a_letter, cert.d_letter, cert.b_letter)
        start = apply_word(c5, c5.full_set(), word)
        assert shortest_compressing_word(c5, start, 2, max_len=5) is not None
        assert pincor_check(c5, cert)
