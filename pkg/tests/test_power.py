import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synchrokit import (
    StateSet,
    apply_word,
    format_word,
    greedy_word,
    parse_word,
    rank,
    shortest_compressing_word,
    size_profile,
)

from oracles import brute_min_length_to_size, no_shorter_word, random_dfas


class TestShortestCompressingWord:
    def test_c4_sync_word_frozen(self, c4):
        res = shortest_compressing_word(c4, c4.full_set(), 1)
        assert res.length == 9
        assert format_word(c4, res.word) == "baaabaaab"
        assert res.final_set.states() == (2,)
        assert res.profile == (4, 3, 3, 3, 3, 2, 2, 2, 2, 1)

    def test_trivial_target_is_empty_word(self, c4):
        res = shortest_compressing_word(c4, c4.full_set(), 4)
        assert res.word == () and res.profile == (4,)

    def test_identity_never_compresses(self, i3):
        assert shortest_compressing_word(i3, i3.full_set(), 2) is None

    def test_c4_corank2_frozen(self, c4):
        res = shortest_compressing_word(c4, c4.full_set(), 2)
        assert format_word(c4, res.word) == "baab"
        assert res.final_set.states() == (2, 4)

    def test_e5_corank2_frozen(self, e5):
        res = shortest_compressing_word(e5, e5.full_set(), 3)
        assert res.length == 4
        assert format_word(e5, res.word) == "baab"
        assert res.final_set.states() == (2, 4, 5)

    def test_max_len_cutoff(self, c4):
        assert shortest_compressing_word(c4, c4.full_set(), 1, max_len=8) is None
        assert shortest_compressing_word(c4, c4.full_set(), 1, max_len=9) is not None

    def test_allowed_letters(self, c4):
        # Only the cycle letter: nothing compresses.
        assert shortest_compressing_word(c4, c4.full_set(), 3, allowed_letters=[0]) is None
        res = shortest_compressing_word(c4, c4.full_set(), 3, allowed_letters=[1])
        assert res.word == (1,)

    def test_argument_validation(self, c4):
        with pytest.raises(ValueError):
            shortest_compressing_word(c4, c4.full_set(), 0)
        with pytest.raises(ValueError):
            shortest_compressing_word(c4, StateSet.from_states([1]), 2)
        with pytest.raises(ValueError):
            shortest_compressing_word(c4, c4.full_set(), 1, allowed_letters=[])
        with pytest.raises(ValueError):
            shortest_compressing_word(c4, c4.full_set(), 1, allowed_letters=[9])

    def test_start_subset(self, c4):
        res = shortest_compressing_word(c4, StateSet.from_states([2, 4]), 1)
        assert res.length == 6
        assert format_word(c4, res.word) == "abaaab"

    def test_bfs_minimality_against_brute_force_fixtures(self, c4, c5, e5):
        for dfa, target in ((c4, 1), (c4, 2), (e5, 2), (e5, 3), (c5, 2)):
            res = shortest_compressing_word(dfa, dfa.full_set(), target)
            assert no_shorter_word(dfa, dfa.full_set(), target, res.length)

    def test_bfs_minimality_against_brute_force_random(self):
        rng = random.Random(99)
        for dfa in random_dfas(5150, 40, 4, 2) + random_dfas(5151, 20, 5, 3):
            target = rng.randrange(1, dfa.n)
            res = shortest_compressing_word(dfa, dfa.full_set(), target, max_len=9)
            brute = brute_min_length_to_size(dfa, dfa.full_set(), target, 9)
            assert (res.length if res else None) == brute

    def test_lexicographic_tie_break(self):
        # Both letters merge immediately; the lower index must win the tie.
        from synchrokit import Dfa

        dfa = Dfa.from_tables([(1, 1, 3), (2, 2, 2)])
        res = shortest_compressing_word(dfa, dfa.full_set(), 2)
        assert res.word == (0,)

    def test_restriction_monotonicity(self):
        for dfa in random_dfas(777, 30, 4, 3):
            full = shortest_compressing_word(dfa, dfa.full_set(), 2)
            restricted = shortest_compressing_word(
                dfa, dfa.full_set(), 2, allowed_letters=[0, 1]
            )
            if restricted is not None:
                assert full is not None and full.length <= restricted.length


class TestRank:
    def test_fixture_ranks(self, c4, i3, e5, c3, c5):
        assert rank(c4) == 1
        assert rank(i3) == 3
        assert rank(e5) == 2
        assert rank(c3) == 1
        assert rank(c5) == 1

    def test_rank_lower_bounds_random_words(self, e5):
        rng = random.Random(4)
        r = rank(e5)
        for _ in range(50):
            w = tuple(rng.randrange(e5.k) for _ in range(rng.randrange(12)))
            assert len(apply_word(e5, e5.full_set(), w)) >= r


class TestSizeProfile:
    def test_e5_extremal_profile(self, e5):
        w = parse_word(e5, "baaabaaab")
        assert size_profile(e5, w) == (5, 4, 4, 4, 4, 3, 3, 3, 3, 2)

    def test_c4_baab(self, c4):
        assert size_profile(c4, parse_word(c4, "baab")) == (4, 3, 3, 3, 2)

    def test_empty_word(self, c4):
        assert size_profile(c4, ()) == (4,)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_profile_non_increasing_and_consistent(self, seed):
        (dfa,) = random_dfas(seed, 1, 5, 2)
        rng = random.Random(seed)
        w = tuple(rng.randrange(dfa.k) for _ in range(rng.randrange(10)))
        prof = size_profile(dfa, w)
        assert all(a >= b for a, b in zip(prof, prof[1:]))
        assert prof[-1] == len(apply_word(dfa, dfa.full_set(), w))


class TestGreedy:
    def test_c4_stages_frozen(self, c4):
        profile = greedy_word(c4, 3)
        assert profile.stage_lengths == (1, 3, 6)
        assert format_word(c4, profile.total) == "baababaaab"
        assert len(profile.total) == 10

    def test_e5_stages_frozen(self, e5):
        profile = greedy_word(e5, 3)
        assert profile.stage_lengths == (1, 3, 6)
        assert len(profile.total) == 10

    def test_c5_stages_frozen(self, c5):
        profile = greedy_word(c5, 3)
        assert profile.stage_lengths == (1, 3, 3)
        assert len(profile.total) == 7

    def test_identity_stalls(self, i3):
        assert greedy_word(i3, 1) is None

    def test_concatenation_reproduces_total(self, e5):
        profile = greedy_word(e5, 3)
        assert sum(profile.stage_words, ()) == profile.total

    def test_stages_strictly_decrease(self, c5):
        profile = greedy_word(c5, 4)
        sizes = [5]
        current = c5.full_set()
        for word in profile.stage_words:
            current = apply_word(c5, current, word)
            assert len(current) < sizes[-1]
            sizes.append(len(current))
        assert c5.n - sizes[-1] >= 4

    def test_validation(self, c4):
        with pytest.raises(ValueError):
            greedy_word(c4, 0)
        assert greedy_word(c4, 4) is None  # cannot go below one state
