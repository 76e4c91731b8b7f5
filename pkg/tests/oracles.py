"""Brute-force reference computations the library is tested against.

Everything here is deliberately naive: plain word enumeration and set
application, with no shared machinery with the package internals beyond
apply_word itself.
"""

import itertools
import random

from synchrokit import Dfa, apply_word


def all_words(k, length):
    return itertools.product(range(k), repeat=length)


def brute_min_length_to_size(dfa, start, target_size, max_len):
    """Minimal word length reaching size <= target_size, by raw enumeration."""
    if len(start) <= target_size:
        return 0
    for length in range(1, max_len + 1):
        for w in all_words(dfa.k, length):
            if len(apply_word(dfa, start, w)) <= target_size:
                return length
    return None


def no_shorter_word(dfa, start, target_size, length):
    """True when no word strictly shorter than ``length`` reaches the target."""
    for shorter in range(0, length):
        for w in all_words(dfa.k, shorter):
            if len(apply_word(dfa, start, w)) <= target_size:
                return False
    return True


def qualifying_words(dfa, limit=9):
    """All words of length <= limit whose full-set image has size exactly n-3.

    Prunes branches whose image already dropped below n-3 (sizes never
    grow back).
    """
    n = dfa.n
    target = n - 3
    out = []
    if target < 1:
        return out
    full = dfa.full_set()

    def walk(word, current):
        size = len(current)
        if size < target:
            return
        if size == target:
            out.append(tuple(word))
        if len(word) == limit:
            return
        for j in range(dfa.k):
            walk(word + [j], apply_word(dfa, current, (j,)))

    walk([], full)
    return out


def brute_condition_1(dfa):
    """Condition (1) by literal enumeration of qualifying words."""
    n = dfa.n
    full = dfa.full_set()
    for w in qualifying_words(dfa):
        if len(w) < 4:
            return False
        if len(apply_word(dfa, full, w[:4])) <= n - 2:
            return False
    return True


def brute_condition_4(dfa):
    """Condition (4) by literal enumeration of qualifying words."""
    n = dfa.n
    full = dfa.full_set()
    profile = (n, n - 1, n - 1, n - 1, n - 1, n - 2, n - 2, n - 2, n - 2, n - 3)
    for w in qualifying_words(dfa):
        if len(w) != 9:
            return False
        sizes = [n]
        current = full
        for s in w:
            current = apply_word(dfa, current, (s,))
            sizes.append(len(current))
        if tuple(sizes) != profile:
            return False
    return True


def brute_hypothesis_greedy(dfa):
    return bool(qualifying_words(dfa))


def random_dfa_tables(rng, n, k):
    return [tuple(rng.randrange(1, n + 1) for _ in range(n)) for _ in range(k)]


def random_dfas(seed, count, n, k):
    rng = random.Random(seed)
    return [Dfa.from_tables(random_dfa_tables(rng, n, k)) for _ in range(count)]
