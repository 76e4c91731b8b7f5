"""Breadth-first search over the power automaton.

This module is the oracle everything else is checked against: exact
shortest compressing words, the rank of an automaton (the minimum
reachable image size), size profiles, and the stage-wise greedy
compressor.  All searches run over the forward closure of the start set
only, never the full subset lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .automaton import StateSet, apply_word

__all__ = [
    "CompressionResult",
    "GreedyProfile",
    "shortest_compressing_word",
    "rank",
    "size_profile",
    "greedy_word",
]

# Full subset-image tables are precomputed up to this many states; beyond
# that images are computed per set (the tables would need 2^n entries).
_TABLE_LIMIT = 13


@dataclass(frozen=True)
class CompressionResult:
    """A shortest compressing word with its landing set and size profile."""

    word: tuple
    final_set: StateSet
    profile: tuple

    @property
    def length(self):
        return len(self.word)


@dataclass(frozen=True)
class GreedyProfile:
    """Stage decomposition of a greedy compression run.

    Each stage is a shortest word that strictly shrinks the current image;
    concatenating the stages reproduces ``total``.
    """

    stage_words: tuple
    stage_lengths: tuple
    total: tuple


@lru_cache(maxsize=128)
def subset_image_tables(dfa):
    """Per-letter tables mapping every subset bitmask to its image bitmask.

    Returns None when the automaton is too large for full tables.
    """
    if dfa.n > _TABLE_LIMIT:
        return None
    nsub = 1 << dfa.n
    tables = []
    for table in dfa.letters:
        bits = [1 << image for image in table]
        out = [0] * nsub
        for m in range(1, nsub):
            low = m & -m
            out[m] = out[m ^ low] | bits[low.bit_length() - 1]
        tables.append(out)
    return tables


def _steppers(dfa, letter_indices):
    """One mask->mask image function per letter, table-backed when possible."""
    tables = subset_image_tables(dfa)
    if tables is not None:
        return [tables[j].__getitem__ for j in letter_indices]

    def make(table):
        bits = [1 << image for image in table]

        def step(mask):
            out = 0
            while mask:
                low = mask & -mask
                out |= bits[low.bit_length() - 1]
                mask ^= low
            return out

        return step

    return [make(dfa.letters[j]) for j in letter_indices]


def _normalize_letters(dfa, allowed_letters):
    if allowed_letters is None:
        return tuple(range(dfa.k))
    letters = sorted(set(allowed_letters))
    if not letters:
        raise ValueError("allowed_letters must be non-empty when given")
    for j in letters:
        if not isinstance(j, int) or not 0 <= j < dfa.k:
            raise ValueError(f"invalid letter index {j}")
    return tuple(letters)


def _bfs_shortest(dfa, start_mask, target_size, letter_indices, max_len):
    """Lex-least shortest word taking start_mask to size <= target_size.

    Letters are explored in index order from a FIFO frontier, so the first
    qualifying discovery is the lexicographically least among the
    minimum-length witnesses.  Returns (word, final_mask) or None.
    """
    if start_mask.bit_count() <= target_size:
        return (), start_mask
    steppers = [(j, step) for j, step in zip(letter_indices, _steppers(dfa, letter_indices))]
    parent = {start_mask: None}
    frontier = [start_mask]
    depth = 0
    while frontier:
        if max_len is not None and depth >= max_len:
            return None
        depth += 1
        nxt = []
        for S in frontier:
            for j, step in steppers:
                T = step(S)
                if T not in parent:
                    parent[T] = (S, j)
                    if T.bit_count() <= target_size:
                        word = []
                        node = T
                        while parent[node] is not None:
                            node, letter = parent[node]
                            word.append(letter)
                        word.reverse()
                        return tuple(word), T
                    nxt.append(T)
        frontier = nxt
    return None


def shortest_compressing_word(dfa, start, target_size, allowed_letters=None, max_len=None):
    """Minimal-length word over the allowed letters compressing ``start``.

    Returns a CompressionResult whose word takes ``start`` to a set of size
    at most ``target_size``, or None when no such word exists (within
    ``max_len`` steps, if given).  Ties are broken by the lexicographically
    smallest letter-index sequence, which makes results reproducible.
    """
    if not 1 <= target_size <= len(start):
        raise ValueError(f"target size {target_size} out of range 1..{len(start)}")
    if max_len is not None and max_len < 0:
        raise ValueError("max_len must be non-negative")
    if start.mask >> dfa.n:
        raise ValueError("start set contains states beyond the automaton")
    letters = _normalize_letters(dfa, allowed_letters)
    hit = _bfs_shortest(dfa, start.mask, target_size, letters, max_len)
    if hit is None:
        return None
    word, final_mask = hit
    profile = size_profile(dfa, word, start=start)
    return CompressionResult(word=word, final_set=StateSet(final_mask), profile=profile)


def rank(dfa):
    """Minimum reachable image size of the full state set; 1 means synchronizable."""
    steppers = _steppers(dfa, range(dfa.k))
    start = (1 << dfa.n) - 1
    frontier = [start]
    seen = {start}
    best = dfa.n
    while frontier and best > 1:
        nxt = []
        for S in frontier:
            for step in steppers:
                T = step(S)
                if T not in seen:
                    seen.add(T)
                    size = T.bit_count()
                    if size < best:
                        best = size
                        if best == 1:
                            return 1
                    nxt.append(T)
        frontier = nxt
    return best


def size_profile(dfa, w, start=None):
    """Sizes of start.prefix for every prefix of ``w``, including the empty one."""
    if start is None:
        start = dfa.full_set()
    sizes = [len(start)]
    current = start
    for s in w:
        current = apply_word(dfa, current, (s,))
        sizes.append(len(current))
    return tuple(sizes)


def greedy_word(dfa, target_corank):
    """Stage-wise greedy compression of the full state set.

    Repeatedly appends a shortest word that strictly shrinks the current
    image, until the corank reaches ``target_corank``.  Returns None when a
    stage finds no shrinking word (greedy stalls).
    """
    if target_corank < 1:
        raise ValueError("target corank must be at least 1")
    current = dfa.full_set()
    stage_words = []
    total = []
    while dfa.n - len(current) < target_corank:
        if len(current) == 1:
            return None
        stage = shortest_compressing_word(dfa, current, len(current) - 1)
        if stage is None:
            return None
        stage_words.append(stage.word)
        total.extend(stage.word)
        current = stage.final_set
    return GreedyProfile(
        stage_words=tuple(stage_words),
        stage_lengths=tuple(len(word) for word in stage_words),
        total=tuple(total),
    )
