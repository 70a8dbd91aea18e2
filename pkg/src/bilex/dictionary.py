"""Seed dictionary and test set handling.

Both files are UTF-8 TSV with one ``source<TAB>target`` pair per line;
lines starting with ``#`` are comments.  Pairs whose source or target word
does not occur in the respective corpus are dropped, so every id stored
here is covered by the corresponding vocabulary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .corpus import Vocabulary

log = logging.getLogger(__name__)


@dataclass
class SeedDictionary:
    """Noisy generic dictionary: source word id -> candidate target ids.

    Candidate lists are duplicate-free and sorted ascending by target id
    (the deterministic tie-break order used everywhere downstream).
    """

    source_tag: str
    target_tag: str
    entries: dict[int, list[int]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def candidates(self, source_id: int) -> list[int]:
        return self.entries[source_id]


@dataclass
class PairedDictionary:
    """One-to-one pairing derived from a seed dictionary."""

    source_tag: str
    target_tag: str
    pairs: dict[int, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class TestSet:
    """Gold pairs: source word id -> set of acceptable target ids.

    A gold word is labelled "new" when it is absent from the seed
    dictionary; the full split contains every gold word.
    """

    source_tag: str
    target_tag: str
    gold: dict[int, set[int]] = field(repr=False)
    new_words: set[int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.gold)


def _read_pair_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise ValueError(f"{path}:{lineno}: expected 'source<TAB>target', got {line.rstrip()!r}")
            yield fields[0], fields[1]


def load_dictionary(path, src_vocab: Vocabulary, tgt_vocab: Vocabulary,
                    source_tag: str = "src", target_tag: str = "tgt") -> SeedDictionary:
    """Load a seed dictionary, dropping OOV pairs and duplicate lines."""
    entries: dict[int, set[int]] = {}
    n_pairs = n_oov = 0
    for src_word, tgt_word in _read_pair_lines(path):
        n_pairs += 1
        if src_word not in src_vocab or tgt_word not in tgt_vocab:
            n_oov += 1
            continue
        entries.setdefault(src_vocab.id_of(src_word), set()).add(tgt_vocab.id_of(tgt_word))
    if not entries:
        raise ValueError(f"empty dictionary: no in-vocabulary pair in {path!r}")
    if n_oov:
        log.info("dropped %d/%d dictionary pairs with out-of-corpus words", n_oov, n_pairs)
    return SeedDictionary(
        source_tag=source_tag,
        target_tag=target_tag,
        entries={src: sorted(tgts) for src, tgts in sorted(entries.items())},
    )


def most_frequent_pairing(seed: SeedDictionary, tgt_vocab: Vocabulary) -> PairedDictionary:
    """Collapse each candidate list to the most frequent target word.

    Frequency ties break toward the smallest target word id.
    """
    pairs = {}
    for src, cands in seed.entries.items():
        # candidates are sorted ascending, so max() keeps the smallest id on ties
        pairs[src] = max(cands, key=lambda t: (tgt_vocab.frequencies[t], -t))
    return PairedDictionary(source_tag=seed.source_tag, target_tag=seed.target_tag, pairs=pairs)


def transpose_dictionary(seed: SeedDictionary) -> SeedDictionary:
    """Flip the dictionary direction (target ids become sources)."""
    flipped: dict[int, set[int]] = {}
    for src, cands in seed.entries.items():
        for tgt in cands:
            flipped.setdefault(tgt, set()).add(src)
    return SeedDictionary(
        source_tag=seed.target_tag,
        target_tag=seed.source_tag,
        entries={src: sorted(tgts) for src, tgts in sorted(flipped.items())},
    )


def load_test_set(path, seed: SeedDictionary, src_vocab: Vocabulary, tgt_vocab: Vocabulary) -> TestSet:
    """Load gold pairs; label each source word "new" iff it has no seed entry.

    Pairs with out-of-corpus words are dropped with a warning, mirroring the
    dictionary loader.
    """
    gold: dict[int, set[int]] = {}
    n_dropped = 0
    for src_word, tgt_word in _read_pair_lines(path):
        if src_word not in src_vocab or tgt_word not in tgt_vocab:
            n_dropped += 1
            log.warning("test pair (%s, %s) dropped: word not in corpus", src_word, tgt_word)
            continue
        gold.setdefault(src_vocab.id_of(src_word), set()).add(tgt_vocab.id_of(tgt_word))
    if not gold:
        raise ValueError(f"empty test set: no in-vocabulary pair in {path!r}")
    new_words = {src for src in gold if src not in seed.entries}
    return TestSet(
        source_tag=seed.source_tag,
        target_tag=seed.target_tag,
        gold=gold,
        new_words=new_words,
    )
