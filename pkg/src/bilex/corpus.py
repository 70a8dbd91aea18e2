"""Corpus loading, vocabulary construction, and the inverted-index
pseudo-document representation.

A corpus is a plain UTF-8 text file with one document per line and tokens
separated by whitespace.  Tokenization, lemmatization and stopword removal
are the caller's responsibility; documents shorter than ``min_doc_len``
tokens are dropped at load time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_MIN_DOC_LEN = 5


@dataclass
class Corpus:
    """Retained documents of one language, as token lists with dense ids."""

    language_tag: str
    documents: list[list[str]]

    @property
    def n_documents(self) -> int:
        return len(self.documents)

    @property
    def n_tokens(self) -> int:
        return sum(len(d) for d in self.documents)


@dataclass
class Vocabulary:
    """Bijective word <-> dense-id mapping with corpus frequencies.

    Ids are assigned by first occurrence order in the corpus.
    """

    words: list[str]
    index: dict[str, int] = field(repr=False)
    frequencies: np.ndarray  # total token count per word id

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def id_of(self, word: str) -> int:
        return self.index[word]

    def word_of(self, word_id: int) -> str:
        return self.words[word_id]


@dataclass
class PseudoDocCollection:
    """Inverted index of one corpus: per word, the multiset of document ids
    where it occurs, stored as a flat CSR-style token array.

    ``tokens[offsets[w]:offsets[w+1]]`` holds the doc id of every occurrence
    of word ``w``, sorted ascending (a canonical order; the model treats the
    tokens as exchangeable).  ``n_documents`` plays the role of the
    "vocabulary size" of the reversed topic model.
    """

    language_tag: str
    vocab: Vocabulary
    n_documents: int
    offsets: np.ndarray  # int64, len == n_words + 1
    tokens: np.ndarray  # int32 doc ids, len == total token count

    @property
    def n_words(self) -> int:
        return len(self.vocab)

    @property
    def n_tokens(self) -> int:
        return int(self.offsets[-1])

    def pseudo_doc(self, word_id: int) -> np.ndarray:
        return self.tokens[self.offsets[word_id] : self.offsets[word_id + 1]]

    def word_frequency(self, word_id: int) -> int:
        return int(self.offsets[word_id + 1] - self.offsets[word_id])


def load_corpus(path, language_tag: str, min_doc_len: int = DEFAULT_MIN_DOC_LEN) -> Corpus:
    """Read one-document-per-line UTF-8 text, dropping short documents.

    Documents with fewer than ``min_doc_len`` tokens (and blank lines) are
    dropped; retained documents keep their file order and get dense ids.
    Raises ``ValueError`` if nothing survives the filter or the file is not
    valid UTF-8.
    """
    documents = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                toks = line.split()
                if len(toks) >= min_doc_len:
                    documents.append(toks)
    except UnicodeDecodeError as exc:
        raise ValueError(f"corpus file {path!r} is not valid UTF-8: {exc}") from None
    if not documents:
        raise ValueError(f"empty corpus: no document in {path!r} has >= {min_doc_len} tokens")
    return Corpus(language_tag=language_tag, documents=documents)


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    """Assign word ids in first-occurrence order and count frequencies."""
    if not corpus.documents:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    index: dict[str, int] = {}
    counts: list[int] = []
    for doc in corpus.documents:
        for tok in doc:
            wid = index.get(tok)
            if wid is None:
                index[tok] = len(counts)
                counts.append(1)
            else:
                counts[wid] += 1
    return Vocabulary(
        words=list(index.keys()),
        index=index,
        frequencies=np.asarray(counts, dtype=np.int64),
    )


def invert_index(corpus: Corpus, vocab: Vocabulary) -> PseudoDocCollection:
    """Swap the roles of words and documents.

    Each word becomes a pseudo-document: the list of doc ids of its token
    occurrences with multiplicity, ascending.  E.g. a word occurring twice
    in doc 1 and once each in docs 2 and 3 becomes ``(1, 1, 2, 3)``.
    """
    n_words = len(vocab)
    lengths = np.zeros(n_words, dtype=np.int64)
    for doc in corpus.documents:
        for tok in doc:
            wid = vocab.index.get(tok)
            if wid is None:
                raise ValueError(f"vocabulary/corpus mismatch: token {tok!r} not in vocabulary")
            lengths[wid] += 1
    if not np.array_equal(lengths, vocab.frequencies):
        raise ValueError("vocabulary/corpus mismatch: frequencies disagree with corpus")
    offsets = np.zeros(n_words + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    tokens = np.empty(int(offsets[-1]), dtype=np.int32)
    cursor = offsets[:-1].copy()
    # Scanning documents in ascending doc id yields the canonical ascending
    # order inside every pseudo-document.
    for doc_id, doc in enumerate(corpus.documents):
        for tok in doc:
            wid = vocab.index[tok]
            tokens[cursor[wid]] = doc_id
            cursor[wid] += 1
    return PseudoDocCollection(
        language_tag=corpus.language_tag,
        vocab=vocab,
        n_documents=corpus.n_documents,
        offsets=offsets,
        tokens=tokens,
    )


def index_corpus_file(path, language_tag: str, min_doc_len: int = DEFAULT_MIN_DOC_LEN) -> PseudoDocCollection:
    """Convenience: load, build vocabulary, and invert in one call."""
    corpus = load_corpus(path, language_tag, min_doc_len=min_doc_len)
    return invert_index(corpus, build_vocabulary(corpus))
