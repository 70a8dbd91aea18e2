"""Sampler state: hyperparameters, assignments, and Gibbs count tables.

Conventions used throughout the sampler:

* The *source* language holds the dictionary's left-hand words; its tokens
  cite a *target*-language word as their translation.  A sweep always
  visits target words first, then source words, both in ascending word id
  and canonical token order; this fixes the RNG consumption order.
* Candidate lists are stored CSR-style: word ``w`` of the source language
  has candidates ``cand_targets[cand_offsets[w]:cand_offsets[w+1]]``
  (target word ids, ascending).  Words without a dictionary entry have an
  empty range and follow plain LDA updates.
* Selections are stored as candidate *indices*: per token for the
  per-token selection model, per word otherwise; ``-1`` marks words/tokens
  without a dictionary entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from ..corpus import PseudoDocCollection
from ..dictionary import PairedDictionary, SeedDictionary

MODELS = ("bilda", "bilda-all", "probbilda", "blockprobbilda")

# models whose selection variable lives on the word, not the token
WORD_SELECTION_MODELS = ("bilda", "bilda-all", "blockprobbilda")


@dataclass
class HyperParams:
    """Gibbs sampler configuration (symmetric Dirichlet priors)."""

    n_topics: int = 50
    alpha: float = 0.5  # prior over topics per word
    beta: float = 0.01  # prior over documents per topic
    alpha_psi: float = 0.5  # prior over translation selections
    iterations: int = 1500
    burn_in: int = 1000
    sample_lag: int = 10
    rng_seed: int = 0

    def validate(self) -> None:
        if self.n_topics < 2:
            raise ValueError(f"n_topics must be >= 2, got {self.n_topics}")
        if min(self.alpha, self.beta, self.alpha_psi) <= 0:
            raise ValueError("alpha, beta and alpha_psi must be positive")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError(f"need 0 <= burn_in < iterations, got {self.burn_in}/{self.iterations}")
        if self.sample_lag < 1:
            raise ValueError(f"sample_lag must be >= 1, got {self.sample_lag}")
        if self.iterations - self.burn_in < self.sample_lag:
            raise ValueError("no posterior sample would be retained; shrink sample_lag or burn_in")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "HyperParams":
        return cls(**d)


@dataclass
class LangCounts:
    """Per-language count tables, maintained incrementally by the kernels."""

    z: np.ndarray  # int32 per-token topic assignment
    nmk: np.ndarray  # int64 [n_words, K] own-token topic counts per word
    nm: np.ndarray  # int64 [n_words] pseudo-document lengths (constant)
    nkv: np.ndarray  # int64 [K, n_documents] topic-document counts
    nk: np.ndarray  # int64 [K] per-topic token totals


@dataclass
class SamplerState:
    model: str
    hp: HyperParams
    pdocs_src: PseudoDocCollection
    pdocs_tgt: PseudoDocCollection
    cand_offsets: np.ndarray  # int64 [n_src_words + 1]
    cand_targets: np.ndarray  # int32, target word ids, ascending per word
    src: LangCounts
    tgt: LangCounts
    # translation-selection state: exactly one of the two is used
    sel_word: np.ndarray | None  # int32 [n_src_words], candidate index or -1
    sel_token: np.ndarray | None  # int32 [n_src_tokens], candidate index or -1
    cmk: np.ndarray  # int64 [n_tgt_words, K] citing-token topic counts
    cm: np.ndarray  # int64 [n_tgt_words] citing-token totals
    nms: np.ndarray  # int64, aligned with cand_targets: per-word selection counts
    rng: np.random.Generator = field(repr=False)
    sweeps_done: int = 0

    @property
    def n_dict_words(self) -> int:
        return int(np.count_nonzero(np.diff(self.cand_offsets)))

    def dictionary_words(self) -> np.ndarray:
        return np.flatnonzero(np.diff(self.cand_offsets) > 0)

    def cited_target(self, src_word: int) -> int:
        """Target word id currently cited by ``src_word`` (word-level models)."""
        a = int(self.sel_word[src_word])
        if a < 0:
            raise ValueError(f"source word {src_word} has no dictionary entry")
        return int(self.cand_targets[self.cand_offsets[src_word] + a])


def _candidate_arrays(dictionary, n_src_words: int, n_tgt_words: int):
    if isinstance(dictionary, PairedDictionary):
        entries = {src: [tgt] for src, tgt in dictionary.pairs.items()}
    elif isinstance(dictionary, SeedDictionary):
        entries = dictionary.entries
    else:
        raise TypeError(f"expected SeedDictionary or PairedDictionary, got {type(dictionary).__name__}")
    lengths = np.zeros(n_src_words, dtype=np.int64)
    for src, cands in entries.items():
        if not 0 <= src < n_src_words:
            raise ValueError(f"dictionary source word id {src} outside vocabulary")
        if not cands:
            raise ValueError(f"dictionary entry for word {src} has no candidates")
        lengths[src] = len(cands)
    offsets = np.zeros(n_src_words + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    targets = np.empty(int(offsets[-1]), dtype=np.int32)
    for src, cands in entries.items():
        if any(not 0 <= t < n_tgt_words for t in cands):
            raise ValueError(f"dictionary entry for word {src} references an unknown target word")
        targets[offsets[src] : offsets[src] + len(cands)] = sorted(cands)
    return offsets, targets


def init_state(pdocs_src: PseudoDocCollection, pdocs_tgt: PseudoDocCollection,
               dictionary, model: str, hp: HyperParams) -> SamplerState:
    """Draw uniform-random topics and selections and build all count tables.

    RNG order: target topics, source topics, then selections in ascending
    word (and token) order.  The same seed therefore reproduces the state
    bit for bit.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}, expected one of {MODELS}")
    hp.validate()
    if model == "bilda" and not isinstance(dictionary, PairedDictionary):
        raise TypeError("bilda trains on a PairedDictionary; apply most_frequent_pairing first")
    if model != "bilda" and not isinstance(dictionary, SeedDictionary):
        raise TypeError(f"{model} trains on a full SeedDictionary")

    n_src, n_tgt = pdocs_src.n_words, pdocs_tgt.n_words
    cand_offsets, cand_targets = _candidate_arrays(dictionary, n_src, n_tgt)
    K = hp.n_topics
    rng = np.random.default_rng(hp.rng_seed)

    z_tgt = rng.integers(0, K, size=pdocs_tgt.n_tokens, dtype=np.int32)
    z_src = rng.integers(0, K, size=pdocs_src.n_tokens, dtype=np.int32)

    sel_word = sel_token = None
    n_cands = np.diff(cand_offsets)
    if model in WORD_SELECTION_MODELS:
        sel_word = np.full(n_src, -1, dtype=np.int32)
        for w in np.flatnonzero(n_cands > 0):
            sel_word[w] = rng.integers(0, n_cands[w])
    else:
        sel_token = np.full(pdocs_src.n_tokens, -1, dtype=np.int32)
        for w in np.flatnonzero(n_cands > 0):
            lo, hi = pdocs_src.offsets[w], pdocs_src.offsets[w + 1]
            sel_token[lo:hi] = rng.integers(0, n_cands[w], size=hi - lo, dtype=np.int32)

    state = SamplerState(
        model=model,
        hp=hp,
        pdocs_src=pdocs_src,
        pdocs_tgt=pdocs_tgt,
        cand_offsets=cand_offsets,
        cand_targets=cand_targets,
        src=LangCounts(z=z_src, nmk=None, nm=None, nkv=None, nk=None),
        tgt=LangCounts(z=z_tgt, nmk=None, nm=None, nkv=None, nk=None),
        sel_word=sel_word,
        sel_token=sel_token,
        cmk=None,
        cm=None,
        nms=None,
        rng=rng,
    )
    _install_counts(state, rebuild_counts(state))
    return state


def _lang_counts_from(z, pdocs, K):
    n_words, n_docs = pdocs.n_words, pdocs.n_documents
    word_of_token = np.repeat(np.arange(n_words, dtype=np.int64), np.diff(pdocs.offsets))
    nmk = np.zeros((n_words, K), dtype=np.int64)
    np.add.at(nmk, (word_of_token, z), 1)
    nkv = np.zeros((K, n_docs), dtype=np.int64)
    np.add.at(nkv, (z.astype(np.int64), pdocs.tokens.astype(np.int64)), 1)
    return {
        "nmk": nmk,
        "nm": np.diff(pdocs.offsets).astype(np.int64),
        "nkv": nkv,
        "nk": np.bincount(z, minlength=K).astype(np.int64),
    }


def rebuild_counts(state: SamplerState) -> dict:
    """Recompute every count table from the raw assignments.

    This is the defining relation between (z, s) and the tables; the sweep
    kernels must keep the incremental tables equal to this at all times.
    """
    K = state.hp.n_topics
    counts = {
        "src": _lang_counts_from(state.src.z, state.pdocs_src, K),
        "tgt": _lang_counts_from(state.tgt.z, state.pdocs_tgt, K),
    }
    n_tgt = state.pdocs_tgt.n_words
    cmk = np.zeros((n_tgt, K), dtype=np.int64)
    cm = np.zeros(n_tgt, dtype=np.int64)
    # nms is a per-token-selection table; it stays all-zero for the
    # word-level selection models, which never condition on it
    nms = np.zeros(len(state.cand_targets), dtype=np.int64)
    offsets = state.pdocs_src.offsets
    if state.sel_token is not None:
        mask = state.sel_token >= 0
        word_of_token = np.repeat(np.arange(state.pdocs_src.n_words, dtype=np.int64), np.diff(offsets))
        slot = state.cand_offsets[word_of_token[mask]] + state.sel_token[mask]
        cited = state.cand_targets[slot].astype(np.int64)
        np.add.at(cmk, (cited, state.src.z[mask]), 1)
        np.add.at(cm, cited, 1)
        np.add.at(nms, slot, 1)
    else:
        for w in np.flatnonzero(state.sel_word >= 0):
            c = state.cand_targets[state.cand_offsets[w] + state.sel_word[w]]
            cmk[c] += counts["src"]["nmk"][w]
            cm[c] += offsets[w + 1] - offsets[w]
    counts["cmk"], counts["cm"], counts["nms"] = cmk, cm, nms
    return counts


def _install_counts(state: SamplerState, counts: dict) -> None:
    for lang in ("src", "tgt"):
        tables = getattr(state, lang)
        for name, arr in counts[lang].items():
            setattr(tables, name, arr)
    state.cmk, state.cm, state.nms = counts["cmk"], counts["cm"], counts["nms"]


def count_mismatches(state: SamplerState) -> int:
    """Number of count-table cells that disagree with a from-scratch rebuild."""
    fresh = rebuild_counts(state)
    n = 0
    for lang in ("src", "tgt"):
        tables = getattr(state, lang)
        for name, arr in fresh[lang].items():
            n += int(np.count_nonzero(getattr(tables, name) != arr))
    for name in ("cmk", "cm", "nms"):
        n += int(np.count_nonzero(getattr(state, name) != fresh[name]))
    return n


def assert_consistent(state: SamplerState) -> None:
    n = count_mismatches(state)
    if n:
        raise AssertionError(f"{n} count-table cells disagree with the assignments")
