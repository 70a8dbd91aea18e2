"""Cross-lingual word similarity and translation ranking.

Three measures over the trained estimates: cosine and KL divergence
compare per-word topic distributions directly; the generative measure
scores a candidate by the log-probability that the candidate's topic
distribution generates the query word's pseudo-document.  All logs are
natural.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import PseudoDocCollection
from .sampler.gibbs import PosteriorEstimates

MEASURES = ("cosine", "kl", "selprob")

# measures ranked descending (higher is more similar); kl is a divergence
DESCENDING = {"cosine": True, "kl": False, "selprob": True}


@dataclass
class RankedCandidates:
    """Scored candidate translations for one query word, best first."""

    query_id: int
    query_tag: str
    measure: str
    items: list[tuple[int, float]]  # (candidate word id, score)

    def top(self, k: int) -> list[tuple[int, float]]:
        return self.items[:k]

    def candidate_ids(self) -> list[int]:
        return [c for c, _ in self.items]


def cosine(theta_a: np.ndarray, theta_b: np.ndarray) -> float:
    """Cosine similarity of two non-negative topic vectors."""
    a = np.asarray(theta_a, dtype=np.float64)
    b = np.asarray(theta_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
        raise ValueError(f"expected two equal-length vectors of dim >= 2, got {a.shape} and {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine is undefined for a zero vector")
    return float(a @ b / (na * nb))


def kl_divergence(theta_m: np.ndarray, theta_c: np.ndarray) -> float:
    """D(theta_m || theta_c) in nats; the query distribution goes first."""
    p = np.asarray(theta_m, dtype=np.float64)
    q = np.asarray(theta_c, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError(f"expected two equal-length vectors, got {p.shape} and {q.shape}")
    for name, v in (("theta_m", p), ("theta_c", q)):
        if abs(v.sum() - 1.0) > 1e-6:
            raise ValueError(f"{name} is not normalized (sum {v.sum():.8f})")
    if np.any(q <= 0.0):
        raise ValueError("theta_c has a zero entry; KL is undefined")
    mask = p > 0.0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def sel_prob_log(query_pseudo_doc: np.ndarray, theta_cand: np.ndarray, phi_query: np.ndarray) -> float:
    """log p(query pseudo-document | candidate's topic distribution).

    = sum over tokens d of log( sum_k phi_query[k, d] * theta_cand[k] ).
    The inner sum is a convex mixture evaluated in linear space; only the
    per-token logs are summed, so pseudo-documents of millions of tokens
    cannot underflow.
    """
    docs = np.asarray(query_pseudo_doc, dtype=np.int64)
    theta = np.asarray(theta_cand, dtype=np.float64)
    phi = np.asarray(phi_query, dtype=np.float64)
    if docs.size and (docs.min() < 0 or docs.max() >= phi.shape[1]):
        raise ValueError("pseudo-document references a document id outside phi's support")
    counts = np.bincount(docs, minlength=0)
    present = np.flatnonzero(counts)
    mix = theta @ phi[:, present]
    return float(np.log(mix) @ counts[present])


def _sel_prob_log_many(query_pseudo_doc, thetas: np.ndarray, phi_query: np.ndarray) -> np.ndarray:
    """sel_prob_log of one query against a [n_cands, K] block of thetas."""
    docs = np.asarray(query_pseudo_doc, dtype=np.int64)
    if docs.size and (docs.min() < 0 or docs.max() >= phi_query.shape[1]):
        raise ValueError("pseudo-document references a document id outside phi's support")
    counts = np.bincount(docs, minlength=0)
    present = np.flatnonzero(counts)
    mix = thetas @ phi_query[:, present]
    return np.log(mix) @ counts[present]


def rank_candidates(query_id: int, query_tag: str, measure: str, estimates: PosteriorEstimates,
                    candidates=None, pdocs_query: PseudoDocCollection | None = None) -> RankedCandidates:
    """Score and sort candidate translations of one query word.

    Candidates default to the full other-language vocabulary.  The
    generative measure needs the query language's pseudo-documents
    (``pdocs_query``).  Sorting follows the measure's convention with ties
    broken toward the smallest candidate word id.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}, expected one of {MEASURES}")
    cand_tag = estimates.other_tag(query_tag)
    theta_q = estimates.theta_of(query_tag)
    theta_c = estimates.theta_of(cand_tag)
    if not 0 <= query_id < theta_q.shape[0]:
        raise ValueError(f"query word id {query_id} outside the {query_tag!r} vocabulary")
    if candidates is None:
        cand_ids = np.arange(theta_c.shape[0], dtype=np.int64)
    else:
        cand_ids = np.asarray(sorted(candidates), dtype=np.int64)
        if cand_ids.size == 0:
            raise ValueError("empty candidate set")
        if cand_ids.min() < 0 or cand_ids.max() >= theta_c.shape[0]:
            raise ValueError(f"candidate id outside the {cand_tag!r} vocabulary")

    if measure == "cosine":
        q = theta_q[query_id]
        block = theta_c[cand_ids]
        scores = block @ q / (np.linalg.norm(block, axis=1) * np.linalg.norm(q))
    elif measure == "kl":
        q = theta_q[query_id]
        block = theta_c[cand_ids]
        with np.errstate(divide="ignore", invalid="ignore"):
            # terms with q == 0 contribute nothing; a zero candidate entry
            # against q > 0 correctly yields an infinite divergence
            scores = np.sum(np.where(q > 0, q * np.log(q / block), 0.0), axis=1)
    else:
        if pdocs_query is None:
            raise ValueError("measure 'selprob' needs the query language's pseudo-documents")
        if pdocs_query.language_tag != query_tag:
            raise ValueError(f"pseudo-documents are for {pdocs_query.language_tag!r}, query is {query_tag!r}")
        scores = _sel_prob_log_many(pdocs_query.pseudo_doc(query_id), theta_c[cand_ids],
                                    estimates.phi_of(query_tag))

    key = -scores if DESCENDING[measure] else scores
    order = np.lexsort((cand_ids, key))
    items = [(int(cand_ids[i]), float(scores[i])) for i in order]
    return RankedCandidates(query_id=query_id, query_tag=query_tag, measure=measure, items=items)


def doc_given_word(doc_id: int, word_id: int, word_tag: str, estimates: PosteriorEstimates) -> float:
    """Cross-lingual retrieval probability p(doc | word) = sum_z p(doc|z) p(z|word).

    The document lives in the *other* language than the word; its topics'
    document distributions are mixed by the word's topic distribution.
    """
    doc_tag = estimates.other_tag(word_tag)
    theta = estimates.theta_of(word_tag)
    phi = estimates.phi_of(doc_tag)
    if not 0 <= word_id < theta.shape[0]:
        raise ValueError(f"word id {word_id} outside the {word_tag!r} vocabulary")
    if not 0 <= doc_id < phi.shape[1]:
        raise ValueError(f"document id {doc_id} outside the {doc_tag!r} corpus")
    return float(theta[word_id] @ phi[:, doc_id])


def write_ranking_tsv(fh, query_word: str, ranked: RankedCandidates, cand_words: list[str],
                      top: int | None = None) -> None:
    """Append ``query<TAB>rank<TAB>candidate<TAB>score`` rows (6 significant digits)."""
    for rank, (cand_id, score) in enumerate(ranked.items[:top], start=1):
        fh.write(f"{query_word}\t{rank}\t{cand_words[cand_id]}\t{score:.6g}\n")
