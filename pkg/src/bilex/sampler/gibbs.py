"""Sweep drivers and training loop.

Each ``sweep_*`` function runs one full pass of its model over both
languages (target words ascending, then source words ascending, tokens in
canonical order) and mutates the state in place.  All randomness is drawn
up front from the state's generator as one uniform array per sweep, so a
run is reproducible bit for bit from ``HyperParams.rng_seed``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .state import HyperParams, SamplerState, init_state


@dataclass
class PosteriorEstimates:
    """Averaged per-word topic distributions (theta) and topic-document
    distributions (phi), plus everything needed to interpret them."""

    model: str
    hp: HyperParams
    source_tag: str
    target_tag: str
    source_words: list[str]
    target_words: list[str]
    theta_src: np.ndarray  # [n_src_words, K]
    theta_tgt: np.ndarray  # [n_tgt_words, K]
    phi_src: np.ndarray  # [K, n_src_documents]
    phi_tgt: np.ndarray  # [K, n_tgt_documents]
    n_samples: int

    def _side(self, tag: str) -> str:
        if tag == self.source_tag:
            return "src"
        if tag == self.target_tag:
            return "tgt"
        raise KeyError(f"unknown language tag {tag!r}; have {self.source_tag!r}, {self.target_tag!r}")

    def other_tag(self, tag: str) -> str:
        return self.target_tag if self._side(tag) == "src" else self.source_tag

    def theta_of(self, tag: str) -> np.ndarray:
        return self.theta_src if self._side(tag) == "src" else self.theta_tgt

    def phi_of(self, tag: str) -> np.ndarray:
        return self.phi_src if self._side(tag) == "src" else self.phi_tgt

    def words_of(self, tag: str) -> list[str]:
        return self.source_words if self._side(tag) == "src" else self.target_words


def posterior_sample(state: SamplerState):
    """One (theta_src, theta_tgt, phi_src, phi_tgt) sample from the counts.

    theta[m,k] = (nmk[m,k] + alpha) / (nm[m] + K*alpha)
    phi[k,n]   = (nkv[k,n] + beta) / (nk[k] + V*beta)
    """
    hp = state.hp
    out = []
    for lang in (state.src, state.tgt):
        out.append((lang.nmk + hp.alpha) / (lang.nm + hp.n_topics * hp.alpha)[:, None])
    for lang in (state.src, state.tgt):
        out.append((lang.nkv + hp.beta) / (lang.nk + lang.nkv.shape[1] * hp.beta)[:, None])
    return tuple(out)


def _check_model(state: SamplerState, expected: str) -> None:
    if state.model != expected:
        raise ValueError(f"state was initialized for {state.model!r}, not {expected!r}")


def _run_cited_pass(state: SamplerState, u, cursor):
    tgt, p = state.tgt, state.pdocs_tgt
    return kernels.sweep_cited_language(
        p.tokens, p.offsets, tgt.z, tgt.nmk, tgt.nkv, tgt.nk, state.cmk,
        state.hp.alpha, state.hp.beta, u, cursor)


def _finish(state: SamplerState, cursor, u) -> SamplerState:
    if cursor != len(u):
        raise RuntimeError(f"RNG bookkeeping bug: consumed {cursor} of {len(u)} draws")
    state.sweeps_done += 1
    return state


def sweep_bilda(state: SamplerState) -> SamplerState:
    """One sweep with the fixed most-frequent pairing (one candidate per word)."""
    _check_model(state, "bilda")
    src, ps = state.src, state.pdocs_src
    u = state.rng.random(state.pdocs_tgt.n_tokens + ps.n_tokens)
    cursor = _run_cited_pass(state, u, 0)
    cursor = kernels.sweep_source_paired(
        ps.tokens, ps.offsets, src.z, state.sel_word, state.cand_offsets, state.cand_targets,
        src.nmk, src.nkv, src.nk, state.tgt.nmk, state.cmk,
        state.hp.alpha, state.hp.beta, u, cursor)
    return _finish(state, cursor, u)


def sweep_bilda_all(state: SamplerState) -> SamplerState:
    """One sweep re-pairing every dictionary word uniformly at sweep start."""
    _check_model(state, "bilda-all")
    src, ps = state.src, state.pdocs_src
    u = state.rng.random(state.n_dict_words + state.pdocs_tgt.n_tokens + ps.n_tokens)
    cursor = kernels.repair_uniform(
        state.sel_word, state.cand_offsets, state.cand_targets,
        src.nmk, src.nm, state.cmk, state.cm, u, 0)
    cursor = _run_cited_pass(state, u, cursor)
    cursor = kernels.sweep_source_paired(
        ps.tokens, ps.offsets, src.z, state.sel_word, state.cand_offsets, state.cand_targets,
        src.nmk, src.nkv, src.nk, state.tgt.nmk, state.cmk,
        state.hp.alpha, state.hp.beta, u, cursor)
    return _finish(state, cursor, u)


def sweep_probbilda(state: SamplerState) -> SamplerState:
    """One sweep with per-token translation selection."""
    _check_model(state, "probbilda")
    src, ps = state.src, state.pdocs_src
    n_sel = int(np.count_nonzero(state.sel_token >= 0))
    u = state.rng.random(state.pdocs_tgt.n_tokens + ps.n_tokens + n_sel)
    cursor = _run_cited_pass(state, u, 0)
    n_cands = np.diff(state.cand_offsets)
    ws = np.empty(max(int(n_cands.max()) if n_cands.size else 1, 1), np.float64)
    cursor = kernels.sweep_source_prob(
        ps.tokens, ps.offsets, src.z, state.sel_token, state.cand_offsets, state.cand_targets,
        src.nmk, src.nkv, src.nk, state.tgt.nmk, state.tgt.nm, state.cmk, state.cm, state.nms,
        state.hp.alpha, state.hp.beta, state.hp.alpha_psi, u, cursor, ws)
    return _finish(state, cursor, u)


def sweep_blockprobbilda(state: SamplerState) -> SamplerState:
    """One sweep with per-word selection via the log-space argmax rule."""
    _check_model(state, "blockprobbilda")
    src, ps = state.src, state.pdocs_src
    u = state.rng.random(state.pdocs_tgt.n_tokens + ps.n_tokens)
    cursor = _run_cited_pass(state, u, 0)
    cursor = kernels.sweep_source_block(
        ps.tokens, ps.offsets, src.z, state.sel_word, state.cand_offsets, state.cand_targets,
        src.nmk, src.nm, src.nkv, src.nk, state.tgt.nmk, state.tgt.nm, state.cmk, state.cm,
        state.hp.alpha, state.hp.beta, u, cursor)
    return _finish(state, cursor, u)


SWEEP_FNS = {
    "bilda": sweep_bilda,
    "bilda-all": sweep_bilda_all,
    "probbilda": sweep_probbilda,
    "blockprobbilda": sweep_blockprobbilda,
}


def run_training(pdocs_src, pdocs_tgt, dictionary, model: str, hp: HyperParams,
                 callback=None, return_state: bool = False):
    """Train one model and average the retained posterior samples.

    After ``hp.burn_in`` sweeps, a theta/phi sample is taken every
    ``hp.sample_lag`` sweeps and the retained samples are averaged
    arithmetically.  ``callback(sweep_index, state)``, when given, runs
    after every sweep.  With ``return_state`` the final state is returned
    alongside the estimates.
    """
    state = init_state(pdocs_src, pdocs_tgt, dictionary, model, hp)
    sweep = SWEEP_FNS[model]
    sums = None
    n_samples = 0
    for it in range(1, hp.iterations + 1):
        sweep(state)
        if it > hp.burn_in and (it - hp.burn_in) % hp.sample_lag == 0:
            sample = posterior_sample(state)
            if sums is None:
                sums = [s.copy() for s in sample]
            else:
                for acc, s in zip(sums, sample):
                    acc += s
            n_samples += 1
        if callback is not None:
            callback(it, state)
    if n_samples == 0:
        raise ValueError("no posterior samples retained; check iterations/burn_in/sample_lag")
    theta_src, theta_tgt, phi_src, phi_tgt = (acc / n_samples for acc in sums)
    estimates = PosteriorEstimates(
        model=model,
        hp=hp,
        source_tag=pdocs_src.language_tag,
        target_tag=pdocs_tgt.language_tag,
        source_words=list(pdocs_src.vocab.words),
        target_words=list(pdocs_tgt.vocab.words),
        theta_src=theta_src,
        theta_tgt=theta_tgt,
        phi_src=phi_src,
        phi_tgt=phi_tgt,
        n_samples=n_samples,
    )
    if return_state:
        return estimates, state
    return estimates
