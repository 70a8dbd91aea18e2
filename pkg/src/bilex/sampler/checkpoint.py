"""Checkpointing of sampler states and posterior estimates.

Both artifact kinds are stored in the bilex container format (see
``bilex.container``).  A state checkpoint is fully self-contained: it
embeds the pseudo-document arrays, both vocabularies as strings, the
hyperparameters, the model kind, the assignments, and the generator
state, so training can resume exactly.  Count tables are rebuilt on load
(they are a pure function of the assignments).
"""

from __future__ import annotations

import numpy as np

from ..container import read_container, write_container
from ..corpus import PseudoDocCollection, Vocabulary
from .gibbs import PosteriorEstimates
from .state import HyperParams, SamplerState, LangCounts, rebuild_counts, _install_counts

STATE_KIND = "bilex-sampler-state"
ESTIMATES_KIND = "bilex-estimates"


def _pdocs_meta(p: PseudoDocCollection) -> dict:
    return {"language_tag": p.language_tag, "n_documents": p.n_documents, "words": list(p.vocab.words)}


def _pdocs_arrays(p: PseudoDocCollection, prefix: str) -> dict:
    return {
        f"{prefix}_offsets": p.offsets,
        f"{prefix}_tokens": p.tokens,
        f"{prefix}_frequencies": p.vocab.frequencies,
    }


def _pdocs_from(meta: dict, arrays: dict, prefix: str) -> PseudoDocCollection:
    words = meta["words"]
    return PseudoDocCollection(
        language_tag=meta["language_tag"],
        vocab=Vocabulary(
            words=words,
            index={w: i for i, w in enumerate(words)},
            frequencies=arrays[f"{prefix}_frequencies"],
        ),
        n_documents=int(meta["n_documents"]),
        offsets=arrays[f"{prefix}_offsets"],
        tokens=arrays[f"{prefix}_tokens"],
    )


def save_state(obj, path) -> None:
    """Write a SamplerState or PosteriorEstimates checkpoint."""
    if isinstance(obj, SamplerState):
        _save_sampler_state(obj, path)
    elif isinstance(obj, PosteriorEstimates):
        _save_estimates(obj, path)
    else:
        raise TypeError(f"cannot checkpoint a {type(obj).__name__}")


def load_state(path):
    """Load whichever checkpoint kind ``path`` holds."""
    kind, _, _ = read_container(path)
    if kind == STATE_KIND:
        return load_sampler_state(path)
    if kind == ESTIMATES_KIND:
        return load_estimates(path)
    raise ValueError(f"{path!r} holds unsupported artifact kind {kind!r}")


def _save_sampler_state(state: SamplerState, path) -> None:
    meta = {
        "model": state.model,
        "hp": state.hp.to_dict(),
        "src": _pdocs_meta(state.pdocs_src),
        "tgt": _pdocs_meta(state.pdocs_tgt),
        "rng_state": _encode_rng(state.rng),
        "sweeps_done": state.sweeps_done,
        "selection_level": "token" if state.sel_token is not None else "word",
    }
    arrays = {
        "cand_offsets": state.cand_offsets,
        "cand_targets": state.cand_targets,
        "z_src": state.src.z,
        "z_tgt": state.tgt.z,
        "sel": state.sel_token if state.sel_token is not None else state.sel_word,
    }
    arrays.update(_pdocs_arrays(state.pdocs_src, "src"))
    arrays.update(_pdocs_arrays(state.pdocs_tgt, "tgt"))
    write_container(path, STATE_KIND, meta, arrays)


def load_sampler_state(path) -> SamplerState:
    _, meta, arrays = read_container(path, expect_kind=STATE_KIND)
    pdocs_src = _pdocs_from(meta["src"], arrays, "src")
    pdocs_tgt = _pdocs_from(meta["tgt"], arrays, "tgt")
    token_level = meta["selection_level"] == "token"
    state = SamplerState(
        model=meta["model"],
        hp=HyperParams.from_dict(meta["hp"]),
        pdocs_src=pdocs_src,
        pdocs_tgt=pdocs_tgt,
        cand_offsets=arrays["cand_offsets"],
        cand_targets=arrays["cand_targets"],
        src=LangCounts(z=arrays["z_src"], nmk=None, nm=None, nkv=None, nk=None),
        tgt=LangCounts(z=arrays["z_tgt"], nmk=None, nm=None, nkv=None, nk=None),
        sel_word=None if token_level else arrays["sel"],
        sel_token=arrays["sel"] if token_level else None,
        cmk=None,
        cm=None,
        nms=None,
        rng=_decode_rng(meta["rng_state"]),
        sweeps_done=int(meta["sweeps_done"]),
    )
    _install_counts(state, rebuild_counts(state))
    return state


def _encode_rng(rng: np.random.Generator) -> dict:
    st = rng.bit_generator.state
    if st["bit_generator"] != "PCG64":
        raise ValueError(f"unsupported bit generator {st['bit_generator']!r}")
    return {"state": str(st["state"]["state"]), "inc": str(st["state"]["inc"]),
            "has_uint32": st["has_uint32"], "uinteger": st["uinteger"]}


def _decode_rng(d: dict) -> np.random.Generator:
    bg = np.random.PCG64()
    bg.state = {
        "bit_generator": "PCG64",
        "state": {"state": int(d["state"]), "inc": int(d["inc"])},
        "has_uint32": int(d["has_uint32"]),
        "uinteger": int(d["uinteger"]),
    }
    return np.random.Generator(bg)


def _save_estimates(est: PosteriorEstimates, path) -> None:
    meta = {
        "model": est.model,
        "hp": est.hp.to_dict(),
        "source_tag": est.source_tag,
        "target_tag": est.target_tag,
        "source_words": est.source_words,
        "target_words": est.target_words,
        "n_samples": est.n_samples,
    }
    arrays = {
        "theta_src": est.theta_src,
        "theta_tgt": est.theta_tgt,
        "phi_src": est.phi_src,
        "phi_tgt": est.phi_tgt,
    }
    write_container(path, ESTIMATES_KIND, meta, arrays)


def load_estimates(path) -> PosteriorEstimates:
    _, meta, arrays = read_container(path, expect_kind=ESTIMATES_KIND)
    return PosteriorEstimates(
        model=meta["model"],
        hp=HyperParams.from_dict(meta["hp"]),
        source_tag=meta["source_tag"],
        target_tag=meta["target_tag"],
        source_words=meta["source_words"],
        target_words=meta["target_words"],
        theta_src=arrays["theta_src"],
        theta_tgt=arrays["theta_tgt"],
        phi_src=arrays["phi_src"],
        phi_tgt=arrays["phi_tgt"],
        n_samples=int(meta["n_samples"]),
    )
