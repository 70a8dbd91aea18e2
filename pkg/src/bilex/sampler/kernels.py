"""Collapsed-Gibbs sweep kernels.

These are numba-compiled inner loops over flat arrays; all randomness
comes from the pre-drawn uniform array ``u`` consumed sequentially from
``cursor``, so a kernel is a deterministic function of its inputs.  Every
kernel returns the advanced cursor.

Topic draws use cumulative-sum inversion over unnormalized weights, with
k-independent factors dropped.  Count tables are maintained incrementally
under the exclude-current-token convention: a token is removed from every
table it contributes to before its conditional is evaluated.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def sweep_cited_language(tokens, offsets, z, nmk, nkv, nk, cmk, alpha, beta, u, cursor):
    """Token pass over the cited (target) language.

    Weight of topic k for a token of word w in document n:
        (nmk[w,k] + cmk[w,k] + alpha) * (nkv[k,n] + beta) / (nk[k] + V*beta)
    where cmk aggregates the citing source tokens that currently select w.
    Words cited by nobody have cmk == 0 and reduce to plain LDA.
    """
    n_words = offsets.shape[0] - 1
    K = nmk.shape[1]
    vbeta = nkv.shape[1] * beta
    wk = np.empty(K, np.float64)
    for w in range(n_words):
        for t in range(offsets[w], offsets[w + 1]):
            n = tokens[t]
            k0 = z[t]
            nmk[w, k0] -= 1
            nkv[k0, n] -= 1
            nk[k0] -= 1
            total = 0.0
            for k in range(K):
                total += (nmk[w, k] + cmk[w, k] + alpha) * (nkv[k, n] + beta) / (nk[k] + vbeta)
                wk[k] = total
            r = u[cursor] * total
            cursor += 1
            k1 = 0
            while k1 < K - 1 and wk[k1] <= r:
                k1 += 1
            nmk[w, k1] += 1
            nkv[k1, n] += 1
            nk[k1] += 1
            z[t] = k1
    return cursor


@njit(cache=True)
def sweep_source_paired(tokens, offsets, z, sel_word, cand_offsets, cand_targets,
                        nmk_s, nkv_s, nk_s, nmk_t, cmk, alpha, beta, u, cursor):
    """Token pass over the source language with a fixed word-level pairing.

    A word citing target c pools its own topic counts with c's:
        (nmk_s[w,k] + nmk_t[c,k] + alpha) * phi-factor
    (only c's own counts enter, not other words citing c).  Words without
    a dictionary entry take plain LDA updates.  cmk/cm stay in sync with
    the citing words' topic counts for the target-language pass.
    """
    n_words = offsets.shape[0] - 1
    K = nmk_s.shape[1]
    vbeta = nkv_s.shape[1] * beta
    wk = np.empty(K, np.float64)
    for w in range(n_words):
        a = sel_word[w]
        c = cand_targets[cand_offsets[w] + a] if a >= 0 else -1
        for t in range(offsets[w], offsets[w + 1]):
            n = tokens[t]
            k0 = z[t]
            nmk_s[w, k0] -= 1
            nkv_s[k0, n] -= 1
            nk_s[k0] -= 1
            total = 0.0
            if c >= 0:
                cmk[c, k0] -= 1
                for k in range(K):
                    total += (nmk_s[w, k] + nmk_t[c, k] + alpha) * (nkv_s[k, n] + beta) / (nk_s[k] + vbeta)
                    wk[k] = total
            else:
                for k in range(K):
                    total += (nmk_s[w, k] + alpha) * (nkv_s[k, n] + beta) / (nk_s[k] + vbeta)
                    wk[k] = total
            r = u[cursor] * total
            cursor += 1
            k1 = 0
            while k1 < K - 1 and wk[k1] <= r:
                k1 += 1
            nmk_s[w, k1] += 1
            nkv_s[k1, n] += 1
            nk_s[k1] += 1
            if c >= 0:
                cmk[c, k1] += 1
            z[t] = k1
    return cursor


@njit(cache=True)
def repair_uniform(sel_word, cand_offsets, cand_targets, nmk_s, nm_s, cmk, cm, u, cursor):
    """Re-draw every dictionary word's citation uniformly (sweep-start step).

    Consumes one uniform per dictionary word, in ascending word order, and
    moves the word's aggregated counts between the old and new targets.
    """
    K = nmk_s.shape[1]
    for w in range(sel_word.shape[0]):
        a0 = sel_word[w]
        if a0 < 0:
            continue
        S = cand_offsets[w + 1] - cand_offsets[w]
        a1 = int(u[cursor] * S)
        cursor += 1
        if a1 >= S:
            a1 = S - 1
        if a1 != a0:
            c0 = cand_targets[cand_offsets[w] + a0]
            c1 = cand_targets[cand_offsets[w] + a1]
            for k in range(K):
                cmk[c0, k] -= nmk_s[w, k]
                cmk[c1, k] += nmk_s[w, k]
            cm[c0] -= nm_s[w]
            cm[c1] += nm_s[w]
            sel_word[w] = np.int32(a1)
    return cursor


@njit(cache=True)
def sweep_source_block(tokens, offsets, z, sel_word, cand_offsets, cand_targets,
                       nmk_s, nm_s, nkv_s, nk_s, nmk_t, nm_t, cmk, cm,
                       alpha, beta, u, cursor):
    """Source pass with block selection: resample a word's tokens, then
    re-select its citation by the log-space argmax score

        score(c) = sum_k nmk_s[w,k] * log(nmk_t[c,k] + alpha + other(c,k))
                   - nm_s[w] * log(nm_t[c] + K*alpha + other(c))

    where other(c, .) aggregates the counts of the *other* words currently
    citing c (eager bookkeeping: earlier words in this sweep already moved).
    Candidates are stored ascending, and only a strictly better score
    replaces the incumbent best, so ties resolve to the smallest target id.
    """
    n_words = offsets.shape[0] - 1
    K = nmk_s.shape[1]
    kalpha = K * alpha
    vbeta = nkv_s.shape[1] * beta
    wk = np.empty(K, np.float64)
    for w in range(n_words):
        a0 = sel_word[w]
        c = cand_targets[cand_offsets[w] + a0] if a0 >= 0 else -1
        for t in range(offsets[w], offsets[w + 1]):
            n = tokens[t]
            k0 = z[t]
            nmk_s[w, k0] -= 1
            nkv_s[k0, n] -= 1
            nk_s[k0] -= 1
            total = 0.0
            if c >= 0:
                cmk[c, k0] -= 1
                for k in range(K):
                    total += (nmk_s[w, k] + nmk_t[c, k] + alpha) * (nkv_s[k, n] + beta) / (nk_s[k] + vbeta)
                    wk[k] = total
            else:
                for k in range(K):
                    total += (nmk_s[w, k] + alpha) * (nkv_s[k, n] + beta) / (nk_s[k] + vbeta)
                    wk[k] = total
            r = u[cursor] * total
            cursor += 1
            k1 = 0
            while k1 < K - 1 and wk[k1] <= r:
                k1 += 1
            nmk_s[w, k1] += 1
            nkv_s[k1, n] += 1
            nk_s[k1] += 1
            if c >= 0:
                cmk[c, k1] += 1
            z[t] = k1
        if a0 < 0:
            continue
        S = cand_offsets[w + 1] - cand_offsets[w]
        best_a = -1
        best_score = -np.inf
        for a in range(S):
            ca = cand_targets[cand_offsets[w] + a]
            if ca == c:
                other_m = cm[ca] - nm_s[w]
            else:
                other_m = cm[ca]
            score = -nm_s[w] * np.log(nm_t[ca] + kalpha + other_m)
            for k in range(K):
                m = nmk_s[w, k]
                if m > 0:
                    other_mk = cmk[ca, k] - m if ca == c else cmk[ca, k]
                    score += m * np.log(nmk_t[ca, k] + alpha + other_mk)
            if score > best_score:
                best_score = score
                best_a = a
        if best_a != a0:
            c1 = cand_targets[cand_offsets[w] + best_a]
            for k in range(K):
                cmk[c, k] -= nmk_s[w, k]
                cmk[c1, k] += nmk_s[w, k]
            cm[c] -= nm_s[w]
            cm[c1] += nm_s[w]
            sel_word[w] = np.int32(best_a)
    return cursor


@njit(cache=True)
def sweep_source_prob(tokens, offsets, z, sel_token, cand_offsets, cand_targets,
                      nmk_s, nkv_s, nk_s, nmk_t, nm_t, cmk, cm, nms,
                      alpha, beta, alpha_psi, u, cursor, ws):
    """Source pass with per-token selection.

    For a dictionary token currently citing c, the topic weight is
        (nmk_t[c,k] + cmk[c,k] + alpha) * (nkv_s[k,n] + beta) / (nk_s[k] + V*beta)
    and the follow-up selection weight for candidate c' at the new topic k is
        (nmk_t[c',k] + cmk[c',k] + alpha) / (nm_t[c'] + cm[c'] + K*alpha)
        * (nms[w,c'] + alpha_psi)
    with the token excluded from cmk/cm/nms throughout.  ``ws`` is a
    scratch buffer of length >= max candidate-list size.
    """
    n_words = offsets.shape[0] - 1
    K = nmk_s.shape[1]
    kalpha = K * alpha
    vbeta = nkv_s.shape[1] * beta
    wk = np.empty(K, np.float64)
    for w in range(n_words):
        co = cand_offsets[w]
        S = cand_offsets[w + 1] - co
        for t in range(offsets[w], offsets[w + 1]):
            n = tokens[t]
            k0 = z[t]
            nmk_s[w, k0] -= 1
            nkv_s[k0, n] -= 1
            nk_s[k0] -= 1
            if S > 0:
                a0 = sel_token[t]
                c0 = cand_targets[co + a0]
                cmk[c0, k0] -= 1
                total = 0.0
                for k in range(K):
                    total += (nmk_t[c0, k] + cmk[c0, k] + alpha) * (nkv_s[k, n] + beta) / (nk_s[k] + vbeta)
                    wk[k] = total
                r = u[cursor] * total
                cursor += 1
                k1 = 0
                while k1 < K - 1 and wk[k1] <= r:
                    k1 += 1
                nmk_s[w, k1] += 1
                nkv_s[k1, n] += 1
                nk_s[k1] += 1
                z[t] = k1
                # selection update at the fresh topic; remove the token's
                # remaining contributions first
                nms[co + a0] -= 1
                cm[c0] -= 1
                stotal = 0.0
                for a in range(S):
                    ca = cand_targets[co + a]
                    stotal += ((nmk_t[ca, k1] + cmk[ca, k1] + alpha) / (nm_t[ca] + cm[ca] + kalpha)
                               * (nms[co + a] + alpha_psi))
                    ws[a] = stotal
                r = u[cursor] * stotal
                cursor += 1
                a1 = 0
                while a1 < S - 1 and ws[a1] <= r:
                    a1 += 1
                c1 = cand_targets[co + a1]
                sel_token[t] = np.int32(a1)
                nms[co + a1] += 1
                cmk[c1, k1] += 1
                cm[c1] += 1
            else:
                total = 0.0
                for k in range(K):
                    total += (nmk_s[w, k] + alpha) * (nkv_s[k, n] + beta) / (nk_s[k] + vbeta)
                    wk[k] = total
                r = u[cursor] * total
                cursor += 1
                k1 = 0
                while k1 < K - 1 and wk[k1] <= r:
                    k1 += 1
                nmk_s[w, k1] += 1
                nkv_s[k1, n] += 1
                nk_s[k1] += 1
                z[t] = k1
    return cursor
