"""Hot numeric kernels: SVM dual coordinate descent and embedding SGD.

Every function here is nopython-compatible and carries ``@maybe_jit``:
numba-compiled by default, plain Python when DIALECTID_PURE_NUMPY is set
(see _select). Randomness comes from an inline xorshift32 generator so
that fixed seeds reproduce bit-identically on both backends; numba's own
np.random state is process-local and cannot be shared with the fallback.
"""

from __future__ import annotations

import math

import numpy as np

from ._select import maybe_jit

_MASK32 = 0xFFFFFFFF


@maybe_jit
def _seed_state(seed):
    state = seed & _MASK32
    if state == 0:
        state = 0x9E3779B9
    return state


@maybe_jit
def _next_state(state):
    # xorshift32 over the low 32 bits of an int64
    state ^= (state << 13) & _MASK32
    state ^= state >> 17
    state ^= (state << 5) & _MASK32
    return state


@maybe_jit
def _shuffle(order, state):
    # Fisher-Yates, in place
    for i in range(order.shape[0] - 1, 0, -1):
        state = _next_state(state)
        j = state % (i + 1)
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp
    return state


@maybe_jit
def dual_cd(indptr, indices, data, targets, n_features, C, tol, max_sweeps, seed):
    """L1-hinge dual coordinate descent with box constraints 0 <= a_i <= C.

    Rows are CSR (int64 indptr/indices, float64 data) and must already
    carry the constant bias coordinate. Returns (w, alpha, objectives,
    final_violation) where objectives holds the dual objective after each
    completed sweep, tracked incrementally so the trace is exactly
    non-decreasing (each exact coordinate step increases the dual by
    -g*delta - q*delta^2/2 >= 0).
    """
    n = indptr.shape[0] - 1
    w = np.zeros(n_features)
    alpha = np.zeros(n)
    qii = np.zeros(n)
    for i in range(n):
        s = 0.0
        for j in range(indptr[i], indptr[i + 1]):
            s += data[j] * data[j]
        qii[i] = s
    order = np.arange(n)
    objectives = np.zeros(max_sweeps)
    obj = 0.0
    state = _seed_state(seed)
    sweeps = 0
    final_viol = 0.0
    for sweep in range(max_sweeps):
        state = _shuffle(order, state)
        max_viol = 0.0
        for k in range(n):
            i = order[k]
            y = targets[i]
            g = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                g += w[indices[j]] * data[j]
            g = y * g - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = g if g < 0.0 else 0.0
            elif a >= C:
                pg = g if g > 0.0 else 0.0
            else:
                pg = g
            apg = -pg if pg < 0.0 else pg
            if apg > max_viol:
                max_viol = apg
            if pg != 0.0:
                if qii[i] > 0.0:
                    na = a - g / qii[i]
                else:
                    # objective is linear in this coordinate
                    na = C if g < 0.0 else 0.0
                if na < 0.0:
                    na = 0.0
                elif na > C:
                    na = C
                delta = na - a
                if delta != 0.0:
                    alpha[i] = na
                    dy = delta * y
                    for j in range(indptr[i], indptr[i + 1]):
                        w[indices[j]] += dy * data[j]
                    inc = -g * delta - 0.5 * qii[i] * delta * delta
                    if inc > 0.0:
                        obj += inc
        objectives[sweep] = obj
        sweeps = sweep + 1
        final_viol = max_viol
        if max_viol < tol:
            break
    return w, alpha, objectives[:sweeps], final_viol


@maybe_jit
def csr_decision(indptr, indices, data, weights, bias):
    """Per-class decision values w_c . x + b_c for CSR rows (no bias column)."""
    n = indptr.shape[0] - 1
    n_classes = weights.shape[0]
    out = np.zeros((n, n_classes))
    for i in range(n):
        for c in range(n_classes):
            s = bias[c]
            for j in range(indptr[i], indptr[i + 1]):
                s += weights[c, indices[j]] * data[j]
            out[i, c] = s
    return out


@maybe_jit
def skipgram_train(stream, text_offsets, sub_flat, sub_offsets,
                   input_vecs, output_vecs, neg_table,
                   window, negatives, lr0, epochs, seed):
    """Skipgram with negative sampling over a flattened token stream.

    For each center position the window half-width is drawn uniformly
    from [1, window]; each (center, context) pair does one SGD step on
    the binary logistic loss with `negatives` table draws. The hidden
    vector is the mean of the center word's row and its subword rows,
    and input-row updates carry the 1/m chain-rule factor of that mean.
    The learning rate decays linearly to 0 over epochs * len(stream)
    scheduled positions. Returns (per-epoch loss sums, pair counts).
    """
    dim = input_vecs.shape[1]
    n_pos = stream.shape[0]
    total = epochs * n_pos
    table_size = neg_table.shape[0]
    state = _seed_state(seed)
    hidden = np.zeros(dim)
    grad = np.zeros(dim)
    epoch_loss = np.zeros(epochs)
    epoch_pairs = np.zeros(epochs, np.int64)
    processed = 0
    for ep in range(epochs):
        loss_sum = 0.0
        pairs = 0
        for s in range(text_offsets.shape[0] - 1):
            t_start = text_offsets[s]
            t_end = text_offsets[s + 1]
            for t in range(t_start, t_end):
                lr = lr0 * (1.0 - processed / total)
                processed += 1
                w_id = stream[t]
                s_lo = sub_offsets[w_id]
                s_hi = sub_offsets[w_id + 1]
                m = 1 + (s_hi - s_lo)
                inv_m = 1.0 / m
                state = _next_state(state)
                b = 1 + state % window
                c_lo = t - b
                if c_lo < t_start:
                    c_lo = t_start
                c_hi = t + b + 1
                if c_hi > t_end:
                    c_hi = t_end
                for c in range(c_lo, c_hi):
                    if c == t:
                        continue
                    target = stream[c]
                    # hidden recomputed per pair: rows move between pairs
                    for d in range(dim):
                        hidden[d] = input_vecs[w_id, d]
                    for k in range(s_lo, s_hi):
                        r = sub_flat[k]
                        for d in range(dim):
                            hidden[d] += input_vecs[r, d]
                    for d in range(dim):
                        hidden[d] *= inv_m
                    for d in range(dim):
                        grad[d] = 0.0
                    for k in range(negatives + 1):
                        if k == 0:
                            out_row = target
                            label = 1.0
                        else:
                            out_row = target
                            for _ in range(16):
                                state = _next_state(state)
                                cand = neg_table[state % table_size]
                                if cand != target:
                                    out_row = cand
                                    break
                            label = 0.0
                        f = 0.0
                        for d in range(dim):
                            f += output_vecs[out_row, d] * hidden[d]
                        if f > 30.0:
                            f = 30.0
                        elif f < -30.0:
                            f = -30.0
                        e = math.exp(-f)
                        p = 1.0 / (1.0 + e)
                        if label > 0.5:
                            loss_sum += -math.log(p)
                        else:
                            loss_sum += -math.log(e / (1.0 + e))
                        g = lr * (label - p)
                        for d in range(dim):
                            grad[d] += g * output_vecs[out_row, d]
                        for d in range(dim):
                            output_vecs[out_row, d] += g * hidden[d]
                    for d in range(dim):
                        grad[d] *= inv_m
                    for d in range(dim):
                        input_vecs[w_id, d] += grad[d]
                    for k in range(s_lo, s_hi):
                        r = sub_flat[k]
                        for d in range(dim):
                            input_vecs[r, d] += grad[d]
                    pairs += 1
        epoch_loss[ep] = loss_sum
        epoch_pairs[ep] = pairs
    return epoch_loss, epoch_pairs


@maybe_jit
def supervised_train(doc_rows, doc_offsets, labels, n_labels,
                     input_vecs, label_matrix, lr0, epochs):
    """One-vs-all logistic SGD sharing the embedding input layer.

    Each document's hidden vector is the flat mean of all its input rows
    (word rows plus subword rows of every token). Every label row takes
    an independent binary logistic step per document; input rows receive
    the summed gradient with the 1/m mean factor. Deterministic: no
    sampling, documents visited in order. Returns per-epoch mean losses.
    """
    dim = input_vecs.shape[1]
    n_docs = doc_offsets.shape[0] - 1
    total = epochs * n_docs
    hidden = np.zeros(dim)
    grad = np.zeros(dim)
    epoch_loss = np.zeros(epochs)
    processed = 0
    for ep in range(epochs):
        loss_sum = 0.0
        counted = 0
        for i in range(n_docs):
            lr = lr0 * (1.0 - processed / total)
            processed += 1
            lo = doc_offsets[i]
            hi = doc_offsets[i + 1]
            m = hi - lo
            if m == 0:
                continue
            inv_m = 1.0 / m
            for d in range(dim):
                hidden[d] = 0.0
            for k in range(lo, hi):
                r = doc_rows[k]
                for d in range(dim):
                    hidden[d] += input_vecs[r, d]
            for d in range(dim):
                hidden[d] *= inv_m
            for d in range(dim):
                grad[d] = 0.0
            y_doc = labels[i]
            for l in range(n_labels):
                f = 0.0
                for d in range(dim):
                    f += label_matrix[l, d] * hidden[d]
                if f > 30.0:
                    f = 30.0
                elif f < -30.0:
                    f = -30.0
                e = math.exp(-f)
                p = 1.0 / (1.0 + e)
                if l == y_doc:
                    label = 1.0
                    loss_sum += -math.log(p)
                else:
                    label = 0.0
                    loss_sum += -math.log(e / (1.0 + e))
                g = lr * (label - p)
                for d in range(dim):
                    grad[d] += g * label_matrix[l, d]
                for d in range(dim):
                    label_matrix[l, d] += g * hidden[d]
            for d in range(dim):
                grad[d] *= inv_m
            for k in range(lo, hi):
                r = doc_rows[k]
                for d in range(dim):
                    input_vecs[r, d] += grad[d]
            counted += 1
        if counted > 0:
            epoch_loss[ep] = loss_sum / counted
    return epoch_loss
