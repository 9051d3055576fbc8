"""CTC loss via log-space forward-backward, exact logit gradients, and greedy decoding."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from artphon.vocabulary import Vocabulary

NEG_INF = -np.inf


class InfeasibleTargetError(ValueError):
    """Target cannot be emitted in the available frames."""


def log_softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise log-softmax, stabilized by subtracting the row max."""
    logits = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(logits)):
        raise ValueError("non-finite logits")
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def min_frames_for(target: Sequence[int]) -> int:
    """Smallest frame count that can emit the target: one frame per token plus
    a separating blank between adjacent repeats."""
    repeats = sum(1 for a, b in zip(target, target[1:]) if a == b)
    return len(target) + repeats


def extended_target(target: Sequence[int], blank: int) -> np.ndarray:
    """Target interleaved with blanks: [b, y1, b, y2, ..., b], length 2L+1."""
    ext = np.full(2 * len(target) + 1, blank, dtype=np.int64)
    ext[1::2] = target
    return ext


def ctc_loss(
    log_probs: np.ndarray, target: Sequence[int], blank: int = 0
) -> tuple[float, np.ndarray]:
    """Negative log-likelihood of the target plus the exact logit gradient.

    log_probs is the T x V log-softmax output. The returned gradient is with
    respect to the pre-softmax logits that produced it, in the classic
    softmax-minus-expected-path-occupancy form. All accumulation stays in log
    space with pairwise log-sum-exp.
    """
    lp = np.asarray(log_probs, dtype=np.float64)
    T, V = lp.shape
    target = list(target)
    if any(t == blank for t in target):
        raise ValueError("target must not contain the blank index")
    if any(t < 0 or t >= V for t in target):
        raise ValueError("target index out of range")
    need = min_frames_for(target)
    if T < need:
        raise InfeasibleTargetError(
            f"target of length {len(target)} needs at least {need} frames, got {T}"
        )

    ext = extended_target(target, blank)
    S = len(ext)
    # skip transition s-2 -> s is allowed only onto a non-blank that differs
    # from the token two slots back
    skip_ok = np.zeros(S, dtype=bool)
    if S > 2:
        skip_ok[2:] = (ext[2:] != blank) & (ext[2:] != ext[:-2])

    emit = lp[:, ext]  # T x S

    alpha = np.full((T, S), NEG_INF)
    alpha[0, 0] = emit[0, 0]
    if S > 1:
        alpha[0, 1] = emit[0, 1]
    for t in range(1, T):
        prev = alpha[t - 1]
        acc = prev.copy()
        acc[1:] = np.logaddexp(acc[1:], prev[:-1])
        acc[2:] = np.where(skip_ok[2:], np.logaddexp(acc[2:], prev[:-2]), acc[2:])
        alpha[t] = acc + emit[t]

    if S > 1:
        log_z = np.logaddexp(alpha[T - 1, S - 1], alpha[T - 1, S - 2])
    else:
        log_z = alpha[T - 1, 0]

    beta = np.full((T, S), NEG_INF)
    beta[T - 1, S - 1] = emit[T - 1, S - 1]
    if S > 1:
        beta[T - 1, S - 2] = emit[T - 1, S - 2]
    for t in range(T - 2, -1, -1):
        nxt = beta[t + 1]
        acc = nxt.copy()
        acc[:-1] = np.logaddexp(acc[:-1], nxt[1:])
        acc[:-2] = np.where(skip_ok[2:], np.logaddexp(acc[:-2], nxt[2:]), acc[:-2])
        beta[t] = acc + emit[t]

    # occupancy[t, s]: posterior probability of being in extended slot s at
    # frame t; emission at t is counted by both alpha and beta, remove once
    log_occ = alpha + beta - emit - log_z
    occ = np.exp(log_occ)
    occ_label = np.zeros((T, V))
    np.add.at(occ_label.T, ext, occ.T)

    grad = np.exp(lp) - occ_label
    return float(-log_z), grad


def greedy_decode(log_probs: np.ndarray, vocab: Vocabulary) -> list[str]:
    """Best-path decoding: per-frame argmax (ties to the lowest index),
    collapse consecutive repeats, then drop blanks."""
    path = np.argmax(np.asarray(log_probs), axis=-1)
    blank = vocab.blank_index
    out: list[str] = []
    prev = -1
    for idx in path:
        if idx != prev and idx != blank:
            out.append(vocab.tokens[idx].symbol)
        prev = idx
    return out
