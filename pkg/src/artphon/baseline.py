"""Phoneme-wise mean-contour synthesizer: the simplest articulation generator."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from artphon.corpus import (
    ARTICULATORS,
    POINTS_PER_CONTOUR,
    SILENCE,
    Corpus,
    CorpusError,
    PhoneSegment,
    UtteranceRecord,
    frame_labels,
)
from artphon.features import utterance_articulatory_features

log = logging.getLogger(__name__)


@dataclass
class MeanContourModel:
    """Per-token mean articulatory frame (flat 1000 dims) plus support counts."""

    means: dict[str, np.ndarray]
    support: dict[str, int]
    global_mean: np.ndarray

    def frame_for(self, symbol: str) -> np.ndarray:
        if symbol in self.means:
            return self.means[symbol]
        log.warning("no mean contour for token %r, using the global mean", symbol)
        return self.global_mean


def fit_mean_contours(corpus: Corpus, train_ids: Sequence[str]) -> MeanContourModel:
    """Average every training frame under its midpoint-rule label.

    Tokens never observed in training are absent from the model and fall back
    to the global mean at synthesis time.
    """
    if not train_ids:
        raise CorpusError("empty training split")
    sums: dict[str, np.ndarray] = {}
    counts: dict[str, int] = {}
    total = None
    n_total = 0
    for uid in train_ids:
        u = corpus.utterance(uid)
        feats = utterance_articulatory_features(u)
        labels = frame_labels(u, corpus.vocab)
        for symbol, row in zip(labels, feats):
            if symbol not in sums:
                sums[symbol] = np.zeros(feats.shape[1])
                counts[symbol] = 0
            sums[symbol] += row
            counts[symbol] += 1
        total = feats.sum(axis=0) if total is None else total + feats.sum(axis=0)
        n_total += feats.shape[0]
    means = {s: sums[s] / counts[s] for s in sums}
    return MeanContourModel(
        means=means, support=counts, global_mean=total / n_total
    )


def synthesize(
    model: MeanContourModel,
    annotation: Sequence[PhoneSegment],
    frame_rate: float = 50.0,
) -> np.ndarray:
    """Piecewise-constant frames (T, 1000) from an annotation.

    Frame t carries the mean contour of its midpoint-rule label; no smoothing
    or transition modeling. Length is ceil(total duration x frame_rate).
    """
    if not annotation:
        raise CorpusError("cannot synthesize from an empty annotation")
    duration = annotation[-1].end
    n_frames = math.ceil(duration * frame_rate - 1e-9)
    out = np.empty((n_frames, len(model.global_mean)))
    seg_iter = iter(annotation)
    seg = next(seg_iter, None)
    for t in range(n_frames):
        mid = (t + 0.5) / frame_rate
        while seg is not None and seg.end <= mid:
            seg = next(seg_iter, None)
        if seg is not None and seg.start <= mid < seg.end:
            out[t] = model.frame_for(seg.symbol)
        else:
            out[t] = model.means.get(SILENCE, model.global_mean)
    return out


def synthesize_utterance(
    model: MeanContourModel, u: UtteranceRecord
) -> UtteranceRecord:
    """Clone an utterance with baseline-synthesized contours, keeping timing."""
    feats = synthesize(model, u.annotation, u.frame_rate)
    n = len(ARTICULATORS)
    p = POINTS_PER_CONTOUR
    x = feats[:, : n * p].reshape(-1, n, p)
    y = feats[:, n * p :].reshape(-1, n, p)
    contours = {
        name: np.ascontiguousarray(np.stack([x[:, i], y[:, i]], axis=-1))
        for i, name in enumerate(ARTICULATORS)
    }
    return UtteranceRecord(
        id=u.id,
        contours=contours,
        annotation=list(u.annotation),
        frame_rate=u.frame_rate,
        audio=None,
        audio_rate=None,
    )


def write_mean_contours(model: MeanContourModel, path: str | Path) -> None:
    """CSV persistence: symbol, channel, position, value, support_count."""
    lines = ["symbol,channel,position,value,support_count"]
    half = len(ARTICULATORS) * POINTS_PER_CONTOUR
    for symbol in sorted(model.means):
        vec = model.means[symbol]
        count = model.support[symbol]
        for i, v in enumerate(vec):
            channel, position = divmod(i, half)
            lines.append(f"{symbol},{channel},{position},{v!r},{count}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_mean_contours(path: str | Path) -> MeanContourModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "symbol,channel,position,value,support_count":
        raise ValueError(f"{path}: bad mean-contours header")
    half = len(ARTICULATORS) * POINTS_PER_CONTOUR
    staging: dict[str, np.ndarray] = {}
    support: dict[str, int] = {}
    for line in lines[1:]:
        if not line:
            continue
        symbol, channel, position, value, count = line.split(",")
        vec = staging.setdefault(symbol, np.zeros(2 * half))
        vec[int(channel) * half + int(position)] = float(value)
        support[symbol] = int(count)
    total = sum(support.values())
    weighted = sum(staging[s] * support[s] for s in staging)
    return MeanContourModel(
        means=staging, support=support, global_mean=weighted / total
    )
