"""Articulatory feature assembly, mel spectrograms, voicing tracks, normalization."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from artphon.corpus import ARTICULATORS, POINTS_PER_CONTOUR, UtteranceRecord, frame_labels
from artphon.vocabulary import Vocabulary

ARTICULATORY_DIM = 2 * len(ARTICULATORS) * POINTS_PER_CONTOUR  # 1000
MEL_BANDS = 80

# voicing one-hot layout
VOICED, UNVOICED, NON_PHONETIC = 0, 1, 2


def assemble_articulatory_frame(contours: dict[str, np.ndarray]) -> np.ndarray:
    """Concatenate 10 named contours into the 2 x 500 frame.

    Channel 0 holds all x-coordinates, channel 1 all y-coordinates, articulators
    in the fixed order (arytenoid cartilage first, vocal folds last). Input map
    order is irrelevant; the upper incisor must not be passed in.
    """
    extra = sorted(set(contours) - set(ARTICULATORS))
    if extra:
        raise ValueError(f"unexpected articulators: {extra}")
    missing = [a for a in ARTICULATORS if a not in contours]
    if missing:
        raise ValueError(f"missing articulators: {missing}")
    out = np.empty((2, len(ARTICULATORS) * POINTS_PER_CONTOUR))
    for i, name in enumerate(ARTICULATORS):
        arr = np.asarray(contours[name], dtype=np.float64)
        if arr.shape != (POINTS_PER_CONTOUR, 2):
            raise ValueError(
                f"{name}: expected ({POINTS_PER_CONTOUR}, 2) points, got {arr.shape}"
            )
        out[0, i * POINTS_PER_CONTOUR : (i + 1) * POINTS_PER_CONTOUR] = arr[:, 0]
        out[1, i * POINTS_PER_CONTOUR : (i + 1) * POINTS_PER_CONTOUR] = arr[:, 1]
    return out


def split_articulatory_frame(frame: np.ndarray) -> dict[str, np.ndarray]:
    """Inverse of assemble: recover each articulator's (50, 2) points."""
    out = {}
    for i, name in enumerate(ARTICULATORS):
        sl = slice(i * POINTS_PER_CONTOUR, (i + 1) * POINTS_PER_CONTOUR)
        out[name] = np.stack([frame[0, sl], frame[1, sl]], axis=1)
    return out


def utterance_articulatory_features(u: UtteranceRecord) -> np.ndarray:
    """All frames of an utterance as (T, 1000): x-channel flat, then y-channel."""
    stacked = np.stack([u.contours[a] for a in ARTICULATORS], axis=1)  # (T, 10, 50, 2)
    T = stacked.shape[0]
    x = stacked[..., 0].reshape(T, -1)
    y = stacked[..., 1].reshape(T, -1)
    return np.concatenate([x, y], axis=1)


@dataclass
class MelConfig:
    bands: int = MEL_BANDS
    window_seconds: float = 0.025
    output_rate: float = 50.0
    n_fft: int = 1024
    log_floor: float = 1e-10


def _hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def _mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(bands: int, n_fft: int, sample_rate: float) -> np.ndarray:
    """Triangular filters on the mel scale, (bands, n_fft//2 + 1)."""
    nyquist = sample_rate / 2.0
    mel_points = np.linspace(0.0, _hz_to_mel(nyquist), bands + 2)
    hz_points = _mel_to_hz(mel_points)
    fft_freqs = np.arange(n_fft // 2 + 1) * sample_rate / n_fft
    fb = np.zeros((bands, len(fft_freqs)))
    for b in range(bands):
        lo, center, hi = hz_points[b], hz_points[b + 1], hz_points[b + 2]
        rising = (fft_freqs - lo) / (center - lo)
        falling = (hi - fft_freqs) / (hi - center)
        fb[b] = np.maximum(0.0, np.minimum(rising, falling))
    return fb


def mel_band_centers_hz(bands: int, sample_rate: float) -> np.ndarray:
    mel_points = np.linspace(0.0, _hz_to_mel(sample_rate / 2.0), bands + 2)
    return _mel_to_hz(mel_points[1:-1])


def mel_spectrogram(
    audio: np.ndarray, sample_rate: int, cfg: Optional[MelConfig] = None
) -> np.ndarray:
    """Log mel filterbank energies, (floor(samples/hop), bands).

    Frames are centered on multiples of the hop (hop = sample_rate /
    output_rate, which must be integral) with zero padding at the edges, so
    appending trailing silence leaves existing frames untouched.
    """
    cfg = cfg or MelConfig()
    audio = np.asarray(audio, dtype=np.float64)
    if audio.ndim != 1 or audio.size == 0:
        raise ValueError("audio must be a non-empty mono sample array")
    hop_f = sample_rate / cfg.output_rate
    if not float(hop_f).is_integer():
        raise ValueError(
            f"sample rate {sample_rate} not divisible by output rate {cfg.output_rate}"
        )
    hop = int(hop_f)
    win = int(round(cfg.window_seconds * sample_rate))
    if win > cfg.n_fft:
        raise ValueError(f"window of {win} samples exceeds n_fft {cfg.n_fft}")
    n_frames = audio.size // hop
    if n_frames == 0:
        raise ValueError("audio shorter than one hop")

    half = win // 2
    padded = np.concatenate([np.zeros(half), audio, np.zeros(win)])
    window = np.hanning(win)
    frames = np.stack(
        [padded[t * hop : t * hop + win] * window for t in range(n_frames)]
    )
    spectrum = np.abs(np.fft.rfft(frames, n=cfg.n_fft, axis=1))
    fb = mel_filterbank(cfg.bands, cfg.n_fft, sample_rate)
    energies = spectrum @ fb.T
    return np.log(np.maximum(energies, cfg.log_floor))


def voicing_track(u: UtteranceRecord, vocab: Vocabulary) -> np.ndarray:
    """Per-frame one-hot (T, 3) voicing category from the annotation.

    Columns: voiced, unvoiced, non-phonetic. Phonetic frames follow the
    token's voicing flag; silence and other special tokens are non-phonetic.
    """
    labels = frame_labels(u, vocab)
    track = np.zeros((len(labels), 3))
    for t, symbol in enumerate(labels):
        token = vocab.token(symbol)
        if not token.is_phonetic or token.voiced is None:
            track[t, NON_PHONETIC] = 1.0
        elif token.voiced:
            track[t, VOICED] = 1.0
        else:
            track[t, UNVOICED] = 1.0
    return track


@dataclass
class NormStats:
    """Per-feature standardization parameters, fit on the training split only."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, features: np.ndarray) -> np.ndarray:
        return (features - self.mean) / self.std


def fit_norm_stats(feature_arrays: list[np.ndarray]) -> NormStats:
    stacked = np.concatenate(feature_arrays, axis=0)
    mean = stacked.mean(axis=0)
    std = stacked.std(axis=0)
    std[std < 1e-12] = 1.0  # constant features pass through unscaled
    return NormStats(mean=mean, std=std)


def write_norm_stats(stats: NormStats, path: str | Path) -> None:
    lines = ["feature_index,mean,std"]
    for i, (m, s) in enumerate(zip(stats.mean, stats.std)):
        lines.append(f"{i},{m!r},{s!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_norm_stats(path: str | Path) -> NormStats:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "feature_index,mean,std":
        raise ValueError(f"{path}: bad norm stats header")
    means, stds = [], []
    for line in lines[1:]:
        if not line:
            continue
        _, m, s = line.split(",")
        means.append(float(m))
        stds.append(float(s))
    return NormStats(mean=np.array(means), std=np.array(stds))
