"""Contour corpus loading, validation, frame labeling, and the synthetic generator.

On-disk layout:

    corpus/
      meta.toml                      key=value text (frame_rate=50, ...)
      vocab.tsv, classes.tsv         optional token inventory sidecars
      splits/{train,validation,test}.txt
      utterances/<id>/contours.csv   frame,articulator,point_index,x,y
      utterances/<id>/annotation.tsv start,end,symbol
      utterances/<id>/audio.f64      optional raw float64 LE mono PCM
"""

from __future__ import annotations

import math
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from artphon.kvformat import parse_bool, read_kv_file, write_kv_file
from artphon.vocabulary import (
    DEFAULT_CLASS_TABLE,
    PhoneticClassMap,
    Vocabulary,
    VocabularyError,
    build_class_map,
    build_vocabulary,
    default_class_map,
    default_french_vocabulary,
    read_class_file,
    read_vocab_file,
    write_class_file,
    write_vocab_file,
)

# Feature articulators in fixed order; the upper incisor anchors the
# coordinate system and may appear in files but never in features.
ARTICULATORS = (
    "arytenoid_cartilage",
    "epiglottis",
    "lower_incisor",
    "lower_lip",
    "pharynx",
    "soft_palate",
    "thyroid_cartilage",
    "tongue",
    "upper_lip",
    "vocal_folds",
)
REFERENCE_ARTICULATOR = "upper_incisor"
POINTS_PER_CONTOUR = 50
SPLIT_NAMES = ("train", "validation", "test")


class CorpusError(ValueError):
    """Raised for malformed corpora, annotations, or generator configs."""


@dataclass(frozen=True)
class PhoneSegment:
    symbol: str
    start: float
    end: float

    def __post_init__(self):
        if not self.end > self.start:
            raise CorpusError(
                f"segment {self.symbol!r}: end {self.end} must exceed start {self.start}"
            )


@dataclass
class UtteranceRecord:
    id: str
    contours: dict[str, np.ndarray]  # articulator -> (T, 50, 2)
    annotation: list[PhoneSegment]
    frame_rate: float = 50.0
    audio: Optional[np.ndarray] = None
    audio_rate: Optional[int] = None

    @property
    def n_frames(self) -> int:
        return self.contours[ARTICULATORS[0]].shape[0]

    @property
    def duration(self) -> float:
        return self.n_frames / self.frame_rate


@dataclass(frozen=True)
class CorpusSplit:
    train: tuple[str, ...]
    validation: tuple[str, ...]
    test: tuple[str, ...]

    def __post_init__(self):
        lists = [self.train, self.validation, self.test]
        for a in range(3):
            for b in range(a + 1, 3):
                overlap = set(lists[a]) & set(lists[b])
                if overlap:
                    raise CorpusError(
                        f"splits {SPLIT_NAMES[a]} and {SPLIT_NAMES[b]} overlap: "
                        f"{sorted(overlap)}"
                    )

    def ids(self, name: str) -> tuple[str, ...]:
        if name not in SPLIT_NAMES:
            raise CorpusError(f"unknown split {name!r}")
        return getattr(self, name)


class Corpus:
    """Utterance collection with lazy, cached per-id loading.

    The handle is safe for concurrent read-only use once the utterances of
    interest have been loaded (loading mutates the internal cache).
    """

    def __init__(
        self,
        vocab: Vocabulary,
        class_map: PhoneticClassMap,
        split: CorpusSplit,
        utterance_ids: list[str],
        loader: Callable[[str], UtteranceRecord],
        frame_rate: float = 50.0,
        audio_rate: Optional[int] = None,
        root: Optional[Path] = None,
    ):
        self.vocab = vocab
        self.class_map = class_map
        self.split = split
        self.utterance_ids = list(utterance_ids)
        self.frame_rate = frame_rate
        self.audio_rate = audio_rate
        self.root = root
        self._loader = loader
        self._cache: dict[str, UtteranceRecord] = {}

    def __len__(self) -> int:
        return len(self.utterance_ids)

    def utterance(self, uid: str) -> UtteranceRecord:
        if uid not in self._cache:
            if uid not in self.utterance_ids:
                raise CorpusError(f"unknown utterance id {uid!r}")
            self._cache[uid] = self._loader(uid)
        return self._cache[uid]

    def utterances(self, ids: Iterable[str]) -> list[UtteranceRecord]:
        return [self.utterance(uid) for uid in ids]


def validate_utterance(u: UtteranceRecord, vocab: Vocabulary) -> list[str]:
    """Invariant checks for one utterance; returns findings instead of raising."""
    findings = []
    missing = [a for a in ARTICULATORS if a not in u.contours]
    if missing:
        findings.append(f"{u.id}: missing articulators {missing}")
        return findings
    n_frames = None
    for name, arr in u.contours.items():
        if arr.ndim != 3 or arr.shape[1] != POINTS_PER_CONTOUR or arr.shape[2] != 2:
            findings.append(
                f"{u.id}: articulator {name!r} has shape {arr.shape}, "
                f"expected (frames, {POINTS_PER_CONTOUR}, 2)"
            )
            return findings
        if n_frames is None:
            n_frames = arr.shape[0]
        elif arr.shape[0] != n_frames:
            findings.append(
                f"{u.id}: articulator {name!r} has {arr.shape[0]} frames, "
                f"expected {n_frames}"
            )
    prev_end = None
    for k, seg in enumerate(u.annotation):
        if seg.symbol not in vocab:
            findings.append(f"{u.id}: segment {k}: unknown token symbol {seg.symbol!r}")
        if prev_end is not None and seg.start < prev_end - 1e-9:
            findings.append(
                f"{u.id}: segment {k} ({seg.symbol!r}) starts at {seg.start} "
                f"before previous segment ends at {prev_end}"
            )
        prev_end = seg.end
    if u.annotation and n_frames:
        slack = 1.0 / u.frame_rate
        span_start = u.annotation[0].start
        span_end = u.annotation[-1].end
        if span_start > slack or abs(span_end - u.duration) > slack:
            findings.append(
                f"{u.id}: annotation span [{span_start}, {span_end}] does not cover "
                f"[0, {u.duration}] within one frame"
            )
    return findings


def frame_labels(u: UtteranceRecord, vocab: Vocabulary) -> list[str]:
    """Per-frame token symbols by the frame-midpoint rule.

    Frame t takes the symbol of the segment containing (t + 0.5) / frame_rate;
    frames outside every segment take the silence token.
    """
    silence = _silence_symbol(vocab)
    labels = []
    seg_iter = iter(u.annotation)
    seg = next(seg_iter, None)
    for t in range(u.n_frames):
        mid = (t + 0.5) / u.frame_rate
        while seg is not None and seg.end <= mid:
            seg = next(seg_iter, None)
        if seg is not None and seg.start <= mid < seg.end:
            labels.append(seg.symbol)
        else:
            labels.append(silence)
    return labels


def _silence_symbol(vocab: Vocabulary) -> str:
    for t in vocab.tokens:
        if t.kind == "silence":
            return t.symbol
    raise VocabularyError("vocabulary has no silence token")


# ---------------------------------------------------------------------------
# Disk reading


def load_corpus(
    root: str | Path,
    vocab: Optional[Vocabulary] = None,
    class_map: Optional[PhoneticClassMap] = None,
) -> Corpus:
    """Open a corpus directory; utterances load lazily and are cached.

    When no vocabulary is supplied, a `vocab.tsv` sidecar in the corpus root is
    used if present, falling back to the built-in French inventory. Same for
    `classes.tsv` and the built-in place-of-articulation table.
    """
    root = Path(root)
    meta_path = root / "meta.toml"
    if not meta_path.is_file():
        raise CorpusError(f"not a corpus directory (missing {meta_path})")
    meta = read_kv_file(meta_path)
    frame_rate = float(meta.get("frame_rate", 50.0))
    audio_rate = int(meta["audio_rate"]) if "audio_rate" in meta else None

    if vocab is None:
        sidecar = root / "vocab.tsv"
        vocab = read_vocab_file(sidecar) if sidecar.is_file() else default_french_vocabulary()
    if class_map is None:
        sidecar = root / "classes.tsv"
        if sidecar.is_file():
            class_map = read_class_file(sidecar, vocab)
        else:
            class_map = default_class_map(vocab)

    utt_root = root / "utterances"
    if not utt_root.is_dir():
        raise CorpusError(f"missing utterances directory under {root}")
    ids = sorted(p.name for p in utt_root.iterdir() if p.is_dir())

    split_ids = {}
    for name in SPLIT_NAMES:
        path = root / "splits" / f"{name}.txt"
        if not path.is_file():
            raise CorpusError(f"missing split file {path}")
        split_ids[name] = tuple(
            line.strip() for line in path.read_text().splitlines() if line.strip()
        )
        unknown = [uid for uid in split_ids[name] if uid not in set(ids)]
        if unknown:
            raise CorpusError(f"split {name!r} lists unknown utterances {unknown}")
    split = CorpusSplit(**split_ids)

    def loader(uid: str) -> UtteranceRecord:
        return _load_utterance(utt_root / uid, uid, vocab, frame_rate, audio_rate)

    return Corpus(
        vocab=vocab,
        class_map=class_map,
        split=split,
        utterance_ids=ids,
        loader=loader,
        frame_rate=frame_rate,
        audio_rate=audio_rate,
        root=root,
    )


def _load_utterance(
    utt_dir: Path,
    uid: str,
    vocab: Vocabulary,
    frame_rate: float,
    audio_rate: Optional[int],
) -> UtteranceRecord:
    contours = _read_contours(utt_dir / "contours.csv", uid)
    annotation = _read_annotation(utt_dir / "annotation.tsv", uid)
    audio = None
    audio_path = utt_dir / "audio.f64"
    if audio_path.is_file():
        audio = np.fromfile(audio_path, dtype="<f8")
    u = UtteranceRecord(
        id=uid,
        contours=contours,
        annotation=annotation,
        frame_rate=frame_rate,
        audio=audio,
        audio_rate=audio_rate,
    )
    findings = validate_utterance(u, vocab)
    if findings:
        raise CorpusError("; ".join(findings))
    return u


def _read_contours(path: Path, uid: str) -> dict[str, np.ndarray]:
    if not path.is_file():
        raise CorpusError(f"{uid}: missing {path.name}")
    lines = path.read_text().splitlines()
    if not lines or lines[0] != "frame,articulator,point_index,x,y":
        raise CorpusError(f"{uid}: bad contours.csv header")
    allowed = set(ARTICULATORS) | {REFERENCE_ARTICULATOR}
    # per articulator: {frame: row of 50 points}
    staging: dict[str, dict[int, np.ndarray]] = {}
    filled: dict[str, dict[int, int]] = {}
    max_frame = -1
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        try:
            frame_s, art, point_s, x_s, y_s = line.split(",")
            frame, point = int(frame_s), int(point_s)
            x, y = float(x_s), float(y_s)
        except ValueError:
            raise CorpusError(f"{uid}: contours.csv line {lineno}: malformed row") from None
        if art not in allowed:
            raise CorpusError(
                f"{uid}: contours.csv line {lineno}: unknown articulator {art!r}"
            )
        if not 0 <= point < POINTS_PER_CONTOUR:
            raise CorpusError(
                f"{uid}: contours.csv line {lineno}: point index {point} out of range"
            )
        per_art = staging.setdefault(art, {})
        row = per_art.get(frame)
        if row is None:
            row = np.full((POINTS_PER_CONTOUR, 2), np.nan)
            per_art[frame] = row
            filled.setdefault(art, {})[frame] = 0
        if not np.isnan(row[point, 0]):
            raise CorpusError(
                f"{uid}: contours.csv line {lineno}: duplicate point "
                f"({art}, frame {frame}, point {point})"
            )
        row[point] = (x, y)
        filled[art][frame] += 1
        max_frame = max(max_frame, frame)

    n_frames = max_frame + 1
    contours: dict[str, np.ndarray] = {}
    for art in sorted(staging):
        per_art = staging[art]
        arr = np.zeros((n_frames, POINTS_PER_CONTOUR, 2))
        for frame in range(n_frames):
            if frame not in per_art:
                raise CorpusError(f"{uid}: articulator {art!r} missing frame {frame}")
            count = filled[art][frame]
            if count != POINTS_PER_CONTOUR:
                raise CorpusError(
                    f"{uid}: articulator {art!r} frame {frame} has {count} points, "
                    f"expected {POINTS_PER_CONTOUR}"
                )
            arr[frame] = per_art[frame]
        contours[art] = arr
    missing = [a for a in ARTICULATORS if a not in contours]
    if missing:
        raise CorpusError(f"{uid}: missing articulators {missing}")
    return contours


def _read_annotation(path: Path, uid: str) -> list[PhoneSegment]:
    if not path.is_file():
        raise CorpusError(f"{uid}: missing {path.name}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "start\tend\tsymbol":
        raise CorpusError(f"{uid}: bad annotation.tsv header")
    segments = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise CorpusError(f"{uid}: annotation.tsv line {lineno}: expected 3 fields")
        try:
            start, end = float(parts[0]), float(parts[1])
        except ValueError:
            raise CorpusError(f"{uid}: annotation.tsv line {lineno}: bad times") from None
        try:
            segments.append(PhoneSegment(symbol=parts[2], start=start, end=end))
        except CorpusError as exc:
            raise CorpusError(f"{uid}: annotation.tsv line {lineno}: {exc}") from None
    return segments


# ---------------------------------------------------------------------------
# Disk writing


def write_corpus(corpus: Corpus, root: str | Path, force: bool = False) -> Path:
    """Persist a corpus in the standard directory layout.

    Contour values are written with `repr` so the reader recovers them
    bit-exactly; annotation times use 6 decimals, which is lossless for times
    on the frame grid.
    """
    root = Path(root)
    if root.exists() and any(root.iterdir()):
        if not force:
            raise CorpusError(f"target {root} exists and is not empty")
        shutil.rmtree(root)
    root.mkdir(parents=True, exist_ok=True)

    meta = {"frame_rate": _format_number(corpus.frame_rate)}
    if corpus.audio_rate is not None:
        meta["audio_rate"] = str(corpus.audio_rate)
    write_kv_file(meta, root / "meta.toml")
    write_vocab_file(corpus.vocab, root / "vocab.tsv")
    write_class_file(corpus.class_map, root / "classes.tsv")

    splits_dir = root / "splits"
    splits_dir.mkdir(exist_ok=True)
    for name in SPLIT_NAMES:
        ids = corpus.split.ids(name)
        (splits_dir / f"{name}.txt").write_text(
            "".join(f"{uid}\n" for uid in ids), encoding="utf-8"
        )

    for uid in corpus.utterance_ids:
        u = corpus.utterance(uid)
        utt_dir = root / "utterances" / uid
        utt_dir.mkdir(parents=True, exist_ok=True)
        _write_contours(u, utt_dir / "contours.csv")
        _write_annotation(u, utt_dir / "annotation.tsv")
        if u.audio is not None:
            u.audio.astype("<f8").tofile(utt_dir / "audio.f64")
    return root


def _format_number(v: float) -> str:
    return repr(int(v)) if float(v).is_integer() else repr(float(v))


def _write_contours(u: UtteranceRecord, path: Path) -> None:
    lines = ["frame,articulator,point_index,x,y"]
    names = [a for a in ARTICULATORS if a in u.contours]
    names += [a for a in sorted(u.contours) if a not in ARTICULATORS]
    for t in range(u.n_frames):
        for art in names:
            arr = u.contours[art]
            for p in range(POINTS_PER_CONTOUR):
                lines.append(f"{t},{art},{p},{arr[t, p, 0]!r},{arr[t, p, 1]!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_annotation(u: UtteranceRecord, path: Path) -> None:
    lines = ["start\tend\tsymbol"]
    for seg in u.annotation:
        lines.append(f"{seg.start:.6f}\t{seg.end:.6f}\t{seg.symbol}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def validate_corpus(corpus: Corpus) -> list[str]:
    """Walk the whole corpus collecting findings; empty means clean."""
    findings: list[str] = []
    for name in SPLIT_NAMES:
        for uid in corpus.split.ids(name):
            if uid not in corpus.utterance_ids:
                findings.append(f"split {name!r} lists unknown utterance {uid!r}")
    for uid in corpus.utterance_ids:
        try:
            u = corpus.utterance(uid)
        except (CorpusError, VocabularyError) as exc:
            findings.append(str(exc))
            continue
        findings.extend(validate_utterance(u, corpus.vocab))
    return findings


# ---------------------------------------------------------------------------
# Synthetic generation


@dataclass
class GeneratorConfig:
    """Seeded synthetic corpus recipe.

    Each utterance is a random token sequence; every token holds its prototype
    contour for the segment duration, with linear coarticulation ramps across
    segment boundaries and i.i.d. Gaussian point noise on top. Annotations
    match the generated timing exactly.
    """

    tokens: list[str]
    utterances: int
    train: int
    validation: int
    test: int
    min_tokens: int
    max_tokens: int
    min_frames: int
    max_frames: int
    ramp_frames: int = 0
    noise_std: Optional[float] = None
    noise_rel: Optional[float] = None
    prototype_scale: float = 1.0
    prototypes: Optional[dict[str, np.ndarray]] = None
    shared_prototypes: list[list[str]] = field(default_factory=list)
    unvoiced: list[str] = field(default_factory=list)
    silence_pad_frames: int = 0
    frame_rate: float = 50.0
    audio_tones: bool = False
    audio_rate: int = 16000

    def __post_init__(self):
        if not self.tokens:
            raise CorpusError("generator needs at least one token")
        if len(set(self.tokens)) != len(self.tokens):
            raise CorpusError("generator token list has duplicates")
        if self.train + self.validation + self.test != self.utterances:
            raise CorpusError("split sizes must sum to the utterance count")
        if not (1 <= self.min_tokens <= self.max_tokens):
            raise CorpusError("bad token-count range")
        if not (1 <= self.min_frames <= self.max_frames):
            raise CorpusError("bad segment-duration range")
        if self.ramp_frames < 0:
            raise CorpusError("ramp_frames must be non-negative")
        if self.ramp_frames > self.min_frames:
            raise CorpusError(
                f"ramp of {self.ramp_frames} frames exceeds the shortest "
                f"segment ({self.min_frames} frames)"
            )
        if self.silence_pad_frames and self.silence_pad_frames < self.ramp_frames:
            raise CorpusError("silence padding shorter than the coarticulation ramp")
        if self.noise_std is not None and self.noise_rel is not None:
            raise CorpusError("set noise_std or noise_rel, not both")
        known = set(self.tokens)
        for group in self.shared_prototypes:
            for sym in group:
                if sym not in known:
                    raise CorpusError(f"shared_prototypes names unknown token {sym!r}")
        for sym in self.unvoiced:
            if sym not in known:
                raise CorpusError(f"unvoiced names unknown token {sym!r}")


SILENCE = "sil"


def _generator_vocabulary(cfg: GeneratorConfig) -> Vocabulary:
    unvoiced = set(cfg.unvoiced)
    spec = [("<blank>", "blank", None), (SILENCE, "silence", None)]
    spec += [(sym, "phonetic", sym not in unvoiced) for sym in cfg.tokens]
    return build_vocabulary(spec)


def make_prototypes(cfg: GeneratorConfig, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Per-symbol (10, 50, 2) prototype contours; shared groups reuse one draw."""
    if cfg.prototypes is not None:
        protos = dict(cfg.prototypes)
        missing = [s for s in cfg.tokens if s not in protos]
        if missing:
            raise CorpusError(f"prototypes missing for tokens {missing}")
        if SILENCE not in protos:
            protos[SILENCE] = np.zeros((len(ARTICULATORS), POINTS_PER_CONTOUR, 2))
        return protos
    leader: dict[str, str] = {}
    for group in cfg.shared_prototypes:
        for sym in group:
            leader[sym] = group[0]
    shape = (len(ARTICULATORS), POINTS_PER_CONTOUR, 2)
    protos: dict[str, np.ndarray] = {}
    protos[SILENCE] = rng.uniform(-cfg.prototype_scale, cfg.prototype_scale, size=shape)
    for sym in cfg.tokens:
        lead = leader.get(sym, sym)
        if lead in protos:
            protos[sym] = protos[lead]
        else:
            protos[sym] = rng.uniform(
                -cfg.prototype_scale, cfg.prototype_scale, size=shape
            )
            protos[lead] = protos[sym]
    return protos


def prototype_spread(protos: dict[str, np.ndarray], tokens: list[str]) -> float:
    """Standard deviation over all coordinate values of the token prototypes."""
    stacked = np.stack([protos[s] for s in tokens])
    return float(stacked.std())


def generate_synthetic_corpus(cfg: GeneratorConfig, seed: int) -> Corpus:
    """Deterministic function of (cfg, seed); returns an in-memory corpus."""
    rng = np.random.default_rng(seed)
    vocab = _generator_vocabulary(cfg)
    class_map = build_class_map(vocab, DEFAULT_CLASS_TABLE)
    protos = make_prototypes(cfg, rng)
    if cfg.noise_rel is not None:
        sigma = cfg.noise_rel * prototype_spread(protos, cfg.tokens)
    else:
        sigma = cfg.noise_std or 0.0

    records: dict[str, UtteranceRecord] = {}
    ids = []
    for k in range(cfg.utterances):
        uid = f"utt{k:04d}"
        ids.append(uid)
        records[uid] = _generate_utterance(uid, cfg, protos, sigma, rng)

    split = CorpusSplit(
        train=tuple(ids[: cfg.train]),
        validation=tuple(ids[cfg.train : cfg.train + cfg.validation]),
        test=tuple(ids[cfg.train + cfg.validation :]),
    )
    return Corpus(
        vocab=vocab,
        class_map=class_map,
        split=split,
        utterance_ids=ids,
        loader=records.__getitem__,
        frame_rate=cfg.frame_rate,
        audio_rate=cfg.audio_rate if cfg.audio_tones else None,
    )


def _generate_utterance(
    uid: str,
    cfg: GeneratorConfig,
    protos: dict[str, np.ndarray],
    sigma: float,
    rng: np.random.Generator,
) -> UtteranceRecord:
    n_tokens = int(rng.integers(cfg.min_tokens, cfg.max_tokens + 1))
    symbols = [cfg.tokens[i] for i in rng.integers(0, len(cfg.tokens), size=n_tokens)]
    durations = rng.integers(cfg.min_frames, cfg.max_frames + 1, size=n_tokens).tolist()
    if cfg.silence_pad_frames:
        symbols = [SILENCE, *symbols, SILENCE]
        durations = [cfg.silence_pad_frames, *durations, cfg.silence_pad_frames]

    total = sum(durations)
    frames = np.empty((total, len(ARTICULATORS), POINTS_PER_CONTOUR, 2))
    starts = np.cumsum([0, *durations[:-1]])
    for sym, start, dur in zip(symbols, starts, durations):
        frames[start : start + dur] = protos[sym]

    ramp = cfg.ramp_frames
    if ramp:
        left = math.ceil(ramp / 2)
        for b in range(1, len(symbols)):
            boundary = int(starts[b])
            p_left, p_right = protos[symbols[b - 1]], protos[symbols[b]]
            for k in range(ramp):
                w = (k + 1) / (ramp + 1)
                frames[boundary - left + k] = (1.0 - w) * p_left + w * p_right

    if sigma > 0:
        frames = frames + rng.normal(scale=sigma, size=frames.shape)

    annotation = [
        PhoneSegment(symbol=sym, start=start / cfg.frame_rate, end=(start + dur) / cfg.frame_rate)
        for sym, start, dur in zip(symbols, starts, durations)
    ]
    audio = _tone_audio(symbols, durations, cfg) if cfg.audio_tones else None
    contours = {
        name: np.ascontiguousarray(frames[:, i])
        for i, name in enumerate(ARTICULATORS)
    }
    return UtteranceRecord(
        id=uid,
        contours=contours,
        annotation=annotation,
        frame_rate=cfg.frame_rate,
        audio=audio,
        audio_rate=cfg.audio_rate if cfg.audio_tones else None,
    )


def _tone_audio(symbols: list[str], durations: list[int], cfg: GeneratorConfig) -> np.ndarray:
    """One pure tone per segment, pitched by token position; silence stays silent."""
    samples_per_frame = cfg.audio_rate / cfg.frame_rate
    if not samples_per_frame.is_integer():
        raise CorpusError("audio_rate must be an integer multiple of frame_rate")
    spf = int(samples_per_frame)
    chunks = []
    for sym, dur in zip(symbols, durations):
        n = dur * spf
        if sym == SILENCE:
            chunks.append(np.zeros(n))
        else:
            freq = 300.0 + 150.0 * cfg.tokens.index(sym)
            t = np.arange(n) / cfg.audio_rate
            chunks.append(0.1 * np.sin(2 * np.pi * freq * t))
    return np.concatenate(chunks)
