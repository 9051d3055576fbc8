"""Edit-distance alignment, phoneme error rate, and class-grouped confusion matrices."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from artphon.vocabulary import CLASS_LABELS, PhoneticClassMap

# Edit operation kinds. match/substitution carry (ref, hyp); deletion carries
# only the reference symbol, insertion only the hypothesis symbol.
MATCH = "match"
SUBSTITUTION = "substitution"
DELETION = "deletion"
INSERTION = "insertion"


@dataclass(frozen=True)
class EditOp:
    kind: str
    ref: Optional[str] = None
    hyp: Optional[str] = None


@dataclass(frozen=True)
class AlignmentResult:
    distance: int
    ops: tuple[EditOp, ...]

    def counts(self) -> dict[str, int]:
        out = {MATCH: 0, SUBSTITUTION: 0, DELETION: 0, INSERTION: 0}
        for op in self.ops:
            out[op.kind] += 1
        return out


def levenshtein_align(ref: Sequence[str], hyp: Sequence[str]) -> AlignmentResult:
    """Minimal unit-cost alignment of hyp against ref, with a full backtrace.

    On equal cost the backtrace (walked from the end) prefers
    match > substitution > deletion > insertion, which makes the edit path,
    and hence any confusion matrix built from it, deterministic.
    """
    n, m = len(ref), len(hyp)
    dist = np.zeros((n + 1, m + 1), dtype=np.int64)
    dist[:, 0] = np.arange(n + 1)
    dist[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        ri = ref[i - 1]
        for j in range(1, m + 1):
            sub = dist[i - 1, j - 1] + (ri != hyp[j - 1])
            dele = dist[i - 1, j] + 1
            ins = dist[i, j - 1] + 1
            dist[i, j] = min(sub, dele, ins)

    ops: list[EditOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dist[i, j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and here == dist[i - 1, j - 1]:
            ops.append(EditOp(MATCH, ref=ref[i - 1], hyp=hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == dist[i - 1, j - 1] + 1:
            ops.append(EditOp(SUBSTITUTION, ref=ref[i - 1], hyp=hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and here == dist[i - 1, j] + 1:
            ops.append(EditOp(DELETION, ref=ref[i - 1]))
            i = i - 1
        else:
            ops.append(EditOp(INSERTION, hyp=hyp[j - 1]))
            j = j - 1
    ops.reverse()
    return AlignmentResult(distance=int(dist[n, m]), ops=tuple(ops))


def per(pairs: Sequence[tuple[Sequence[str], Sequence[str]]]) -> float:
    """Phoneme error rate over (reference, hypothesis) pairs, as a percentage."""
    total_ref = sum(len(ref) for ref, _ in pairs)
    if total_ref == 0:
        raise ValueError("total reference length is zero")
    total_dist = sum(levenshtein_align(ref, hyp).distance for ref, hyp in pairs)
    return 100.0 * total_dist / total_ref


def format_per(rate: float) -> str:
    return f"{rate:.2f}"


DELETION_COLUMN = "DELETION"
INSERTION_ROW = "INSERTION"


@dataclass(frozen=True)
class ConfusionMatrix:
    """Class-level confusion counts with a deletion column and an insertion row.

    values has shape (n_classes + 1, n_classes + 1): rows are true classes plus
    the final insertion row, columns are predicted classes plus the final
    deletion column. In normalized mode each true-class row is divided by that
    class's total reference occurrences and the insertion row by the total
    insertion count, so the deletion column and insertion row carry different
    information (fraction of a class deleted vs share of insertions per class).
    """

    labels: tuple[str, ...]
    values: np.ndarray
    normalized: bool

    def cell(self, true_label: str, pred_label: str) -> float:
        row = self.labels.index(true_label) if true_label != INSERTION_ROW else len(self.labels)
        col = self.labels.index(pred_label) if pred_label != DELETION_COLUMN else len(self.labels)
        return float(self.values[row, col])


def confusion_matrix(
    alignments: Sequence[AlignmentResult],
    class_map: PhoneticClassMap,
    normalize: bool = True,
) -> ConfusionMatrix:
    labels = CLASS_LABELS
    idx = {label: k for k, label in enumerate(labels)}
    n = len(labels)
    counts = np.zeros((n + 1, n + 1), dtype=np.float64)
    for alignment in alignments:
        for op in alignment.ops:
            if op.kind in (MATCH, SUBSTITUTION):
                counts[idx[class_map.class_of(op.ref)], idx[class_map.class_of(op.hyp)]] += 1
            elif op.kind == DELETION:
                counts[idx[class_map.class_of(op.ref)], n] += 1
            else:
                counts[n, idx[class_map.class_of(op.hyp)]] += 1
    if not normalize:
        return ConfusionMatrix(labels=labels, values=counts, normalized=False)

    values = counts.copy()
    row_totals = counts[:n].sum(axis=1)
    for k in range(n):
        if row_totals[k] > 0:
            values[k] /= row_totals[k]
    total_insertions = counts[n].sum()
    if total_insertions > 0:
        values[n] /= total_insertions
    return ConfusionMatrix(labels=labels, values=values, normalized=True)


def write_confusion_csv(matrix: ConfusionMatrix, path: str | Path) -> None:
    """CSV export: predicted-class header plus DELETION column, true-class rows
    plus a final INSERTION row, values at 6 decimals."""
    header = ["true_class", *matrix.labels, DELETION_COLUMN]
    lines = [",".join(header)]
    row_names = [*matrix.labels, INSERTION_ROW]
    for name, row in zip(row_names, matrix.values):
        lines.append(",".join([name, *(f"{v:.6f}" for v in row)]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
