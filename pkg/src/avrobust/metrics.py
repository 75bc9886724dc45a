"""Word error rate scoring and confidence-interval comparisons.

WER counts substitutions, deletions, and insertions from a minimum-cost
word alignment and divides by the reference length. Corpus-level results
carry a bootstrap confidence interval so that two results can be compared
with an equivalence band instead of raw point estimates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Ordering3",
    "EditCounts",
    "WerResult",
    "align_words",
    "corpus_wer",
    "bootstrap_ci",
    "ci_compare",
]


class Ordering3(enum.Enum):
    """Three-way outcome of an interval-aware comparison."""

    LESS = "less"
    EQUIVALENT = "equivalent"
    GREATER = "greater"


@dataclass(frozen=True)
class EditCounts:
    """Error-type breakdown of a single hypothesis/reference alignment."""

    substitutions: int
    deletions: int
    insertions: int
    reference_words: int

    @property
    def distance(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    def wer(self) -> float:
        if self.reference_words == 0:
            raise ValueError("WER undefined for an empty reference")
        return self.distance / self.reference_words


@dataclass(frozen=True)
class WerResult:
    """A WER point estimate with its confidence-interval halfwidth.

    ``num_utterances`` is None for results ingested verbatim from an
    external table, where the underlying corpus size is not tracked.
    """

    wer: float
    ci_halfwidth: float = 0.0
    num_utterances: int | None = None

    def __post_init__(self) -> None:
        if self.wer < 0:
            raise ValueError(f"negative WER {self.wer}")
        if self.ci_halfwidth < 0:
            raise ValueError(f"negative CI halfwidth {self.ci_halfwidth}")


def _tokens(text) -> list:
    """Split a string on ASCII whitespace, or pass a token sequence through."""
    if isinstance(text, str):
        return text.split()
    return list(text)


def align_words(hypothesis, reference) -> EditCounts:
    """Count substitutions, deletions, and insertions of a best alignment.

    Inputs are either whitespace-separated strings or token sequences.
    The alignment minimises total unit-cost edits; when several backtraces
    tie, substitutions are preferred over deletions over insertions, which
    fixes the individual counts (the total is invariant anyway).
    """
    hyp = _tokens(hypothesis)
    ref = _tokens(reference)
    nr, nh = len(ref), len(hyp)

    cost = np.zeros((nr + 1, nh + 1), dtype=np.int64)
    cost[:, 0] = np.arange(nr + 1)
    cost[0, :] = np.arange(nh + 1)
    for i in range(1, nr + 1):
        ri = ref[i - 1]
        row = cost[i]
        prev = cost[i - 1]
        for j in range(1, nh + 1):
            sub = prev[j - 1] + (ri != hyp[j - 1])
            dele = prev[j] + 1
            ins = row[j - 1] + 1
            row[j] = min(sub, dele, ins)

    subs = dels = inss = 0
    i, j = nr, nh
    while i > 0 or j > 0:
        here = cost[i, j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and here == cost[i - 1, j - 1]:
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and here == cost[i - 1, j - 1] + 1:
            subs += 1
            i -= 1
            j -= 1
        elif i > 0 and here == cost[i - 1, j] + 1:
            dels += 1
            i -= 1
        else:
            inss += 1
            j -= 1
    return EditCounts(subs, dels, inss, nr)


def _resample_halfwidth(stat, n: int, resamples: int, seed: int, level: float) -> float:
    """Percentile-bootstrap halfwidth of ``stat`` over index resamples.

    ``stat`` maps an (resamples, n) index matrix to a vector of statistics.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must be in (0, 1), got {level}")
    if resamples < 1:
        raise ValueError(f"resamples must be >= 1, got {resamples}")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(resamples, n))
    stats = stat(idx)
    lo, hi = np.percentile(stats, [(1.0 - level) * 50.0, (1.0 + level) * 50.0])
    return float(hi - lo) / 2.0


def bootstrap_ci(per_utterance_wers: Sequence[float], resamples: int, seed: int,
                 level: float = 0.95) -> float:
    """Halfwidth of a seeded percentile bootstrap of the corpus-mean WER."""
    values = np.asarray(list(per_utterance_wers), dtype=np.float64)
    if values.size == 0:
        raise ValueError("empty test set")
    if values.size == 1 or np.all(values == values[0]):
        return 0.0
    return _resample_halfwidth(lambda idx: values[idx].mean(axis=1),
                               values.size, resamples, seed, level)


def corpus_wer(pairs, *, pooled: bool = False, resamples: int = 1000, seed: int = 0,
               level: float = 0.95) -> WerResult:
    """Score a corpus of (hypothesis, reference) pairs.

    The default aggregate is the mean of per-utterance WERs. With
    ``pooled=True`` the aggregate is total errors over total reference
    words instead; the bootstrap then resamples utterances and recomputes
    the pooled ratio.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty test set")
    counts = []
    for idx, (hyp, ref) in enumerate(pairs):
        c = align_words(hyp, ref)
        if c.reference_words == 0:
            raise ValueError(f"empty reference in utterance {idx}")
        counts.append(c)

    wers = np.array([c.distance / c.reference_words for c in counts])
    if pooled:
        errors = np.array([float(c.distance) for c in counts])
        words = np.array([float(c.reference_words) for c in counts])
        point = float(errors.sum() / words.sum())
        if len(pairs) == 1 or np.all(wers == wers[0]):
            halfwidth = 0.0
        else:
            halfwidth = _resample_halfwidth(
                lambda idx: errors[idx].sum(axis=1) / words[idx].sum(axis=1),
                len(pairs), resamples, seed, level)
    else:
        point = float(wers.mean())
        halfwidth = bootstrap_ci(wers, resamples, seed, level)
    return WerResult(point, halfwidth, len(pairs))


# Absorbs binary representation error when comparing values that originate
# as short decimal text; far below the resolution of any real WER table.
_CI_EPS = 1e-9


def ci_compare(a: WerResult, b: WerResult) -> Ordering3:
    """Compare two results, treating interval overlap of either point as a tie.

    Equivalent when a's point estimate lies inside b's interval or b's
    point estimate lies inside a's interval, boundaries inclusive. With
    zero halfwidths this degenerates to an exact comparison. The relation
    is antisymmetric but deliberately not transitive.
    """
    a_in_b = b.wer - b.ci_halfwidth - _CI_EPS <= a.wer <= b.wer + b.ci_halfwidth + _CI_EPS
    b_in_a = a.wer - a.ci_halfwidth - _CI_EPS <= b.wer <= a.wer + a.ci_halfwidth + _CI_EPS
    if a_in_b or b_in_a:
        return Ordering3.EQUIVALENT
    return Ordering3.LESS if a.wer < b.wer else Ordering3.GREATER
