"""Binary keep-masks over video frames: specs, sampling, and application.

A mask spec describes which video frames of an utterance survive. Specs
are immutable values; sampling takes an explicit random generator so that
deterministic specs ignore it and stochastic ones stay reproducible.
Frames are 1-indexed inside the drop formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Utterance",
    "Full",
    "Empty",
    "Explicit",
    "BerUtt",
    "BerFrame",
    "Contiguous",
    "Rate",
    "MaskSpec",
    "is_deterministic",
    "sample_mask",
    "expected_keep",
    "apply_mask",
]


@dataclass(eq=False)
class Utterance:
    """A synchronized audiovisual clip with its reference transcript.

    Audio and video share the frame count. A frame whose presence flag is
    false has an all-zero video row; the flag exists so models that route
    on availability can tell deliberate zeros from missing data.
    """

    audio: np.ndarray
    video: np.ndarray
    video_present: np.ndarray
    transcript: tuple[int, ...]

    def __post_init__(self) -> None:
        self.audio = np.asarray(self.audio, dtype=np.float64)
        self.video = np.asarray(self.video, dtype=np.float64)
        self.video_present = np.asarray(self.video_present, dtype=bool)
        self.transcript = tuple(int(t) for t in self.transcript)
        if self.audio.ndim != 2 or self.video.ndim != 2:
            raise ValueError("audio and video must be 2-d frame matrices")
        if len(self.audio) != len(self.video):
            raise ValueError(
                f"audio has {len(self.audio)} frames but video has {len(self.video)}")
        if self.video_present.shape != (len(self.audio),):
            raise ValueError("presence flags must have one entry per frame")
        absent = ~self.video_present
        if absent.any() and np.any(self.video[absent] != 0.0):
            raise ValueError("absent frames must have all-zero video rows")

    @property
    def num_frames(self) -> int:
        return len(self.audio)


@dataclass(frozen=True)
class Full:
    """Keep every frame."""


@dataclass(frozen=True)
class Empty:
    """Drop every frame."""


@dataclass(frozen=True)
class Explicit:
    """A fixed bit pattern; usable only at its own length."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if not self.bits:
            raise ValueError("explicit mask must be nonempty")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("explicit mask bits must be 0 or 1")


@dataclass(frozen=True)
class BerUtt:
    """Keep the whole video with probability keep_prob, else drop it all."""

    keep_prob: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.keep_prob <= 1.0:
            raise ValueError(f"keep_prob must be in [0, 1], got {self.keep_prob}")


@dataclass(frozen=True)
class BerFrame:
    """Keep each frame independently with probability keep_prob."""

    keep_prob: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.keep_prob <= 1.0:
            raise ValueError(f"keep_prob must be in [0, 1], got {self.keep_prob}")


@dataclass(frozen=True)
class Contiguous:
    """Drop the 1-indexed frames floor(start*n)+1 through floor(stop*n)."""

    start: float
    stop: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.start <= 1.0 or not 0.0 <= self.stop <= 1.0:
            raise ValueError("contiguous bounds must be in [0, 1]")
        if self.start > self.stop:
            raise ValueError(f"start {self.start} exceeds stop {self.stop}")


@dataclass(frozen=True)
class Rate:
    """Drop the 1-indexed frames that are multiples of 1/rate.

    rate 0 drops nothing; rate 1 drops everything; otherwise 1/rate must
    be a positive integer (the sampling period).
    """

    rate: float

    def __post_init__(self) -> None:
        if self.rate == 0.0:
            return
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate must be 0 or in (0, 1], got {self.rate}")
        period = 1.0 / self.rate
        if abs(period - round(period)) > 1e-9:
            raise ValueError(f"1/rate must be an integer, got 1/{self.rate}")

    @property
    def period(self) -> int:
        if self.rate == 0.0:
            raise ValueError("rate 0 has no period")
        return int(round(1.0 / self.rate))


MaskSpec = Union[Full, Empty, Explicit, BerUtt, BerFrame, Contiguous, Rate]


def is_deterministic(spec: MaskSpec) -> bool:
    return not isinstance(spec, (BerUtt, BerFrame))


def _deterministic_bits(spec: MaskSpec, n: int) -> np.ndarray:
    if isinstance(spec, Full):
        return np.ones(n, dtype=np.int64)
    if isinstance(spec, Empty):
        return np.zeros(n, dtype=np.int64)
    if isinstance(spec, Explicit):
        if len(spec.bits) != n:
            raise ValueError(
                f"explicit mask has length {len(spec.bits)}, wanted {n}")
        return np.array(spec.bits, dtype=np.int64)
    if isinstance(spec, Contiguous):
        bits = np.ones(n, dtype=np.int64)
        first = math.floor(spec.start * n) + 1
        last = math.floor(spec.stop * n)
        if first <= last:
            bits[first - 1:last] = 0
        return bits
    if isinstance(spec, Rate):
        if spec.rate == 0.0:
            return np.ones(n, dtype=np.int64)
        bits = np.ones(n, dtype=np.int64)
        bits[spec.period - 1::spec.period] = 0
        return bits
    raise TypeError(f"not a deterministic spec: {spec!r}")


def sample_mask(spec: MaskSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a keep-mask of length n (1 = frame kept).

    Deterministic specs never touch the generator.
    """
    if n < 1:
        raise ValueError(f"mask length must be >= 1, got {n}")
    if isinstance(spec, BerUtt):
        keep = rng.random() < spec.keep_prob
        return np.full(n, int(keep), dtype=np.int64)
    if isinstance(spec, BerFrame):
        return (rng.random(n) < spec.keep_prob).astype(np.int64)
    return _deterministic_bits(spec, n)


def expected_keep(spec: MaskSpec, n: int) -> np.ndarray:
    """Exact per-frame keep probability of sample_mask for this spec."""
    if n < 1:
        raise ValueError(f"mask length must be >= 1, got {n}")
    if isinstance(spec, BerUtt):
        return np.full(n, spec.keep_prob, dtype=np.float64)
    if isinstance(spec, BerFrame):
        return np.full(n, spec.keep_prob, dtype=np.float64)
    return _deterministic_bits(spec, n).astype(np.float64)


def apply_mask(utt: Utterance, mask: np.ndarray) -> Utterance:
    """Zero the video of dropped frames and clear their presence flags.

    Audio and transcript pass through untouched. Masking composes by
    elementwise AND, so applying the same mask twice is a no-op.
    """
    mask = np.asarray(mask)
    if mask.shape != (utt.num_frames,):
        raise ValueError(
            f"mask length {mask.shape} does not match {utt.num_frames} frames")
    keep = utt.video_present & (mask != 0)
    video = np.where(keep[:, None], utt.video, 0.0)
    return Utterance(utt.audio, video, keep, utt.transcript)
