"""Seeded synthetic audiovisual corpora with controllable difficulty.

Each utterance is a uniform random label sequence; every label emits a few
frames. An audio frame is the label's one-hot vector plus Gaussian noise,
a video frame the same for a possibly corrupted label, so the two streams
carry complementary evidence whose quality is set independently. Audio
noise plays the role of acoustic conditions: the sigma grid below mirrors
the usual clean-to-0db ladder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .masks import Utterance

__all__ = ["SynthConfig", "gen_corpus", "save_corpus", "load_corpus", "NOISE_SIGMA"]

# Acoustic-difficulty analog: label -> audio noise sigma.
NOISE_SIGMA = {"clean": 0.1, "20db": 0.5, "10db": 1.0, "0db": 1.5}


@dataclass(frozen=True)
class SynthConfig:
    vocab: int
    corpus_size: int
    min_labels: int = 2
    max_labels: int = 5
    min_frames_per_label: int = 2
    max_frames_per_label: int = 3
    audio_noise_sigma: float = 0.5
    video_noise_sigma: float = 0.3
    video_corruption_eps: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.vocab < 2:
            raise ValueError("vocabulary needs at least two labels")
        if self.corpus_size < 1:
            raise ValueError("corpus_size must be positive")
        if not 1 <= self.min_labels <= self.max_labels:
            raise ValueError("bad label-count range")
        if not 1 <= self.min_frames_per_label <= self.max_frames_per_label:
            raise ValueError("bad frames-per-label range")
        if self.audio_noise_sigma < 0 or self.video_noise_sigma < 0:
            raise ValueError("noise sigmas must be nonnegative")
        if not 0.0 <= self.video_corruption_eps <= 1.0:
            raise ValueError("video_corruption_eps must be in [0, 1]")


def gen_corpus(cfg: SynthConfig) -> list[Utterance]:
    """Generate the configured corpus; identical config gives identical bits."""
    rng = np.random.default_rng(cfg.seed)
    v = cfg.vocab
    corpus = []
    for _ in range(cfg.corpus_size):
        n_labels = int(rng.integers(cfg.min_labels, cfg.max_labels + 1))
        labels = rng.integers(1, v + 1, size=n_labels)
        audio_rows = []
        video_rows = []
        for label in labels:
            frames = int(rng.integers(cfg.min_frames_per_label,
                                      cfg.max_frames_per_label + 1))
            for _ in range(frames):
                audio = np.zeros(v)
                audio[label - 1] = 1.0
                audio += rng.normal(0.0, cfg.audio_noise_sigma, size=v)
                shown = int(label)
                if cfg.video_corruption_eps > 0 and rng.random() < cfg.video_corruption_eps:
                    # Uniform over the other labels.
                    shown = 1 + int(rng.integers(v - 1))
                    if shown >= label:
                        shown += 1
                video = np.zeros(v)
                video[shown - 1] = 1.0
                video += rng.normal(0.0, cfg.video_noise_sigma, size=v)
                audio_rows.append(audio)
                video_rows.append(video)
        corpus.append(Utterance(
            audio=np.array(audio_rows),
            video=np.array(video_rows),
            video_present=np.ones(len(audio_rows), dtype=bool),
            transcript=tuple(int(x) for x in labels),
        ))
    return corpus


def save_corpus(corpus, path, vocab: int) -> None:
    """Text format: header, then per utterance the transcript, the frame
    count, the audio rows, and the video rows."""
    first = corpus[0]
    lines = [f"avcorpus vocab={vocab} audio_dim={first.audio.shape[1]} "
             f"video_dim={first.video.shape[1]} count={len(corpus)}"]
    for utt in corpus:
        lines.append(" ".join(str(t) for t in utt.transcript))
        lines.append(str(utt.num_frames))
        for row in utt.audio:
            lines.append(" ".join(repr(float(x)) for x in row))
        for row in utt.video:
            lines.append(" ".join(repr(float(x)) for x in row))
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def load_corpus(path) -> tuple[list[Utterance], int]:
    """Read a corpus file back; returns (utterances, vocabulary size)."""
    with open(path) as handle:
        lines = handle.read().splitlines()
    if not lines or not lines[0].startswith("avcorpus "):
        raise ValueError(f"{path}: not a corpus file")
    fields = dict(item.split("=", 1) for item in lines[0].split()[1:])
    vocab = int(fields["vocab"])
    count = int(fields["count"])
    corpus = []
    pos = 1
    for _ in range(count):
        transcript = tuple(int(t) for t in lines[pos].split())
        n = int(lines[pos + 1])
        pos += 2
        audio = np.array([[float(x) for x in lines[pos + i].split()] for i in range(n)])
        pos += n
        video = np.array([[float(x) for x in lines[pos + i].split()] for i in range(n)])
        pos += n
        corpus.append(Utterance(audio, video, np.ones(n, dtype=bool), transcript))
    return corpus, vocab
