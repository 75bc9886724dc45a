"""Transducer alignment-lattice loss, its gradient, and greedy decoding.

The loss sums the probability of every interleaving of T blanks and U
labels over a joint log-probability lattice of shape T x (U+1) x (V+1),
blank at index 0. A blank consumes the current frame; a label keeps it.
Labels emitted after the final blank (all frames consumed) reuse the last
frame's joint output, so all C(T+U, U) interleavings carry probability.
Everything runs in 64-bit log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = [
    "JointLattice",
    "rnnt_loss",
    "rnnt_grad",
    "rnnt_loss_and_grad",
    "brute_force_rnnt",
    "greedy_decode",
]

_NORMALIZATION_TOL = 1e-9


@dataclass
class JointLattice:
    """Joint log-probabilities indexed by (frame, labels emitted, symbol)."""

    log_probs: np.ndarray
    target: tuple[int, ...]

    def __post_init__(self) -> None:
        self.log_probs = np.asarray(self.log_probs, dtype=np.float64)
        self.target = tuple(int(t) for t in self.target)
        if self.log_probs.ndim != 3:
            raise ValueError("lattice must be 3-d: frames x (labels+1) x symbols")
        t, u1, v1 = self.log_probs.shape
        if t < 1 or v1 < 2:
            raise ValueError(f"bad lattice shape {self.log_probs.shape}")
        if u1 != len(self.target) + 1:
            raise ValueError(
                f"lattice has {u1} label rows but target has {len(self.target)} labels")
        if any(not 1 <= y <= v1 - 1 for y in self.target):
            raise ValueError(f"target labels must lie in 1..{v1 - 1}: {self.target}")
        slack = np.logaddexp.reduce(self.log_probs, axis=2)
        worst = float(np.abs(slack).max())
        if worst > _NORMALIZATION_TOL:
            raise ValueError(f"lattice slices not normalized (off by {worst:.3g})")

    @property
    def num_frames(self) -> int:
        return self.log_probs.shape[0]

    @property
    def num_labels(self) -> int:
        return len(self.target)


def _lse(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def _forward(lat: JointLattice) -> np.ndarray:
    """Alpha grid over (blanks consumed, labels emitted), shape (T+1, U+1)."""
    lp = lat.log_probs
    t_max, u_max = lat.num_frames, lat.num_labels
    alpha = np.full((t_max + 1, u_max + 1), -np.inf)
    alpha[0, 0] = 0.0
    for t in range(t_max + 1):
        row_t = min(t, t_max - 1)
        for u in range(u_max + 1):
            if t == 0 and u == 0:
                continue
            via_blank = -math.inf
            if t > 0:
                via_blank = alpha[t - 1, u] + lp[t - 1, u, 0]
            via_label = -math.inf
            if u > 0:
                via_label = alpha[t, u - 1] + lp[row_t, u - 1, lat.target[u - 1]]
            alpha[t, u] = _lse(via_blank, via_label)
    return alpha


def _backward(lat: JointLattice) -> np.ndarray:
    lp = lat.log_probs
    t_max, u_max = lat.num_frames, lat.num_labels
    beta = np.full((t_max + 1, u_max + 1), -np.inf)
    beta[t_max, u_max] = 0.0
    for t in range(t_max, -1, -1):
        row_t = min(t, t_max - 1)
        for u in range(u_max, -1, -1):
            if t == t_max and u == u_max:
                continue
            via_blank = -math.inf
            if t < t_max:
                via_blank = lp[t, u, 0] + beta[t + 1, u]
            via_label = -math.inf
            if u < u_max:
                via_label = lp[row_t, u, lat.target[u]] + beta[t, u + 1]
            beta[t, u] = _lse(via_blank, via_label)
    return beta


def rnnt_loss(lattice: JointLattice) -> float:
    """Negative log-probability of the target summed over all alignments."""
    alpha = _forward(lattice)
    return float(-alpha[lattice.num_frames, lattice.num_labels])


def rnnt_loss_and_grad(lattice: JointLattice) -> tuple[float, np.ndarray]:
    """Loss plus its gradient with respect to every lattice entry.

    The gradient of an entry is minus the total occupancy of the path
    edges that read it; entries no alignment reads stay exactly zero.
    """
    lp = lattice.log_probs
    t_max, u_max = lattice.num_frames, lattice.num_labels
    alpha = _forward(lattice)
    beta = _backward(lattice)
    total = alpha[t_max, u_max]

    grad = np.zeros_like(lp)
    with np.errstate(under="ignore"):
        # Blank edges (t, u) -> (t+1, u) read lp[t, u, 0].
        grad[:, :, 0] -= np.exp(alpha[:t_max, :] + lp[:, :, 0] + beta[1:, :] - total)
        # Label edges (t, u) -> (t, u+1) read lp[min(t, T-1), u, y].
        for u in range(u_max):
            y = lattice.target[u]
            grad[:, u, y] -= np.exp(
                alpha[:t_max, u] + lp[:, u, y] + beta[:t_max, u + 1] - total)
            grad[t_max - 1, u, y] -= math.exp(
                alpha[t_max, u] + lp[t_max - 1, u, y] + beta[t_max, u + 1] - total)
    return float(-total), grad


def rnnt_grad(lattice: JointLattice) -> np.ndarray:
    return rnnt_loss_and_grad(lattice)[1]


def brute_force_rnnt(lattice: JointLattice) -> float:
    """Literal enumeration of every interleaving; oracle use only."""
    t_max, u_max = lattice.num_frames, lattice.num_labels
    if t_max + u_max > 20:
        raise ValueError(
            f"brute force capped at T + U <= 20, got {t_max + u_max}")
    lp = lattice.log_probs
    total = -math.inf
    for label_positions in combinations(range(t_max + u_max), u_max):
        label_set = set(label_positions)
        t = u = 0
        logp = 0.0
        for step in range(t_max + u_max):
            if step in label_set:
                logp += lp[min(t, t_max - 1), u, lattice.target[u]]
                u += 1
            else:
                logp += lp[t, u, 0]
                t += 1
        total = _lse(total, logp)
    return -total


def greedy_decode(frame_scores, n_frames: int, max_symbols_per_frame: int) -> list[int]:
    """Standard transducer greedy rule.

    ``frame_scores(t, prefix)`` returns the joint log-probability vector
    (blank first) for frame t given the labels emitted so far. At each
    frame, symbols are emitted while they beat blank, up to the per-frame
    cap, then the decoder advances.
    """
    if max_symbols_per_frame < 1:
        raise ValueError("max_symbols_per_frame must be >= 1")
    out: list[int] = []
    for t in range(n_frames):
        for _ in range(max_symbols_per_frame):
            scores = np.asarray(frame_scores(t, tuple(out)))
            best = int(np.argmax(scores))
            if best == 0:
                break
            out.append(best)
    return out
