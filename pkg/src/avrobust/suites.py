"""Test suites of masked video conditions, ordered by how much video survives.

Every suite is a poset of test distributions. One distribution compares
below another when its expected keep-mask is elementwise at most the
other's at every probed frame length, which matches the intuition "less
video available". The standard suites use fixed parameter grids stated as
fractions of dropped frames; their endpoints are the shared full-video and
no-video distributions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .masks import BerFrame, BerUtt, Contiguous, Empty, Full, MaskSpec, Rate, expected_keep

__all__ = [
    "PosetOrder",
    "TestDistribution",
    "TestSuite",
    "SUITE_NAMES",
    "DEFAULT_PROBE_LENGTHS",
    "standard_suite",
    "poset_leq",
    "comparable_pairs",
]

SUITE_NAMES = ("utt", "berUtt", "berFrame", "start", "mid", "end", "rate", "all")

# Canonical probe set: every length up to 256 plus the longest supported one.
DEFAULT_PROBE_LENGTHS = tuple(range(1, 257)) + (512,)


class PosetOrder(enum.Enum):
    LESS_VIDEO = "less-video"
    EQUAL = "equal"
    MORE_VIDEO = "more-video"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class TestDistribution:
    """A labelled mask spec with its displayed dropped-frame fraction."""

    __test__ = False  # not a pytest class despite the name

    label: str
    spec: MaskSpec
    drop_param: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.drop_param <= 1.0:
            raise ValueError(f"drop_param must be in [0, 1], got {self.drop_param}")
        if isinstance(self.spec, Full) != (self.drop_param == 0.0):
            raise ValueError("drop_param 0 must pair with the full-video spec")
        if isinstance(self.spec, Empty) != (self.drop_param == 1.0):
            raise ValueError("drop_param 1 must pair with the no-video spec")


@dataclass(frozen=True)
class TestSuite:
    __test__ = False  # not a pytest class despite the name

    name: str
    distributions: tuple[TestDistribution, ...]

    def __post_init__(self) -> None:
        labels = [d.label for d in self.distributions]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in suite {self.name}: {labels}")

    def __getitem__(self, label: str) -> TestDistribution:
        for d in self.distributions:
            if d.label == label:
                return d
        raise KeyError(label)


_FULL = TestDistribution("full", Full(), 0.0)
_EMPTY = TestDistribution("empty", Empty(), 1.0)


def _fmt(x: float) -> str:
    return format(x, "g")


def _dist(suite: str, spec: MaskSpec, drop: float) -> TestDistribution:
    return TestDistribution(f"{suite}@drop{_fmt(drop)}", spec, drop)


def _chain(name: str, middles: list[TestDistribution]) -> TestSuite:
    return TestSuite(name, (_FULL, *middles, _EMPTY))


@lru_cache(maxsize=None)
def standard_suite(name: str) -> TestSuite:
    """Build one of the named suites with its standard parameter grid.

    Grid values are dropped-frame fractions; a Bernoulli grid value d maps
    to keep probability 1 - d. The 0 and 1 endpoints of every grid are the
    shared full/empty distributions, so suites can be unioned without
    duplicating them.
    """
    ber_drops = (0.25, 0.5, 0.75)
    if name == "utt":
        return TestSuite("utt", (_FULL, _EMPTY))
    if name == "berUtt":
        return _chain(name, [_dist(name, BerUtt(1.0 - d), d) for d in ber_drops])
    if name == "berFrame":
        return _chain(name, [_dist(name, BerFrame(1.0 - d), d) for d in ber_drops])
    if name == "start":
        return _chain(name, [_dist(name, Contiguous(0.0, d), d) for d in ber_drops])
    if name == "mid":
        spans = ((0.375, 0.625), (0.25, 0.75), (0.125, 0.875))
        return _chain(name, [_dist(name, Contiguous(a, b), b - a) for a, b in spans])
    if name == "end":
        return _chain(name, [_dist(name, Contiguous(1.0 - d, 1.0), d) for d in ber_drops])
    if name == "rate":
        rates = (1 / 128, 1 / 32, 1 / 8, 1 / 2)
        return _chain(name, [_dist(name, Rate(k), k) for k in rates])
    if name == "all":
        members = [_FULL]
        for part in ("berUtt", "berFrame", "start", "mid", "end", "rate"):
            members.extend(d for d in standard_suite(part).distributions
                           if d.label not in ("full", "empty"))
        members.append(_EMPTY)
        return TestSuite("all", tuple(members))
    raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)}")


@lru_cache(maxsize=None)
def _keep_profile(spec: MaskSpec, lengths: tuple[int, ...]) -> np.ndarray:
    profile = np.concatenate([expected_keep(spec, n) for n in lengths])
    profile.setflags(write=False)
    return profile


def poset_leq(d1: TestDistribution, d2: TestDistribution,
              lengths=DEFAULT_PROBE_LENGTHS) -> PosetOrder:
    """Order two distributions by expected video amount.

    d1 is LESS_VIDEO than d2 when its expected keep-mask is elementwise at
    most d2's at every length in ``lengths``, strictly somewhere. If
    neither direction holds uniformly the two are incomparable.
    """
    lengths = tuple(lengths)
    if not lengths:
        raise ValueError("lengths must be nonempty")
    a = _keep_profile(d1.spec, lengths)
    b = _keep_profile(d2.spec, lengths)
    le = bool(np.all(a <= b))
    ge = bool(np.all(a >= b))
    if le and ge:
        return PosetOrder.EQUAL
    if le:
        return PosetOrder.LESS_VIDEO
    if ge:
        return PosetOrder.MORE_VIDEO
    return PosetOrder.INCOMPARABLE


def comparable_pairs(suite: TestSuite,
                     lengths=DEFAULT_PROBE_LENGTHS) -> list[tuple[TestDistribution, TestDistribution]]:
    """All ordered comparable pairs of a suite, oriented (less, more video).

    Every comparable pair is emitted, not just neighbours, because the
    downstream interval-equivalence comparison is not transitive. Pairs
    with identical expected masks are emitted in both orientations, which
    forces their results to be equivalent.
    """
    pairs = []
    dists = suite.distributions
    for i in range(len(dists)):
        for j in range(i + 1, len(dists)):
            order = poset_leq(dists[i], dists[j], lengths)
            if order is PosetOrder.LESS_VIDEO:
                pairs.append((dists[i], dists[j]))
            elif order is PosetOrder.MORE_VIDEO:
                pairs.append((dists[j], dists[i]))
            elif order is PosetOrder.EQUAL:
                pairs.append((dists[i], dists[j]))
                pairs.append((dists[j], dists[i]))
    return pairs
