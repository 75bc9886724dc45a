"""Robustness verdicts over WER result tables.

A result matrix holds one audiovisual model's WER per test distribution of
a suite plus the audio-only baseline, which is a single value because an
audio-only model cannot depend on the video mask. The verdict has two
parts: the audiovisual model must never do worse than the baseline on any
suite member, and adding video must never push its WER up beyond interval
equivalence. All comparable pairs are checked, not just neighbours, since
interval equivalence does not compose along a chain.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .metrics import Ordering3, WerResult, ci_compare
from .suites import DEFAULT_PROBE_LENGTHS, TestSuite, comparable_pairs, standard_suite

__all__ = [
    "ResultMatrix",
    "Violation",
    "RobustnessVerdict",
    "FixtureError",
    "check_train_time",
    "check_test_time",
    "check_robust",
    "corollary_check",
    "claim_checks",
    "load_fixture",
    "load_expected_verdicts",
    "render_report",
    "verdicts_csv",
    "AUDIO_BASELINE_TOKEN",
]

AUDIO_BASELINE_TOKEN = "AudioBaseline"

FIXTURE_COLUMNS = ("architecture", "method", "noise", "suite",
                   "drop_param", "wer", "ci_halfwidth")


class FixtureError(ValueError):
    """A results table failed schema or consistency checks."""


@dataclass
class ResultMatrix:
    """WERs of one audiovisual model across a suite, plus its AO baseline."""

    suite: TestSuite
    av_results: dict[str, WerResult]
    ao_result: WerResult
    architecture: str = ""
    method: str = ""
    noise: str = ""

    def av(self, label: str) -> WerResult:
        try:
            return self.av_results[label]
        except KeyError:
            raise ValueError(
                f"missing result for distribution {label!r} "
                f"({self.architecture} {self.method} {self.noise} {self.suite.name})"
            ) from None


@dataclass(frozen=True)
class Violation:
    kind: str  # "train-time" | "test-time"
    labels: tuple[str, str]
    results: tuple[WerResult, WerResult]
    outcome: Ordering3


@dataclass
class RobustnessVerdict:
    train_time_ok: bool
    test_time_ok: bool
    violations: list[Violation] = field(default_factory=list)

    @property
    def robust(self) -> bool:
        return self.train_time_ok and self.test_time_ok

    def __post_init__(self) -> None:
        has_train = any(v.kind == "train-time" for v in self.violations)
        has_test = any(v.kind == "test-time" for v in self.violations)
        if self.train_time_ok == has_train or self.test_time_ok == has_test:
            raise ValueError("verdict flags disagree with recorded violations")


def check_train_time(matrix: ResultMatrix) -> list[Violation]:
    """The audiovisual model must not exceed the baseline on any member."""
    violations = []
    for dist in matrix.suite.distributions:
        av = matrix.av(dist.label)
        if ci_compare(av, matrix.ao_result) is Ordering3.GREATER:
            violations.append(Violation(
                "train-time", (dist.label, "ao-baseline"),
                (av, matrix.ao_result), Ordering3.GREATER))
    return violations


def check_test_time(matrix: ResultMatrix, lengths=DEFAULT_PROBE_LENGTHS) -> list[Violation]:
    """More video must never mean strictly higher WER.

    For every comparable pair, the result on the more-video side must not
    compare Greater than the result on the less-video side.
    """
    violations = []
    for less, more in comparable_pairs(matrix.suite, lengths):
        av_less = matrix.av(less.label)
        av_more = matrix.av(more.label)
        if ci_compare(av_more, av_less) is Ordering3.GREATER:
            violations.append(Violation(
                "test-time", (more.label, less.label),
                (av_more, av_less), Ordering3.GREATER))
    return violations


def check_robust(matrix: ResultMatrix, lengths=DEFAULT_PROBE_LENGTHS) -> RobustnessVerdict:
    train = check_train_time(matrix)
    test = check_test_time(matrix, lengths)
    return RobustnessVerdict(not train, not test, train + test)


def corollary_check(matrix: ResultMatrix, verdict: RobustnessVerdict,
                    lengths=DEFAULT_PROBE_LENGTHS) -> bool:
    """Consistency self-test implied by the two robustness conditions.

    For a robust matrix, the result at the more-degraded side of every
    comparable pair must not exceed the baseline. Non-robust matrices are
    vacuously fine.
    """
    if not verdict.robust:
        return True
    for less, _more in comparable_pairs(matrix.suite, lengths):
        if ci_compare(matrix.av(less.label), matrix.ao_result) is Ordering3.GREATER:
            return False
    return True


def claim_checks(m_av_on_av: WerResult, m_av_on_ao: WerResult,
                 m_ao_on_ao: WerResult) -> tuple[bool, bool, bool]:
    """The three comparisons commonly reported as robustness evidence.

    1) AV-trained model: full video at most no video.
    2) AV-trained on full video at most AO-trained baseline.
    3) AV-trained without video at most AO-trained baseline.
    Each holds individually without implying the others.
    """
    not_greater = lambda a, b: ci_compare(a, b) is not Ordering3.GREATER
    return (
        not_greater(m_av_on_av, m_av_on_ao),
        not_greater(m_av_on_av, m_ao_on_ao),
        not_greater(m_av_on_ao, m_ao_on_ao),
    )


def _parse_float(value: str, row_num: int, column: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise FixtureError(
            f"row {row_num}: malformed {column} value {value!r}") from None


def load_fixture(path) -> list[ResultMatrix]:
    """Read a results CSV into one matrix per (architecture, method, noise, suite).

    Baseline rows use the method token AudioBaseline; every other method in
    the same (architecture, noise, suite) group is paired with it. Rows
    must cover the full drop grid of their suite.
    """
    cells: dict[tuple, dict[float, WerResult]] = {}
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise FixtureError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != FIXTURE_COLUMNS:
            raise FixtureError(
                f"{path}: bad header {header!r}, expected {','.join(FIXTURE_COLUMNS)}")
        for row_num, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(FIXTURE_COLUMNS):
                raise FixtureError(
                    f"row {row_num}: malformed row, expected "
                    f"{len(FIXTURE_COLUMNS)} fields, got {len(row)}")
            arch, method, noise, suite_name, drop_s, wer_s, ci_s = (
                f.strip() for f in row)
            try:
                suite = standard_suite(suite_name)
            except ValueError as exc:
                raise FixtureError(f"row {row_num}: {exc}") from None
            drop = _parse_float(drop_s, row_num, "drop_param")
            wer = _parse_float(wer_s, row_num, "wer")
            ci = _parse_float(ci_s, row_num, "ci_halfwidth")
            key = (arch, method, noise, suite_name)
            group = cells.setdefault(key, {})
            if method != AUDIO_BASELINE_TOKEN and drop in group:
                raise FixtureError(
                    f"row {row_num}: duplicate cell for {key} at drop {drop_s}")
            group[drop] = WerResult(wer, ci)

    matrices = []
    for (arch, method, noise, suite_name), group in cells.items():
        if method == AUDIO_BASELINE_TOKEN:
            continue
        suite = standard_suite(suite_name)
        baseline_key = (arch, AUDIO_BASELINE_TOKEN, noise, suite_name)
        if baseline_key not in cells:
            raise FixtureError(
                f"missing AudioBaseline row for architecture {arch!r}, "
                f"noise {noise!r}, suite {suite_name!r}")
        baseline_group = cells[baseline_key]
        ao_result = next(iter(baseline_group.values()))
        av_results = {}
        for dist in suite.distributions:
            if dist.drop_param not in group:
                raise FixtureError(
                    f"{arch} {method} {noise} {suite_name}: no row for "
                    f"drop {dist.drop_param:g}")
            av_results[dist.label] = group[dist.drop_param]
        extra = set(group) - {d.drop_param for d in suite.distributions}
        if extra:
            raise FixtureError(
                f"{arch} {method} {noise} {suite_name}: drop values "
                f"{sorted(extra)} are not on the {suite_name} grid")
        matrices.append(ResultMatrix(suite, av_results, ao_result,
                                     architecture=arch, method=method, noise=noise))
    if not matrices:
        raise FixtureError(f"{path}: no method rows found")
    return matrices


def load_expected_verdicts(path) -> dict[tuple[str, str, str, str], bool]:
    """Read expected robust-or-not flags keyed like the fixture matrices."""
    expected = {}
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != [
                "architecture", "method", "noise", "suite", "robust"]:
            raise FixtureError(f"{path}: bad verdict header {header!r}")
        for row_num, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 5:
                raise FixtureError(f"row {row_num}: malformed verdict row")
            arch, method, noise, suite_name, flag = (f.strip() for f in row)
            if flag not in ("yes", "no"):
                raise FixtureError(
                    f"row {row_num}: robust must be yes or no, got {flag!r}")
            key = (arch, method, noise, suite_name)
            if key in expected:
                raise FixtureError(f"row {row_num}: duplicate verdict for {key}")
            expected[key] = flag == "yes"
    return expected


def _fmt_drop(drop: float) -> str:
    return format(drop, "g")


def render_report(matrices: list[ResultMatrix],
                  verdicts: list[RobustnessVerdict]) -> str:
    """Plain-text tables, one per (architecture, noise, suite) group."""
    groups: dict[tuple[str, str, str], list[tuple[ResultMatrix, RobustnessVerdict]]] = {}
    for matrix, verdict in zip(matrices, verdicts):
        key = (matrix.architecture, matrix.noise, matrix.suite.name)
        groups.setdefault(key, []).append((matrix, verdict))

    lines = []
    for (arch, noise, suite_name), entries in groups.items():
        suite = entries[0][0].suite
        drops = [_fmt_drop(d.drop_param) for d in suite.distributions]
        lines.append(f"== {arch} | noise {noise} | suite {suite_name} ==")
        header = ["method"] + [f"drop {d}" for d in drops] + ["robust"]
        rows = [header]
        baseline = entries[0][0].ao_result
        rows.append([AUDIO_BASELINE_TOKEN]
                    + [f"{baseline.wer:.2f}±{baseline.ci_halfwidth:.2f}"] * len(drops)
                    + ["-"])
        for matrix, verdict in entries:
            cells = [matrix.method]
            for dist in suite.distributions:
                r = matrix.av(dist.label)
                cells.append(f"{r.wer:.2f}±{r.ci_halfwidth:.2f}")
            cells.append("✓" if verdict.robust else "✗")
            rows.append(cells)
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        for row in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        for matrix, verdict in entries:
            for v in verdict.violations:
                a, b = v.results
                lines.append(
                    f"  violation [{matrix.method}] {v.kind}: {v.labels[0]} "
                    f"({a.wer:.2f}±{a.ci_halfwidth:.2f}) > {v.labels[1]} "
                    f"({b.wer:.2f}±{b.ci_halfwidth:.2f})")
        lines.append("")
    return "\n".join(lines)


def verdicts_csv(matrices: list[ResultMatrix],
                 verdicts: list[RobustnessVerdict]) -> str:
    """Machine-readable verdict rows matching the expected-verdicts schema."""
    lines = ["architecture,method,noise,suite,robust"]
    for matrix, verdict in zip(matrices, verdicts):
        lines.append(",".join([
            matrix.architecture, matrix.method, matrix.noise,
            matrix.suite.name, "yes" if verdict.robust else "no"]))
    return "\n".join(lines) + "\n"
