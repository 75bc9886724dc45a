"""Experiment runner: data generation, training, masked evaluation, verdicts.

Commands are plain argparse subcommands over the library modules. The
config file is line-oriented ``section.key = value`` text with ``#``
comments. Exit codes: 0 success, 1 configuration or input-format errors,
2 runtime failures (including a verdict diff in reproduce-paper), 3 a
computed non-robust verdict from the verdict command.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from importlib.resources import files as package_files
from pathlib import Path

from .model import (
    AudioOnly,
    AvDropoutUtt,
    CascadeFrame,
    CascadeUtt,
    DropoutFrame,
    DropoutUtt,
    ModelConfig,
    OptimizerConfig,
    TrainingMethod,
    TwoPass,
    Vanilla,
    evaluate_model,
    load_checkpoint,
    method_token,
    save_checkpoint,
    train,
    two_pass_train,
)
from .robustness import (
    FixtureError,
    check_robust,
    load_expected_verdicts,
    load_fixture,
    render_report,
    verdicts_csv,
)
from .suites import SUITE_NAMES, standard_suite
from .synthdata import NOISE_SIGMA, SynthConfig, gen_corpus, load_corpus, save_corpus

__all__ = ["main", "ExperimentConfig", "ConfigError", "parse_config"]

METHOD_TOKENS = ("AudioBaseline", "Vanilla", "DropoutUtt", "DropoutFrame",
                 "AVDropoutUtt", "CascadeUtt", "CascadeFrame", "TwoPass")


class ConfigError(ValueError):
    pass


def parse_config(path) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    entries: dict[str, str] = {}
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected 'section.key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if "." not in key or not value:
            raise ConfigError(f"{path}:{num}: expected 'section.key = value'")
        entries[key] = value
    return entries


class _Entries:
    def __init__(self, entries: dict[str, str]):
        self.entries = dict(entries)

    def pull(self, key, default, convert):
        value = self.entries.pop(key, None)
        if value is None:
            return default
        try:
            return convert(value)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}") from None


@dataclass
class ExperimentConfig:
    """Typed view of a config file; see the README for the key reference."""

    synth_train: SynthConfig
    test_size: int
    hidden: int
    fusion: str
    method: TrainingMethod
    opt: OptimizerConfig
    train_seed: int
    suite: str
    eval_seed: int
    resamples: int
    max_symbols_per_frame: int

    @property
    def synth_test(self) -> SynthConfig:
        # Held-out split: same generator family, shifted seed.
        return replace(self.synth_train, corpus_size=self.test_size,
                       seed=self.synth_train.seed + 1)

    @property
    def noise_label(self) -> str:
        return f"synthetic:{self.synth_train.audio_noise_sigma:g}"

    @property
    def architecture_label(self) -> str:
        return f"toy-h{self.hidden}-{self.fusion}"

    def model_config(self) -> ModelConfig:
        vocab = self.synth_train.vocab
        return ModelConfig(audio_dim=vocab, video_dim=vocab, vocab=vocab,
                           hidden=self.hidden, fusion=self.fusion)


def build_method(token: str, entries: _Entries) -> TrainingMethod:
    if token not in METHOD_TOKENS:
        raise ConfigError(
            f"unknown method {token!r}; expected one of {', '.join(METHOD_TOKENS)}")
    drop = entries.pull("training.drop_prob", None, float)
    if token == "AudioBaseline":
        return AudioOnly()
    if token == "Vanilla":
        return Vanilla()
    if token == "TwoPass":
        return TwoPass()
    if token == "AVDropoutUtt":
        return AvDropoutUtt(
            entries.pull("training.keep_prob", 0.5, float),
            entries.pull("training.drop_video_prob", 0.25, float),
            entries.pull("training.drop_audio_prob", 0.25, float))
    cls = {"DropoutUtt": DropoutUtt, "DropoutFrame": DropoutFrame,
           "CascadeUtt": CascadeUtt, "CascadeFrame": CascadeFrame}[token]
    return cls() if drop is None else cls(drop)


def load_experiment_config(path, method_override: str | None = None,
                           seed_override: int | None = None) -> ExperimentConfig:
    entries = _Entries(parse_config(path))
    noise = entries.pull("synth.noise", None, str)
    if noise is not None and noise not in NOISE_SIGMA:
        raise ConfigError(
            f"synth.noise must be one of {', '.join(NOISE_SIGMA)}, got {noise!r}")
    sigma_default = NOISE_SIGMA[noise] if noise else 0.5
    try:
        synth = SynthConfig(
            vocab=entries.pull("synth.vocab", 6, int),
            corpus_size=entries.pull("synth.train_size", 200, int),
            min_labels=entries.pull("synth.min_labels", 2, int),
            max_labels=entries.pull("synth.max_labels", 5, int),
            min_frames_per_label=entries.pull("synth.min_frames_per_label", 2, int),
            max_frames_per_label=entries.pull("synth.max_frames_per_label", 3, int),
            audio_noise_sigma=entries.pull("synth.audio_noise_sigma", sigma_default, float),
            video_noise_sigma=entries.pull("synth.video_noise_sigma", 0.3, float),
            video_corruption_eps=entries.pull("synth.video_corruption_eps", 0.05, float),
            seed=entries.pull("synth.seed", 12345, int),
        )
        opt = OptimizerConfig(
            steps=entries.pull("training.steps", 500, int),
            lr=entries.pull("training.lr", 0.01, float),
            batch_size=entries.pull("training.batch_size", 8, int),
            beta1=entries.pull("training.beta1", 0.9, float),
            beta2=entries.pull("training.beta2", 0.97, float),
        )
        token = method_override or entries.pull("training.method", "Vanilla", str)
        method = build_method(token, entries)
        cfg = ExperimentConfig(
            synth_train=synth,
            test_size=entries.pull("synth.test_size", 100, int),
            hidden=entries.pull("model.hidden", 16, int),
            fusion=entries.pull("model.fusion", "cat", str),
            method=method,
            opt=opt,
            train_seed=(seed_override if seed_override is not None
                        else entries.pull("training.seed", 1, int)),
            suite=entries.pull("evaluation.suite", "berUtt", str),
            eval_seed=entries.pull("evaluation.seed", 7, int),
            resamples=entries.pull("evaluation.resamples", 1000, int),
            max_symbols_per_frame=entries.pull("evaluation.max_symbols_per_frame", 4, int),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.suite not in SUITE_NAMES:
        raise ConfigError(
            f"evaluation.suite must be one of {', '.join(SUITE_NAMES)}, got {cfg.suite!r}")
    if entries.entries:
        unknown = ", ".join(sorted(entries.entries))
        raise ConfigError(f"unknown config keys: {unknown}")
    cfg.model_config()  # validates hidden/fusion
    return cfg


def _check_suite_token(token: str) -> str:
    if token not in SUITE_NAMES:
        raise ConfigError(
            f"unknown suite {token!r}; expected one of {', '.join(SUITE_NAMES)}")
    return token


def cmd_gen_data(args) -> int:
    cfg = load_experiment_config(args.config)
    synth = cfg.synth_test if args.split == "test" else cfg.synth_train
    corpus = gen_corpus(synth)
    save_corpus(corpus, args.out, vocab=synth.vocab)
    print(f"wrote {len(corpus)} utterances to {args.out}")
    return 0


def cmd_train(args) -> int:
    cfg = load_experiment_config(args.config, method_override=args.method,
                                 seed_override=args.seed)
    corpus = gen_corpus(cfg.synth_train)
    model_cfg = cfg.model_config()
    if isinstance(cfg.method, TwoPass):
        params = two_pass_train(corpus, cfg.opt, cfg.train_seed, model_cfg)
    else:
        params = train(corpus, cfg.method, cfg.opt, cfg.train_seed, model_cfg)
    save_checkpoint(params, args.out, method=method_token(cfg.method))
    print(f"trained {method_token(cfg.method)} for {cfg.opt.steps} steps; "
          f"checkpoint at {args.out}")
    return 0


def cmd_eval(args) -> int:
    cfg = load_experiment_config(args.config)
    suite = standard_suite(_check_suite_token(args.suite))
    if args.data:
        corpus, _ = load_corpus(args.data)
    else:
        corpus = gen_corpus(cfg.synth_test)
    lines = ["architecture,method,noise,suite,drop_param,wer,ci_halfwidth"]
    for ckpt_path in args.checkpoints:
        params, method = load_checkpoint(ckpt_path)
        arch = cfg.architecture_label
        if method == "AudioBaseline":
            dists = suite.distributions[:1]
        else:
            dists = suite.distributions
        for dist in dists:
            result = evaluate_model(
                params, corpus, dist, cfg.eval_seed,
                resamples=cfg.resamples,
                max_symbols_per_frame=cfg.max_symbols_per_frame)
            lines.append(
                f"{arch},{method},{cfg.noise_label},{suite.name},"
                f"{dist.drop_param!r},{result.wer!r},{result.ci_halfwidth!r}")
        print(f"evaluated {method} on {suite.name} ({ckpt_path})")
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"results at {args.out}")
    return 0


def cmd_verdict(args) -> int:
    matrices = load_fixture(args.results)
    verdicts = [check_robust(m) for m in matrices]
    print(render_report(matrices, verdicts))
    if args.out:
        Path(args.out).write_text(verdicts_csv(matrices, verdicts))
    if all(v.robust for v in verdicts):
        print("✓ robust")
        return 0
    bad = sum(1 for v in verdicts if not v.robust)
    print(f"✗ not robust: {bad} of {len(verdicts)} matrices have violations")
    return 3


def cmd_reproduce_paper(args) -> int:
    fixtures = Path(args.fixtures) if args.fixtures else package_files("avrobust") / "fixtures"
    matrices = load_fixture(str(fixtures / "paper_results.csv"))
    expected = load_expected_verdicts(str(fixtures / "paper_verdicts.csv"))
    by_key = {(m.architecture, m.method, m.noise, m.suite.name): m for m in matrices}
    mismatches = []
    for key, flag in sorted(expected.items()):
        if key not in by_key:
            raise FixtureError(f"expected verdict for missing matrix {key}")
        got = check_robust(by_key[key]).robust
        if got != flag:
            mismatches.append((key, flag, got))
    per_table: dict[tuple[str, str], int] = {}
    for (_, _, noise, suite_name) in expected:
        per_table[(noise, suite_name)] = per_table.get((noise, suite_name), 0) + 1
    for (noise, suite_name), count in sorted(per_table.items()):
        print(f"  {noise:>6} {suite_name:<9} {count} verdicts")
    if mismatches:
        for key, want, got in mismatches:
            print(f"MISMATCH {key}: expected {'robust' if want else 'not robust'}, "
                  f"computed {'robust' if got else 'not robust'}")
        print(f"{len(mismatches)} of {len(expected)} verdicts disagree")
        return 2
    print(f"all {len(expected)} verdicts match")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avrobust",
        description="Missing-video robustness experiments for a toy AV transducer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic corpus file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--split", choices=("train", "test"), default="train")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train one method and save a checkpoint")
    p.add_argument("--config", required=True)
    p.add_argument("--method", choices=METHOD_TOKENS)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate checkpoints across a masked suite")
    p.add_argument("checkpoints", nargs="+")
    p.add_argument("--config", required=True)
    p.add_argument("--suite", required=True)
    p.add_argument("--data", help="corpus file; defaults to the config's test split")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verdict", help="robustness verdicts for a results CSV")
    p.add_argument("results")
    p.add_argument("--out", help="write verdict rows as CSV")
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("reproduce-paper",
                       help="recompute the shipped fixture verdicts and diff them")
    p.add_argument("--fixtures", help="fixture directory; defaults to the packaged one")
    p.set_defaults(func=cmd_reproduce_paper)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FixtureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
