"""Desk-scale audiovisual transducer with hand-derived gradients.

The encoder stacks an audiovisual recurrence on top of an audio-only one.
An audio frame passes through a linear frontend and a single-layer tanh
recurrence (the audio path). The audiovisual path fuses those per-frame
audio features with the video, by concatenation or by single-head
scaled-dot-product attention, and runs a second tanh recurrence. The
forward mode decides who sees what:

  audio-only     the audio path alone; video is never read
  fused          the audiovisual path, whatever the presence flags say
  cascade-utt    audio path when every frame is absent, else the AV path
  cascade-frame  per-frame choice between the two paths by presence flag

A stateless previous-label embedding plays the role of the language model
and a one-layer tanh joiner produces the joint log-probabilities consumed
by the transducer loss. Everything is float64 numpy; training is plain
Adam, deterministic for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .masks import Utterance, apply_mask
from .metrics import WerResult, corpus_wer
from .rnnt import JointLattice, greedy_decode, rnnt_loss_and_grad
from .suites import TestDistribution

__all__ = [
    "ModelConfig",
    "ModelParams",
    "AudioOnly",
    "Vanilla",
    "DropoutUtt",
    "DropoutFrame",
    "AvDropoutUtt",
    "CascadeUtt",
    "CascadeFrame",
    "TwoPass",
    "TrainingMethod",
    "OptimizerConfig",
    "AdamState",
    "method_token",
    "mode_for_method",
    "param_shapes",
    "init_params",
    "fuse_cat",
    "fuse_cm",
    "augment",
    "encoder_forward",
    "cascade_forward",
    "forward_joint",
    "loss_and_grads",
    "adam_step",
    "train",
    "two_pass_train",
    "decode_utterance",
    "evaluate_model",
    "save_checkpoint",
    "load_checkpoint",
]

MODES = ("audio-only", "fused", "cascade-utt", "cascade-frame")
FUSIONS = ("cat", "cm")

# Parameter groups the audio-only path reads; the rest belong to the
# audiovisual stage and are the trainable set of a second-pass run.
AUDIO_PATH_GROUPS = ("audio_frontend", "am", "embed", "joiner")


@dataclass(frozen=True)
class ModelConfig:
    audio_dim: int
    video_dim: int
    vocab: int
    hidden: int = 16
    fusion: str = "cat"
    mode: str = "fused"

    def __post_init__(self) -> None:
        if self.fusion not in FUSIONS:
            raise ValueError(f"fusion must be one of {FUSIONS}, got {self.fusion!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if min(self.audio_dim, self.video_dim, self.hidden) < 1 or self.vocab < 1:
            raise ValueError("dimensions and vocabulary must be positive")


def param_shapes(cfg: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Array shapes in their canonical (checkpoint) order."""
    h, v1 = cfg.hidden, cfg.vocab + 1
    fused = h + cfg.video_dim if cfg.fusion == "cat" else h
    shapes: dict[str, tuple[int, ...]] = {
        "audio_frontend.w": (cfg.audio_dim, h),
        "audio_frontend.b": (h,),
        "video_frontend.w": (cfg.video_dim, h),
        "video_frontend.b": (h,),
        "am.wx": (h, h),
        "am.wh": (h, h),
        "am.b": (h,),
    }
    if cfg.fusion == "cm":
        shapes.update({"cm.wq": (h, h), "cm.wk": (h, h), "cm.wv": (h, h)})
    shapes.update({
        "avm.wx": (fused, h),
        "avm.wh": (h, h),
        "avm.b": (h,),
        "embed.table": (v1, h),
        "joiner.w": (h, v1),
        "joiner.b": (v1,),
    })
    return shapes


@dataclass
class ModelParams:
    config: ModelConfig
    arrays: dict[str, np.ndarray]

    def copy(self) -> "ModelParams":
        return ModelParams(self.config, {k: v.copy() for k, v in self.arrays.items()})


def init_params(cfg: ModelConfig, seed) -> ModelParams:
    """Uniform(-0.1, 0.1) init, drawn in canonical order from one stream."""
    rng = np.random.default_rng(seed)
    arrays = {name: rng.uniform(-0.1, 0.1, size=shape)
              for name, shape in param_shapes(cfg).items()}
    return ModelParams(cfg, arrays)


@dataclass(frozen=True)
class AudioOnly:
    pass


@dataclass(frozen=True)
class Vanilla:
    pass


@dataclass(frozen=True)
class DropoutUtt:
    drop_prob: float = 0.5

    def __post_init__(self) -> None:
        _check_prob(self.drop_prob)


@dataclass(frozen=True)
class DropoutFrame:
    drop_prob: float = 0.1

    def __post_init__(self) -> None:
        _check_prob(self.drop_prob)


@dataclass(frozen=True)
class AvDropoutUtt:
    """Keep both, drop the video, or drop the audio, per utterance."""

    keep_prob: float = 0.5
    drop_video_prob: float = 0.25
    drop_audio_prob: float = 0.25

    def __post_init__(self) -> None:
        for p in (self.keep_prob, self.drop_video_prob, self.drop_audio_prob):
            _check_prob(p)
        total = self.keep_prob + self.drop_video_prob + self.drop_audio_prob
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"branch probabilities must sum to 1, got {total}")


@dataclass(frozen=True)
class CascadeUtt:
    drop_prob: float = 0.25

    def __post_init__(self) -> None:
        _check_prob(self.drop_prob)


@dataclass(frozen=True)
class CascadeFrame:
    drop_prob: float = 0.1

    def __post_init__(self) -> None:
        _check_prob(self.drop_prob)


@dataclass(frozen=True)
class TwoPass:
    pass


TrainingMethod = Union[AudioOnly, Vanilla, DropoutUtt, DropoutFrame,
                       AvDropoutUtt, CascadeUtt, CascadeFrame, TwoPass]

_METHOD_TOKENS = {
    AudioOnly: "AudioBaseline",
    Vanilla: "Vanilla",
    DropoutUtt: "DropoutUtt",
    DropoutFrame: "DropoutFrame",
    AvDropoutUtt: "AVDropoutUtt",
    CascadeUtt: "CascadeUtt",
    CascadeFrame: "CascadeFrame",
    TwoPass: "TwoPass",
}


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")


def method_token(method: TrainingMethod) -> str:
    return _METHOD_TOKENS[type(method)]


def mode_for_method(method: TrainingMethod) -> str:
    if isinstance(method, AudioOnly):
        return "audio-only"
    if isinstance(method, (CascadeUtt, TwoPass)):
        return "cascade-utt"
    if isinstance(method, CascadeFrame):
        return "cascade-frame"
    return "fused"


def fuse_cat(audio_feat: np.ndarray, video_frame: np.ndarray) -> np.ndarray:
    """Concatenate one audio feature with one raw video frame, audio first."""
    return np.concatenate([np.asarray(audio_feat, dtype=np.float64),
                           np.asarray(video_frame, dtype=np.float64)])


def _cm_forward(audio_feats, video_feats, wq=None, wk=None, wv=None):
    a = np.asarray(audio_feats, dtype=np.float64)
    v = np.asarray(video_feats, dtype=np.float64)
    if len(a) != len(v):
        raise ValueError(f"sequence lengths differ: {len(a)} vs {len(v)}")
    q = a @ wq if wq is not None else a
    k = v @ wk if wk is not None else v
    val = v @ wv if wv is not None else v
    scale = 1.0 / math.sqrt(k.shape[1])
    scores = q @ k.T * scale
    shifted = scores - scores.max(axis=1, keepdims=True)
    weights = np.exp(shifted)
    attn = weights / weights.sum(axis=1, keepdims=True)
    out = a + attn @ val
    return out, (a, v, q, k, val, attn, scale, wq, wk, wv)


def _cm_backward(cache, d_out):
    a, v, q, k, val, attn, scale, wq, wk, wv = cache
    d_a = d_out.copy()
    d_attn = d_out @ val.T
    d_val = attn.T @ d_out
    d_scores = attn * (d_attn - (d_attn * attn).sum(axis=1, keepdims=True))
    d_q = d_scores @ k * scale
    d_k = d_scores.T @ q * scale
    grads = {}
    if wq is None:
        d_a += d_q
    else:
        d_a += d_q @ wq.T
        grads["wq"] = a.T @ d_q
    d_v = np.zeros_like(v)
    if wk is None:
        d_v += d_k
    else:
        d_v += d_k @ wk.T
        grads["wk"] = v.T @ d_k
    if wv is None:
        d_v += d_val
    else:
        d_v += d_val @ wv.T
        grads["wv"] = v.T @ d_val
    return d_a, d_v, grads


def fuse_cm(audio_feats, video_feats, wq=None, wk=None, wv=None) -> np.ndarray:
    """Single-head attention with a residual onto the audio features.

    Audio rows are the queries, video rows the keys and values, optionally
    through the given linear maps; scores are scaled by 1/sqrt(key width).
    """
    return _cm_forward(audio_feats, video_feats, wq, wk, wv)[0]


def _rnn_forward(x, wx, wh, b):
    xw = x @ wx + b
    n, h_dim = xw.shape
    out = np.empty((n, h_dim))
    h = np.zeros(h_dim)
    for t in range(n):
        h = np.tanh(xw[t] + h @ wh)
        out[t] = h
    return out


def _rnn_backward(x, out, wx, wh, d_out):
    n, h_dim = out.shape
    d_x = np.empty_like(x)
    d_wx = np.zeros_like(wx)
    d_wh = np.zeros_like(wh)
    d_b = np.zeros(h_dim)
    carry = np.zeros(h_dim)
    for t in range(n - 1, -1, -1):
        da = (d_out[t] + carry) * (1.0 - out[t] ** 2)
        d_wx += np.outer(x[t], da)
        if t > 0:
            d_wh += np.outer(out[t - 1], da)
            carry = wh @ da
        d_b += da
        d_x[t] = wx @ da
    return d_x, d_wx, d_wh, d_b


def encoder_forward(params: ModelParams, utt: Utterance, mode: str | None = None):
    """Per-frame encoder outputs plus the cache its backward pass needs."""
    cfg = params.config
    arr = params.arrays
    mode = cfg.mode if mode is None else mode
    af = utt.audio @ arr["audio_frontend.w"] + arr["audio_frontend.b"]
    am_out = _rnn_forward(af, arr["am.wx"], arr["am.wh"], arr["am.b"])
    cache = {"mode": mode, "af": af, "am_out": am_out, "utt": utt}

    present = utt.video_present
    av_wanted = mode == "fused" or (mode.startswith("cascade") and present.any())
    if mode == "audio-only" or not av_wanted:
        cache["branch"] = "ao"
        return am_out, cache

    cache["branch"] = "av"
    if cfg.fusion == "cat":
        fused = np.concatenate([am_out, utt.video], axis=1)
    else:
        vf = utt.video @ arr["video_frontend.w"] + arr["video_frontend.b"]
        fused, cm_cache = _cm_forward(am_out, vf,
                                      arr["cm.wq"], arr["cm.wk"], arr["cm.wv"])
        cache["vf"] = vf
        cache["cm_cache"] = cm_cache
    avm_out = _rnn_forward(fused, arr["avm.wx"], arr["avm.wh"], arr["avm.b"])
    cache["fused"] = fused
    cache["avm_out"] = avm_out

    if mode == "cascade-frame":
        enc = np.where(present[:, None], avm_out, am_out)
    else:
        enc = avm_out
    return enc, cache


def cascade_forward(params: ModelParams, utt: Utterance) -> np.ndarray:
    """Availability-routed encoder outputs in the model's configured mode."""
    return encoder_forward(params, utt)[0]


def _encoder_backward(params: ModelParams, cache, d_enc, grads) -> None:
    cfg = params.config
    arr = params.arrays
    utt = cache["utt"]
    am_out = cache["am_out"]

    if cache["branch"] == "ao":
        d_am_out = d_enc
    else:
        if cache["mode"] == "cascade-frame":
            present = utt.video_present[:, None]
            d_avm_out = np.where(present, d_enc, 0.0)
            d_am_out = np.where(present, 0.0, d_enc)
        else:
            d_avm_out = d_enc
            d_am_out = np.zeros_like(am_out)
        d_fused, d_wx, d_wh, d_b = _rnn_backward(
            cache["fused"], cache["avm_out"], arr["avm.wx"], arr["avm.wh"], d_avm_out)
        grads["avm.wx"] += d_wx
        grads["avm.wh"] += d_wh
        grads["avm.b"] += d_b
        if cfg.fusion == "cat":
            d_am_out = d_am_out + d_fused[:, :cfg.hidden]
        else:
            d_a, d_vf, cm_grads = _cm_backward(cache["cm_cache"], d_fused)
            d_am_out = d_am_out + d_a
            for short, g in cm_grads.items():
                grads[f"cm.{short}"] += g
            grads["video_frontend.w"] += utt.video.T @ d_vf
            grads["video_frontend.b"] += d_vf.sum(axis=0)

    d_af, d_wx, d_wh, d_b = _rnn_backward(
        cache["af"], am_out, arr["am.wx"], arr["am.wh"], d_am_out)
    grads["am.wx"] += d_wx
    grads["am.wh"] += d_wh
    grads["am.b"] += d_b
    grads["audio_frontend.w"] += utt.audio.T @ d_af
    grads["audio_frontend.b"] += d_af.sum(axis=0)


def forward_joint(params: ModelParams, encoder_outputs: np.ndarray, target):
    """Joint lattice of normalized log-probabilities, plus backward cache."""
    arr = params.arrays
    target = tuple(int(t) for t in target)
    prev = np.array((0,) + target, dtype=np.intp)
    pred = arr["embed.table"][prev]
    pre = encoder_outputs[:, None, :] + pred[None, :, :]
    hj = np.tanh(pre)
    logits = hj @ arr["joiner.w"] + arr["joiner.b"]
    peak = logits.max(axis=2, keepdims=True)
    lse = peak + np.log(np.exp(logits - peak).sum(axis=2, keepdims=True))
    log_probs = logits - lse
    lattice = JointLattice(log_probs, target)
    cache = {"prev": prev, "hj": hj, "log_probs": log_probs}
    return lattice, cache


def _joint_backward(params: ModelParams, cache, d_log_probs, grads):
    arr = params.arrays
    hj = cache["hj"]
    softmax = np.exp(cache["log_probs"])
    d_logits = d_log_probs - softmax * d_log_probs.sum(axis=2, keepdims=True)
    grads["joiner.w"] += np.einsum("tuh,tuv->hv", hj, d_logits)
    grads["joiner.b"] += d_logits.sum(axis=(0, 1))
    d_hj = d_logits @ arr["joiner.w"].T
    d_pre = d_hj * (1.0 - hj ** 2)
    d_enc = d_pre.sum(axis=1)
    d_pred = d_pre.sum(axis=0)
    np.add.at(grads["embed.table"], cache["prev"], d_pred)
    return d_enc


def loss_and_grads(params: ModelParams, utt: Utterance,
                   mode: str | None = None) -> tuple[float, dict[str, np.ndarray]]:
    """Transducer loss of one utterance and gradients for every array."""
    grads = {name: np.zeros_like(a) for name, a in params.arrays.items()}
    enc, enc_cache = encoder_forward(params, utt, mode)
    lattice, joint_cache = forward_joint(params, enc, utt.transcript)
    loss, d_log_probs = rnnt_loss_and_grad(lattice)
    d_enc = _joint_backward(params, joint_cache, d_log_probs, grads)
    _encoder_backward(params, enc_cache, d_enc, grads)
    return loss, grads


def augment(batch, method: TrainingMethod, rng) -> list[Utterance]:
    """Apply the method's training-time corruption to a batch.

    Utterance-level variants decide once per utterance, frame variants per
    frame. drop_prob is the probability of losing the video (or a frame);
    the three-way variant keeps both, zeroes the video, or zeroes the
    audio. Transcripts are never touched; audio only in the zero-audio
    branch. Presence flags follow the video.
    """
    if isinstance(method, (AudioOnly, Vanilla, TwoPass)):
        return list(batch)
    out = []
    if isinstance(method, (DropoutUtt, CascadeUtt)):
        draws = rng.random(len(batch))
        for utt, d in zip(batch, draws):
            if d < method.drop_prob:
                out.append(apply_mask(utt, np.zeros(utt.num_frames, dtype=np.int64)))
            else:
                out.append(utt)
    elif isinstance(method, (DropoutFrame, CascadeFrame)):
        for utt in batch:
            keep = (rng.random(utt.num_frames) >= method.drop_prob).astype(np.int64)
            out.append(apply_mask(utt, keep))
    elif isinstance(method, AvDropoutUtt):
        draws = rng.random(len(batch))
        for utt, d in zip(batch, draws):
            if d < method.keep_prob:
                out.append(utt)
            elif d < method.keep_prob + method.drop_video_prob:
                out.append(apply_mask(utt, np.zeros(utt.num_frames, dtype=np.int64)))
            else:
                out.append(Utterance(np.zeros_like(utt.audio), utt.video,
                                     utt.video_present, utt.transcript))
    else:
        raise TypeError(f"unknown method {method!r}")
    return out


@dataclass(frozen=True)
class OptimizerConfig:
    steps: int
    lr: float = 0.01
    batch_size: int = 8
    beta1: float = 0.9
    beta2: float = 0.97
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.steps < 0 or self.batch_size < 1 or self.lr <= 0:
            raise ValueError("bad optimizer configuration")


@dataclass
class AdamState:
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]

    @classmethod
    def zeros(cls, arrays: dict[str, np.ndarray]) -> "AdamState":
        return cls({k: np.zeros_like(a) for k, a in arrays.items()},
                   {k: np.zeros_like(a) for k, a in arrays.items()})


def adam_step(arrays, grads, state: AdamState, t: int, lr: float,
              beta1: float = 0.9, beta2: float = 0.97, eps: float = 1e-8,
              trainable=None):
    """Bias-corrected Adam update, in place; t counts from 1.

    ``trainable`` restricts the update to a subset of array names.
    """
    if t < 1:
        raise ValueError("step index t counts from 1")
    for name, a in arrays.items():
        if trainable is not None and name not in trainable:
            continue
        g = grads[name]
        state.m[name] = beta1 * state.m[name] + (1.0 - beta1) * g
        state.v[name] = beta2 * state.v[name] + (1.0 - beta2) * g * g
        m_hat = state.m[name] / (1.0 - beta1 ** t)
        v_hat = state.v[name] / (1.0 - beta2 ** t)
        a -= lr * m_hat / (np.sqrt(v_hat) + eps)
    return arrays, state


def train(corpus, method: TrainingMethod, opt: OptimizerConfig, seed,
          model_cfg: ModelConfig, *, init_arrays=None, trainable=None) -> ModelParams:
    """Minimize the mean transducer loss over augmented batches.

    Initialization, batch selection, and augmentation draw from three
    independent streams spawned from the seed, so methods whose
    augmentation is a no-op share trajectories exactly.
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("empty training corpus")
    cfg = replace(model_cfg, mode=mode_for_method(method))
    init_ss, batch_ss, augment_ss = np.random.SeedSequence(seed).spawn(3)
    if init_arrays is None:
        params = init_params(cfg, init_ss)
    else:
        params = ModelParams(cfg, {k: v.copy() for k, v in init_arrays.items()})
    batch_rng = np.random.default_rng(batch_ss)
    augment_rng = np.random.default_rng(augment_ss)
    state = AdamState.zeros(params.arrays)

    for step in range(1, opt.steps + 1):
        idx = batch_rng.integers(0, len(corpus), size=opt.batch_size)
        batch = augment([corpus[i] for i in idx], method, augment_rng)
        total = 0.0
        grad_sum = {name: np.zeros_like(a) for name, a in params.arrays.items()}
        for utt in batch:
            loss, grads = loss_and_grads(params, utt)
            total += loss
            for name, g in grads.items():
                grad_sum[name] += g
        mean_loss = total / len(batch)
        if not math.isfinite(mean_loss):
            raise RuntimeError(f"training diverged at step {step}: loss {mean_loss}")
        for name in grad_sum:
            grad_sum[name] /= len(batch)
        adam_step(params.arrays, grad_sum, state, step, opt.lr,
                  opt.beta1, opt.beta2, opt.eps, trainable=trainable)
    return params


def two_pass_train(corpus, opt: OptimizerConfig, seed,
                   model_cfg: ModelConfig) -> ModelParams:
    """Train the audio path, freeze it, then train only the AV stage.

    Pass one is exactly an audio-only training run with the same seed.
    Pass two routes everything through the audiovisual path on full video
    and updates only the video frontend, fusion, and AV recurrence; the
    audio path, embedding, and joiner stay bit-identical.
    """
    pass1 = train(corpus, AudioOnly(), opt, seed, model_cfg)
    frozen = {name for name in pass1.arrays
              if name.split(".")[0] in AUDIO_PATH_GROUPS}
    trainable = set(pass1.arrays) - frozen
    pass2 = train(corpus, Vanilla(), opt, seed, model_cfg,
                  init_arrays=pass1.arrays, trainable=trainable)
    return ModelParams(replace(model_cfg, mode="cascade-utt"), pass2.arrays)


def decode_utterance(params: ModelParams, utt: Utterance,
                     max_symbols_per_frame: int = 4) -> list[int]:
    enc, _ = encoder_forward(params, utt)
    arr = params.arrays
    embed, wj, bj = arr["embed.table"], arr["joiner.w"], arr["joiner.b"]

    def frame_scores(t, prefix):
        h = np.tanh(enc[t] + embed[prefix[-1] if prefix else 0])
        logits = h @ wj + bj
        peak = logits.max()
        return logits - (peak + math.log(np.exp(logits - peak).sum()))

    return greedy_decode(frame_scores, len(enc), max_symbols_per_frame)


def evaluate_model(params: ModelParams, corpus, dist: TestDistribution, seed,
                   *, resamples: int = 1000, level: float = 0.95,
                   max_symbols_per_frame: int = 4) -> WerResult:
    """Masked-decode the corpus under one test distribution and score it.

    Masks draw from per-utterance streams derived from (seed, index), so a
    suite evaluated with one seed reuses the same draws on every member.
    """
    pairs = []
    for i, utt in enumerate(corpus):
        rng = np.random.default_rng([seed, i])
        from .masks import sample_mask
        mask = sample_mask(dist.spec, utt.num_frames, rng)
        hyp = decode_utterance(params, apply_mask(utt, mask), max_symbols_per_frame)
        pairs.append((hyp, utt.transcript))
    return corpus_wer(pairs, resamples=resamples, seed=seed, level=level)


def save_checkpoint(params: ModelParams, path, method: str = "") -> None:
    """Flat text checkpoint: config header, then arrays in canonical order."""
    cfg = params.config
    lines = ["avckpt v1",
             f"audio_dim={cfg.audio_dim} video_dim={cfg.video_dim} "
             f"vocab={cfg.vocab} hidden={cfg.hidden} fusion={cfg.fusion} "
             f"mode={cfg.mode} method={method or '-'}"]
    for name, shape in param_shapes(cfg).items():
        a = params.arrays[name]
        lines.append(f"param {name} {' '.join(str(s) for s in a.shape)}")
        flat = a.reshape(-1)
        lines.extend(repr(float(x)) for x in flat)
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def load_checkpoint(path) -> tuple[ModelParams, str]:
    with open(path) as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0] != "avckpt v1":
        raise ValueError(f"{path}: not a checkpoint file")
    fields = dict(item.split("=", 1) for item in lines[1].split())
    method = fields.pop("method")
    cfg = ModelConfig(
        audio_dim=int(fields["audio_dim"]), video_dim=int(fields["video_dim"]),
        vocab=int(fields["vocab"]), hidden=int(fields["hidden"]),
        fusion=fields["fusion"], mode=fields["mode"])
    arrays = {}
    pos = 2
    for name, shape in param_shapes(cfg).items():
        header = lines[pos].split()
        if header[0] != "param" or header[1] != name:
            raise ValueError(f"{path}: expected param {name}, got {lines[pos]!r}")
        got_shape = tuple(int(s) for s in header[2:])
        if got_shape != shape:
            raise ValueError(f"{path}: {name} has shape {got_shape}, wanted {shape}")
        count = int(np.prod(shape)) if shape else 1
        values = [float(x) for x in lines[pos + 1:pos + 1 + count]]
        arrays[name] = np.array(values).reshape(shape)
        pos += 1 + count
    return ModelParams(cfg, arrays), ("" if method == "-" else method)
