"""Recognizer network with exact reverse-mode gradients, in plain numpy.

Single-sequence (T x D) float64 computation: an adapter of linear layers, five
residual convolutional blocks over time (with optional voicing injection after
the first block), bidirectional gated recurrent blocks, and a linear classifier.
No temporal striding anywhere, so frame t of the logits lines up with frame t
of the input.
"""

from __future__ import annotations

import io
import json
import struct
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional

import numpy as np

VOICING_DIM = 3
CHECKPOINT_MAGIC = b"ARTPHONCKPT1"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class RecognizerConfig:
    vocab_size: int
    input_dim: int = 1000
    adapter_dims: tuple[int, ...] = (256, 80)  # () feeds the input straight to conv
    conv_blocks: int = 5
    conv_channels: int = 80
    conv_kernel: int = 5
    activation: str = "tanh"
    recurrent_blocks: int = 3
    hidden_size: int = 128
    bidirectional: bool = True
    classifier_hidden: tuple[int, ...] = (128,)
    use_voicing: bool = False
    logit_noise_std: float = 0.1

    def __post_init__(self):
        if self.conv_kernel % 2 != 1:
            raise ValueError("conv kernel width must be odd (same-padding, stride 1)")
        if self.activation not in ("tanh", "relu"):
            raise ValueError(f"unknown activation {self.activation!r}")
        last = self.adapter_dims[-1] if self.adapter_dims else self.input_dim
        if last != self.conv_channels:
            raise ValueError(
                f"adapter output {last} must match conv channel count {self.conv_channels}"
            )
        if self.logit_noise_std < 0:
            raise ValueError("logit_noise_std must be non-negative")

    @property
    def recurrent_out(self) -> int:
        return self.hidden_size * (2 if self.bidirectional else 1)

    @property
    def classifier_dims(self) -> tuple[int, ...]:
        """Full classifier layer widths, ending in the vocabulary size."""
        return (*self.classifier_hidden, self.vocab_size)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "RecognizerConfig":
        raw = json.loads(text)
        for key in ("adapter_dims", "classifier_hidden"):
            raw[key] = tuple(raw[key])
        return RecognizerConfig(**raw)


@dataclass
class ForwardTrace:
    """Activations cached by forward for the exact backward pass."""

    logits: np.ndarray  # (T, V), noise included in train mode
    penultimate: np.ndarray  # (T, D), classifier-block input
    stages: list  # (kind, cache) pairs in forward order
    train: bool


# ---------------------------------------------------------------------------
# Primitive layers: forward returns (y, cache), backward returns gradients.


def _act_forward(x: np.ndarray, kind: str):
    if kind == "tanh":
        y = np.tanh(x)
        return y, y
    y = np.maximum(x, 0.0)
    return y, (x > 0)


def _act_backward(dy: np.ndarray, cache, kind: str) -> np.ndarray:
    if kind == "tanh":
        return dy * (1.0 - cache * cache)
    return dy * cache


def _linear_forward(x: np.ndarray, W: np.ndarray, b: np.ndarray):
    return x @ W + b, x


def _linear_backward(dy: np.ndarray, x: np.ndarray, W: np.ndarray):
    return dy @ W.T, x.T @ dy, dy.sum(axis=0)


def _conv1d_forward(x: np.ndarray, W: np.ndarray, b: np.ndarray):
    """Same-padded stride-1 convolution over time; x (T, Cin), W (K, Cin, Cout)."""
    T = x.shape[0]
    K = W.shape[0]
    pad = K // 2
    xp = np.zeros((T + K - 1, x.shape[1]))
    xp[pad : pad + T] = x
    y = np.tile(b, (T, 1))
    for k in range(K):
        y += xp[k : k + T] @ W[k]
    return y, xp


def _conv1d_backward(dy: np.ndarray, xp: np.ndarray, W: np.ndarray):
    T = dy.shape[0]
    K = W.shape[0]
    pad = K // 2
    dW = np.empty_like(W)
    dxp = np.zeros_like(xp)
    for k in range(K):
        dW[k] = xp[k : k + T].T @ dy
        dxp[k : k + T] += dy @ W[k].T
    return dxp[pad : pad + T], dW, dy.sum(axis=0)


_NORM_EPS = 1e-5


def _norm_forward(x: np.ndarray, gamma: np.ndarray, beta: np.ndarray):
    """Per-frame feature normalization with learned scale and shift."""
    mu = x.mean(axis=1, keepdims=True)
    var = x.var(axis=1, keepdims=True)
    inv = 1.0 / np.sqrt(var + _NORM_EPS)
    xhat = (x - mu) * inv
    return gamma * xhat + beta, (xhat, inv)


def _norm_backward(dy: np.ndarray, cache, gamma: np.ndarray):
    xhat, inv = cache
    C = xhat.shape[1]
    dgamma = (dy * xhat).sum(axis=0)
    dbeta = dy.sum(axis=0)
    dxhat = dy * gamma
    dx = (
        inv
        / C
        * (
            C * dxhat
            - dxhat.sum(axis=1, keepdims=True)
            - xhat * (dxhat * xhat).sum(axis=1, keepdims=True)
        )
    )
    return dx, dgamma, dbeta


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _gru_forward(x: np.ndarray, p: dict[str, np.ndarray], reverse: bool):
    """One GRU direction over (T, Din); h_0 = 0. Returns outputs and caches."""
    if reverse:
        x = x[::-1]
    T = x.shape[0]
    H = p["Uz"].shape[0]
    xz = x @ p["Wz"] + p["bz"]
    xr = x @ p["Wr"] + p["br"]
    xn = x @ p["Wn"] + p["bn"]
    Z = np.empty((T, H))
    R = np.empty((T, H))
    N = np.empty((T, H))
    Hprev = np.empty((T, H))
    Hout = np.empty((T, H))
    h = np.zeros(H)
    for t in range(T):
        Hprev[t] = h
        z = _sigmoid(xz[t] + h @ p["Uz"])
        r = _sigmoid(xr[t] + h @ p["Ur"])
        n = np.tanh(xn[t] + (r * h) @ p["Un"])
        h = (1.0 - z) * n + z * h
        Z[t], R[t], N[t], Hout[t] = z, r, n, h
    y = Hout[::-1] if reverse else Hout
    return y, (x, Z, R, N, Hprev)


def _gru_backward(dy: np.ndarray, cache, p: dict[str, np.ndarray], reverse: bool):
    x, Z, R, N, Hprev = cache
    if reverse:
        dy = dy[::-1]
    T, H = Z.shape
    DAZ = np.empty((T, H))
    DAR = np.empty((T, H))
    DAN = np.empty((T, H))
    UzT, UrT, UnT = p["Uz"].T, p["Ur"].T, p["Un"].T
    carry = np.zeros(H)
    for t in range(T - 1, -1, -1):
        dh = dy[t] + carry
        z, r, n, h_prev = Z[t], R[t], N[t], Hprev[t]
        dan = dh * (1.0 - z) * (1.0 - n * n)
        drh = dan @ UnT
        dar = drh * h_prev * r * (1.0 - r)
        daz = dh * (h_prev - n) * z * (1.0 - z)
        DAZ[t], DAR[t], DAN[t] = daz, dar, dan
        carry = dh * z + drh * r + dar @ UrT + daz @ UzT
    grads = {
        "Wz": x.T @ DAZ,
        "Wr": x.T @ DAR,
        "Wn": x.T @ DAN,
        "Uz": Hprev.T @ DAZ,
        "Ur": Hprev.T @ DAR,
        "Un": (R * Hprev).T @ DAN,
        "bz": DAZ.sum(axis=0),
        "br": DAR.sum(axis=0),
        "bn": DAN.sum(axis=0),
    }
    dx = DAZ @ p["Wz"].T + DAR @ p["Wr"].T + DAN @ p["Wn"].T
    if reverse:
        dx = dx[::-1]
    return dx, grads


GRU_PARAM_NAMES = ("Wz", "Wr", "Wn", "Uz", "Ur", "Un", "bz", "br", "bn")


# ---------------------------------------------------------------------------
# Network


class Recognizer:
    """Builds, runs, and differentiates the recognizer for one configuration."""

    def __init__(self, cfg: RecognizerConfig):
        self.cfg = cfg

    # -- parameters

    def _adapter_widths(self) -> list[tuple[int, int]]:
        dims = [self.cfg.input_dim, *self.cfg.adapter_dims]
        return list(zip(dims[:-1], dims[1:]))

    def _classifier_widths(self) -> list[tuple[int, int]]:
        dims = [self.cfg.recurrent_out, *self.cfg.classifier_dims]
        return list(zip(dims[:-1], dims[1:]))

    def _rnn_input_dims(self) -> list[int]:
        dims = [self.cfg.conv_channels]
        for _ in range(self.cfg.recurrent_blocks - 1):
            dims.append(self.cfg.recurrent_out)
        return dims

    def _directions(self) -> tuple[str, ...]:
        return ("fw", "bw") if self.cfg.bidirectional else ("fw",)

    def init_parameters(self, seed: int) -> dict[str, np.ndarray]:
        """Deterministic init: fan-in-scaled uniform weights, zero biases,
        orthogonal recurrent state matrices, unit norm scales."""
        rng = np.random.default_rng(seed)
        params: dict[str, np.ndarray] = {}

        def uniform(shape, fan_in):
            limit = 1.0 / np.sqrt(fan_in)
            return rng.uniform(-limit, limit, size=shape)

        def orthogonal(n):
            q, r = np.linalg.qr(rng.standard_normal((n, n)))
            return q * np.sign(np.diag(r))

        for i, (din, dout) in enumerate(self._adapter_widths()):
            params[f"adapter{i}.W"] = uniform((din, dout), din)
            params[f"adapter{i}.b"] = np.zeros(dout)
        C, K = self.cfg.conv_channels, self.cfg.conv_kernel
        for k in range(self.cfg.conv_blocks):
            params[f"conv{k}.W"] = uniform((K, C, C), K * C)
            params[f"conv{k}.b"] = np.zeros(C)
            params[f"conv{k}.gamma"] = np.ones(C)
            params[f"conv{k}.beta"] = np.zeros(C)
        if self.cfg.use_voicing:
            params["voicing.P"] = uniform((VOICING_DIM, C), VOICING_DIM)
        H = self.cfg.hidden_size
        for k, din in enumerate(self._rnn_input_dims()):
            for d in self._directions():
                prefix = f"rnn{k}.{d}"
                for gate in ("z", "r", "n"):
                    params[f"{prefix}.W{gate}"] = uniform((din, H), din)
                for gate in ("z", "r", "n"):
                    params[f"{prefix}.U{gate}"] = orthogonal(H)
                for gate in ("z", "r", "n"):
                    params[f"{prefix}.b{gate}"] = np.zeros(H)
        for i, (din, dout) in enumerate(self._classifier_widths()):
            params[f"cls{i}.W"] = uniform((din, dout), din)
            params[f"cls{i}.b"] = np.zeros(dout)
        return params

    def _gru_params(self, params, block: int, direction: str) -> dict[str, np.ndarray]:
        prefix = f"rnn{block}.{direction}"
        return {name: params[f"{prefix}.{name}"] for name in GRU_PARAM_NAMES}

    # -- forward / backward

    def forward(
        self,
        params: dict[str, np.ndarray],
        features: np.ndarray,
        voicing: Optional[np.ndarray] = None,
        train: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> ForwardTrace:
        cfg = self.cfg
        x = np.asarray(features, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != cfg.input_dim:
            raise ValueError(f"features must be (T, {cfg.input_dim}), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("non-finite features")
        if cfg.use_voicing:
            if voicing is None:
                raise ValueError("config uses voicing but no voicing track given")
            voicing = np.asarray(voicing, dtype=np.float64)
            if voicing.shape != (x.shape[0], VOICING_DIM):
                raise ValueError(
                    f"voicing must be ({x.shape[0]}, {VOICING_DIM}), got {voicing.shape}"
                )

        stages: list = []
        n_adapter = len(self._adapter_widths())
        for i in range(n_adapter):
            x, lin_cache = _linear_forward(x, params[f"adapter{i}.W"], params[f"adapter{i}.b"])
            act_cache = None
            if i < n_adapter - 1:
                x, act_cache = _act_forward(x, cfg.activation)
            stages.append((f"adapter{i}", (lin_cache, act_cache)))

        for k in range(cfg.conv_blocks):
            y, conv_cache = _conv1d_forward(x, params[f"conv{k}.W"], params[f"conv{k}.b"])
            y, act_cache = _act_forward(y, cfg.activation)
            y, norm_cache = _norm_forward(y, params[f"conv{k}.gamma"], params[f"conv{k}.beta"])
            x = x + y
            stages.append((f"conv{k}", (conv_cache, act_cache, norm_cache)))
            if k == 0 and cfg.use_voicing:
                x = x + voicing @ params["voicing.P"]
                stages.append(("voicing", voicing))

        for k in range(cfg.recurrent_blocks):
            outs = []
            caches = []
            for d in self._directions():
                y, cache = _gru_forward(x, self._gru_params(params, k, d), reverse=(d == "bw"))
                outs.append(y)
                caches.append(cache)
            x = np.concatenate(outs, axis=1) if len(outs) > 1 else outs[0]
            stages.append((f"rnn{k}", caches))

        penultimate = x
        n_cls = len(self._classifier_widths())
        for i in range(n_cls):
            x, lin_cache = _linear_forward(x, params[f"cls{i}.W"], params[f"cls{i}.b"])
            act_cache = None
            if i < n_cls - 1:
                x, act_cache = _act_forward(x, cfg.activation)
            stages.append((f"cls{i}", (lin_cache, act_cache)))

        logits = x
        if train and cfg.logit_noise_std > 0:
            if rng is None:
                raise ValueError("train-mode forward needs an rng for logit noise")
            logits = logits + rng.normal(scale=cfg.logit_noise_std, size=logits.shape)

        return ForwardTrace(
            logits=logits, penultimate=penultimate, stages=stages, train=train
        )

    def backward(
        self,
        trace: ForwardTrace,
        params: dict[str, np.ndarray],
        dlogits: np.ndarray,
    ) -> tuple[dict[str, np.ndarray], np.ndarray]:
        """Exact gradients of loss wrt every parameter plus the input features.

        Train-mode logit noise is additive, so the gradient passes through it
        unchanged.
        """
        cfg = self.cfg
        grads = {name: np.zeros_like(arr) for name, arr in params.items()}
        dx = np.asarray(dlogits, dtype=np.float64)
        for kind, cache in reversed(trace.stages):
            if kind.startswith("cls") or kind.startswith("adapter"):
                lin_cache, act_cache = cache
                if act_cache is not None:
                    dx = _act_backward(dx, act_cache, cfg.activation)
                dx, dW, db = _linear_backward(dx, lin_cache, params[f"{kind}.W"])
                grads[f"{kind}.W"] += dW
                grads[f"{kind}.b"] += db
            elif kind == "voicing":
                grads["voicing.P"] += cache.T @ dx
            elif kind.startswith("conv"):
                conv_cache, act_cache, norm_cache = cache
                dbranch, dgamma, dbeta = _norm_backward(
                    dx, norm_cache, params[f"{kind}.gamma"]
                )
                grads[f"{kind}.gamma"] += dgamma
                grads[f"{kind}.beta"] += dbeta
                dbranch = _act_backward(dbranch, act_cache, cfg.activation)
                dskip, dW, db = _conv1d_backward(dbranch, conv_cache, params[f"{kind}.W"])
                grads[f"{kind}.W"] += dW
                grads[f"{kind}.b"] += db
                dx = dx + dskip
            elif kind.startswith("rnn"):
                block = int(kind[3:])
                H = cfg.hidden_size
                dirs = self._directions()
                dx_next = None
                for j, d in enumerate(dirs):
                    dy = dx[:, j * H : (j + 1) * H]
                    dxd, gru_grads = _gru_backward(
                        dy, cache[j], self._gru_params(params, block, d), reverse=(d == "bw")
                    )
                    for name, g in gru_grads.items():
                        grads[f"rnn{block}.{d}.{name}"] += g
                    dx_next = dxd if dx_next is None else dx_next + dxd
                dx = dx_next
            else:
                raise AssertionError(f"unknown stage {kind!r}")
        return grads, dx


# ---------------------------------------------------------------------------
# Checkpoints


def save_checkpoint(path: str | Path, cfg: RecognizerConfig, params: dict[str, np.ndarray]) -> None:
    """Versioned binary: magic, version, JSON config, then named float64-LE
    arrays with shape headers, in declaration order."""
    buf = io.BytesIO()
    buf.write(CHECKPOINT_MAGIC)
    buf.write(struct.pack("<I", CHECKPOINT_VERSION))
    cfg_bytes = cfg.to_json().encode("utf-8")
    buf.write(struct.pack("<I", len(cfg_bytes)))
    buf.write(cfg_bytes)
    buf.write(struct.pack("<I", len(params)))
    for name, arr in params.items():
        name_bytes = name.encode("utf-8")
        buf.write(struct.pack("<I", len(name_bytes)))
        buf.write(name_bytes)
        buf.write(struct.pack("<I", arr.ndim))
        for dim in arr.shape:
            buf.write(struct.pack("<Q", dim))
        buf.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    Path(path).write_bytes(buf.getvalue())


def load_checkpoint(path: str | Path) -> tuple[RecognizerConfig, dict[str, np.ndarray]]:
    raw = Path(path).read_bytes()
    view = memoryview(raw)
    if bytes(view[: len(CHECKPOINT_MAGIC)]) != CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not a recognizer checkpoint")
    offset = len(CHECKPOINT_MAGIC)

    def take(fmt):
        nonlocal offset
        size = struct.calcsize(fmt)
        values = struct.unpack_from(fmt, view, offset)
        offset += size
        return values[0] if len(values) == 1 else values

    version = take("<I")
    if version != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {version}")
    cfg_len = take("<I")
    cfg = RecognizerConfig.from_json(bytes(view[offset : offset + cfg_len]).decode("utf-8"))
    offset += cfg_len
    n_params = take("<I")
    params: dict[str, np.ndarray] = {}
    for _ in range(n_params):
        name_len = take("<I")
        name = bytes(view[offset : offset + name_len]).decode("utf-8")
        offset += name_len
        ndim = take("<I")
        shape = tuple(take("<Q") for _ in range(ndim))
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(view, dtype="<f8", count=count, offset=offset).reshape(shape)
        offset += count * 8
        params[name] = arr.copy()
    return cfg, params
