"""Embedding and extraction of image bits in audio frames.

One watermark bit goes into one frame: the frame's leading transform
coefficients are reshaped to a small matrix, and the bit is written by
nudging the matrix's largest singular value up (bit 1) or down (bit 0)
by the watermark strength. Extraction is non-blind: it compares the
current largest singular value against the value saved at embed time.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .audio import AudioSignal
from .errors import (
    CapacityError,
    ConfigError,
    IneligibleFrameError,
    KeyFormatError,
    ValidationError,
)
from .transform import GraphConfig, TransformPlan, forward, inverse, make_plan

KEY_FORMAT_VERSION = 1


@dataclass(frozen=True)
class EmbedParams:
    """Watermark strength and coefficient budget for embedding."""

    ws: float = 0.05
    coeff_fraction: float = 0.4
    graph: GraphConfig = field(default_factory=GraphConfig)

    def __post_init__(self):
        if not self.ws > 0:
            raise ConfigError(f"watermark strength must be > 0, got {self.ws!r}")
        if not 0 < self.coeff_fraction <= 1:
            raise ConfigError(
                f"coeff_fraction must be in (0, 1], got {self.coeff_fraction!r}")
        object.__setattr__(self, "ws", float(self.ws))
        object.__setattr__(self, "coeff_fraction", float(self.coeff_fraction))
        if self.coeff_count < 1:
            raise ConfigError(
                f"coeff_fraction {self.coeff_fraction} keeps no coefficients "
                f"of a {self.graph.frame_size}-sample frame")

    @property
    def coeff_count(self) -> int:
        # round half up, so the default 0.4 of a 10-sample frame keeps 4
        return int(math.floor(self.coeff_fraction * self.graph.frame_size + 0.5))


@dataclass(frozen=True, eq=False)
class WatermarkImage:
    """Binary image payload, bits stored row-major."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValidationError("watermark dimensions must be positive")
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size != self.width * self.height:
            raise ValidationError(
                f"expected {self.width * self.height} bits, got {bits.size}")
        if not np.isin(bits, (0, 1)).all():
            raise ValidationError("watermark bits must be 0 or 1")
        bits = bits.astype(np.uint8)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    def grid(self) -> np.ndarray:
        """Bits as a height x width array."""
        return self.bits.reshape(self.height, self.width)


class FrameRecord(NamedTuple):
    """Per-bit key entry: which frame, and its pre-embedding largest singular value."""

    frame_index: int
    s_max_original: float


@dataclass(frozen=True)
class EmbeddingKey:
    """Non-blind side channel written at embed time.

    Record i belongs to watermark bit i (row-major); frame indices are
    strictly increasing.
    """

    format_version: int
    sample_rate: int
    params: EmbedParams
    watermark_width: int
    watermark_height: int
    records: tuple

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        expected = self.watermark_width * self.watermark_height
        if len(self.records) != expected:
            raise KeyFormatError(
                f"key has {len(self.records)} records, watermark needs {expected}")
        indices = [rec.frame_index for rec in self.records]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise KeyFormatError("key frame indices must be strictly increasing")


@dataclass(frozen=True, eq=False)
class WatermarkedResult:
    """Watermarked signal plus the key needed to read it back."""

    signal: AudioSignal
    key: EmbeddingKey


def frame_signal(signal: AudioSignal, frame_size: int) -> np.ndarray:
    """Split into consecutive non-overlapping frames, dropping the tail.

    Returns a (frame_count, frame_size) view of the samples.
    """
    total = len(signal)
    if total < frame_size:
        raise ValidationError(
            f"signal has {total} samples, need at least {frame_size} for one frame")
    count = total // frame_size
    return signal.samples[: count * frame_size].reshape(count, frame_size)


def frame_energy(frame) -> float:
    """Sum of squared samples."""
    frame = np.asarray(frame, dtype=np.float64)
    return float(frame @ frame)


def _svd_shape(k: int):
    # largest divisor of k not exceeding sqrt(k), so the matrix is as
    # square as possible and prime k falls back to a single row
    for rows in range(math.isqrt(k), 0, -1):
        if k % rows == 0:
            return rows, k // rows
    return 1, k


def reshape_for_svd(coeffs) -> np.ndarray:
    """Row-major reshape of k coefficients into the squarest r x c matrix."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    rows, cols = _svd_shape(coeffs.size)
    return coeffs.reshape(rows, cols)


def _leading_smax(plan, frames, k):
    # batched largest singular value of the reshaped leading-k
    # coefficients of every frame
    coeffs = frames @ plan.basis
    rows, cols = _svd_shape(k)
    mats = coeffs[:, :k].reshape(len(frames), rows, cols)
    return np.linalg.svd(mats, compute_uv=False)[:, 0]


def select_frames(signal: AudioSignal, params: EmbedParams, bit_count: int,
                  plan: TransformPlan) -> np.ndarray:
    """Pick the frames that will each carry one watermark bit.

    Frames whose largest singular value does not exceed the watermark
    strength cannot take a bit-0 shift and are ineligible. Among the
    rest, the ``bit_count`` highest-energy frames win (ties to the lower
    index); the result is sorted by ascending frame index.
    """
    if bit_count < 1:
        raise ValidationError(f"bit_count must be >= 1, got {bit_count}")
    frames = frame_signal(signal, plan.frame_size)
    energies = np.einsum("ij,ij->i", frames, frames)
    smax = _leading_smax(plan, frames, params.coeff_count)
    eligible = np.flatnonzero(smax > params.ws)
    if eligible.size < bit_count:
        raise CapacityError(eligible=int(eligible.size), required=int(bit_count))
    ranked = eligible[np.lexsort((eligible, -energies[eligible]))]
    return np.sort(ranked[:bit_count])


def embed_bit(frame, bit, params: EmbedParams, plan: TransformPlan):
    """Embed one bit into one frame.

    Returns the modified frame and the frame's original largest singular
    value, which the extractor will need.
    """
    if bit not in (0, 1):
        raise ValidationError(f"bit must be 0 or 1, got {bit!r}")
    coeffs = forward(plan, frame)
    k = params.coeff_count
    u, s, vt = np.linalg.svd(reshape_for_svd(coeffs[:k]), full_matrices=False)
    s_original = float(s[0])
    if s_original <= params.ws:
        raise IneligibleFrameError(
            f"largest singular value {s_original:.6g} does not exceed "
            f"watermark strength {params.ws:.6g}")
    shifted = s.copy()
    shifted[0] = s_original + params.ws if bit else s_original - params.ws
    modified = (u * shifted) @ vt
    new_coeffs = coeffs.copy()
    new_coeffs[:k] = modified.reshape(-1)
    return inverse(plan, new_coeffs), s_original


def extract_bit(frame, s_max_original: float, params: EmbedParams,
                plan: TransformPlan) -> int:
    """Read one bit back by comparing against the stored singular value."""
    coeffs = forward(plan, frame)
    mat = reshape_for_svd(coeffs[: params.coeff_count])
    smax = float(np.linalg.svd(mat, compute_uv=False)[0])
    return 1 if smax > s_max_original else 0


def embed(host: AudioSignal, watermark: WatermarkImage,
          params: EmbedParams | None = None) -> WatermarkedResult:
    """Embed a binary image into the host signal.

    Bits map row-major onto the selected frames in ascending frame
    order. Frames that carry no bit keep their exact samples; modified
    frames are clamped to [-1, 1].
    """
    params = params if params is not None else EmbedParams()
    plan = make_plan(params.graph)
    chosen = select_frames(host, params, watermark.bits.size, plan)
    samples = host.samples.copy()
    size = plan.frame_size
    records = []
    for index, bit in zip(chosen, watermark.bits):
        start = index * size
        new_frame, s_original = embed_bit(samples[start:start + size], int(bit),
                                          params, plan)
        samples[start:start + size] = np.clip(new_frame, -1.0, 1.0)
        records.append(FrameRecord(int(index), s_original))
    key = EmbeddingKey(
        format_version=KEY_FORMAT_VERSION,
        sample_rate=host.sample_rate,
        params=params,
        watermark_width=watermark.width,
        watermark_height=watermark.height,
        records=tuple(records),
    )
    return WatermarkedResult(signal=AudioSignal(samples, host.sample_rate), key=key)


def extract(signal: AudioSignal, key: EmbeddingKey) -> WatermarkImage:
    """Recover the watermark image from a (possibly attacked) signal.

    A signal too short to reach the last keyed frame is zero-padded at
    the end before framing. Each bit is read independently from its own
    frame.
    """
    plan = make_plan(key.params.graph)
    size = plan.frame_size
    needed = (key.records[-1].frame_index + 1) * size
    samples = signal.samples
    if samples.size < needed:
        samples = np.concatenate([samples, np.zeros(needed - samples.size)])
    frames = samples[: (samples.size // size) * size].reshape(-1, size)
    bits = np.empty(len(key.records), dtype=np.uint8)
    for i, record in enumerate(key.records):
        bits[i] = extract_bit(frames[record.frame_index], record.s_max_original,
                              key.params, plan)
    return WatermarkImage(key.watermark_width, key.watermark_height, bits)
