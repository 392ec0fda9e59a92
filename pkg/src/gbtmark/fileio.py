"""File formats: PCM16 mono WAV audio, plain PBM watermark images, and
line-oriented embedding key files.

Readers reject anything outside the supported formats instead of
coercing (no down-mixing, no resampling); writers produce files the
readers round-trip exactly, up to the documented WAV quantization.
"""

import wave
from pathlib import Path

import numpy as np

from .audio import AudioSignal
from .errors import AudioFormatError, ConfigError, KeyFormatError
from .transform import GraphConfig
from .watermark import (
    KEY_FORMAT_VERSION,
    EmbeddingKey,
    EmbedParams,
    FrameRecord,
    WatermarkImage,
)

MAX_PBM_DIMENSION = 4096


def read_wav(path) -> AudioSignal:
    """Read a mono 16-bit PCM WAV file; integer sample i maps to i/32768."""
    try:
        with wave.open(str(path), "rb") as handle:
            channels = handle.getnchannels()
            sample_width = handle.getsampwidth()
            rate = handle.getframerate()
            data = handle.readframes(handle.getnframes())
    except wave.Error as exc:
        raise AudioFormatError(f"{path}: not a readable WAV file: {exc}") from exc
    except EOFError as exc:
        raise AudioFormatError(f"{path}: truncated WAV file") from exc
    if channels != 1:
        raise AudioFormatError(
            f"{path}: only mono is supported, file has {channels} channels")
    if sample_width != 2:
        raise AudioFormatError(
            f"{path}: only 16-bit PCM is supported, file has "
            f"{8 * sample_width}-bit samples")
    samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    return AudioSignal(samples, rate)


def write_wav(path, signal: AudioSignal) -> None:
    """Write mono 16-bit PCM; samples scale by 32767 and clamp."""
    pcm = np.clip(np.round(signal.samples * 32767.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(signal.sample_rate)
        handle.writeframes(pcm.tobytes())


def read_pbm(path) -> WatermarkImage:
    """Parse a plain PBM (P1) bitmap; black pixels become watermark 1 bits."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise AudioFormatError(f"{path}: not a plain-text PBM file") from exc
    # drop comments, then tokenize on whitespace
    tokens = [token
              for line in text.splitlines()
              for token in line.split("#", 1)[0].split()]
    if not tokens or tokens[0] != "P1":
        raise AudioFormatError(f"{path}: missing PBM magic 'P1'")
    if len(tokens) < 3:
        raise AudioFormatError(f"{path}: missing PBM dimensions")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise AudioFormatError(f"{path}: bad PBM dimensions "
                               f"{tokens[1]!r} x {tokens[2]!r}") from exc
    if not (0 < width <= MAX_PBM_DIMENSION and 0 < height <= MAX_PBM_DIMENSION):
        raise AudioFormatError(
            f"{path}: dimensions {width}x{height} outside 1..{MAX_PBM_DIMENSION}")
    # the raster may pack digits with or without separating whitespace
    digits = "".join(tokens[3:])
    if len(digits) != width * height or any(ch not in "01" for ch in digits):
        raise AudioFormatError(
            f"{path}: expected {width * height} raster bits, "
            f"got {len(digits)} usable characters")
    bits = np.frombuffer(digits.encode("ascii"), dtype=np.uint8) - ord("0")
    return WatermarkImage(width, height, bits)


def write_pbm(path, image: WatermarkImage) -> None:
    """Write a plain PBM (P1) file, one image row per line."""
    lines = ["P1", f"{image.width} {image.height}"]
    lines += [" ".join(str(bit) for bit in row) for row in image.grid()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


_KEY_HEADER = ("version", "sample_rate", "frame_size", "ws", "coeff_fraction",
               "w1", "w2", "wm_width", "wm_height")


def write_key(path, key: EmbeddingKey) -> None:
    """Serialize an embedding key as line-oriented text.

    Floats are printed with repr, the shortest decimal that reads back
    to the identical 64-bit value.
    """
    lines = [
        f"version {key.format_version}",
        f"sample_rate {key.sample_rate}",
        f"frame_size {key.params.graph.frame_size}",
        f"ws {key.params.ws!r}",
        f"coeff_fraction {key.params.coeff_fraction!r}",
        f"w1 {key.params.graph.w1!r}",
        f"w2 {key.params.graph.w2!r}",
        f"wm_width {key.watermark_width}",
        f"wm_height {key.watermark_height}",
    ]
    lines += [f"{rec.frame_index} {rec.s_max_original!r}" for rec in key.records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _header_value(lines, position, name, path):
    if position >= len(lines):
        raise KeyFormatError(f"{path}: truncated key header, missing {name!r}")
    parts = lines[position].split()
    if len(parts) != 2 or parts[0] != name:
        raise KeyFormatError(
            f"{path}: expected header line {name!r}, got {lines[position]!r}")
    return parts[1]


def read_key(path) -> EmbeddingKey:
    """Read an embedding key written by :func:`write_key`."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    raw = {name: _header_value(lines, i, name, path)
           for i, name in enumerate(_KEY_HEADER)}
    try:
        version = int(raw["version"])
        sample_rate = int(raw["sample_rate"])
        frame_size = int(raw["frame_size"])
        ws = float(raw["ws"])
        coeff_fraction = float(raw["coeff_fraction"])
        w1 = float(raw["w1"])
        w2 = float(raw["w2"])
        width = int(raw["wm_width"])
        height = int(raw["wm_height"])
    except ValueError as exc:
        raise KeyFormatError(f"{path}: malformed key header: {exc}") from exc
    if version != KEY_FORMAT_VERSION:
        raise KeyFormatError(
            f"{path}: key version {version} is not supported "
            f"(expected {KEY_FORMAT_VERSION})")
    records = []
    for line in lines[len(_KEY_HEADER):]:
        parts = line.split()
        if len(parts) != 2:
            raise KeyFormatError(f"{path}: bad key record {line!r}")
        try:
            records.append(FrameRecord(int(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise KeyFormatError(f"{path}: bad key record {line!r}") from exc
    try:
        params = EmbedParams(ws=ws, coeff_fraction=coeff_fraction,
                             graph=GraphConfig(frame_size=frame_size, w1=w1, w2=w2))
        return EmbeddingKey(
            format_version=version,
            sample_rate=sample_rate,
            params=params,
            watermark_width=width,
            watermark_height=height,
            records=tuple(records),
        )
    except ConfigError as exc:
        raise KeyFormatError(f"{path}: invalid key parameters: {exc}") from exc
