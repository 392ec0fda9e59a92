"""Signal-level attacks used to stress watermark extraction.

Every attack preserves the signal's length and sample rate and keeps
samples in [-1, 1]. All attacks are deterministic functions of their
parameters; the noise attack additionally takes a seed.
"""

import math
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy import signal as sps

from .audio import AudioSignal
from .errors import CodecError, ValidationError
from .fileio import read_wav, write_wav

FIR_TAP_COUNT = 127  # type I linear phase, group delay 63 samples
MP3_ALIGN_MAX_LAG = 2048
MP3_BITRATES = (16, 32, 64)

ATTACK_KINDS = ("awgn", "mp3", "lowpass", "highpass", "resample",
                "requantize", "amplitude_scale", "crop")


def _fit_length(samples, length):
    if samples.size >= length:
        return samples[:length]
    return np.concatenate([samples, np.zeros(length - samples.size)])


def awgn(signal: AudioSignal, snr_db: float, seed: int = 0) -> AudioSignal:
    """Add white Gaussian noise at the given signal-to-noise ratio in dB."""
    if not math.isfinite(snr_db):
        raise ValidationError(f"snr_db must be finite, got {snr_db!r}")
    x = signal.samples
    power = float(np.mean(x * x))
    if power == 0.0:
        raise ValidationError("SNR is undefined for a silent signal")
    sigma = math.sqrt(power / 10.0 ** (snr_db / 10.0))
    noise = np.random.default_rng(seed).normal(0.0, sigma, x.size)
    return AudioSignal(np.clip(x + noise, -1.0, 1.0), signal.sample_rate)


def _lowpass_taps(cutoff_hz, sample_rate):
    mid = (FIR_TAP_COUNT - 1) // 2
    m = np.arange(FIR_TAP_COUNT) - mid
    fc = cutoff_hz / sample_rate  # cycles per sample
    taps = 2.0 * fc * np.sinc(2.0 * fc * m) * np.hamming(FIR_TAP_COUNT)
    return taps / taps.sum()  # exact unit gain at DC


def _apply_fir(x, taps):
    # causal filter, then advance by the group delay and zero-pad the
    # tail so the output stays aligned with the input
    delay = (FIR_TAP_COUNT - 1) // 2
    filtered = sps.lfilter(taps, 1.0, x)
    out = np.zeros_like(x)
    out[: x.size - delay] = filtered[delay:]
    return out


def lowpass(signal: AudioSignal, cutoff_hz: float) -> AudioSignal:
    """Windowed-sinc FIR lowpass, compensated to zero phase.

    A cutoff at the Nyquist frequency is allowed and degenerates to an
    identity filter.
    """
    nyquist = signal.sample_rate / 2.0
    if not 0 < cutoff_hz <= nyquist:
        raise ValidationError(
            f"lowpass cutoff must be in (0, {nyquist:g}] Hz, got {cutoff_hz!r}")
    taps = _lowpass_taps(cutoff_hz, signal.sample_rate)
    out = _apply_fir(signal.samples, taps)
    return AudioSignal(np.clip(out, -1.0, 1.0), signal.sample_rate)


def highpass(signal: AudioSignal, cutoff_hz: float) -> AudioSignal:
    """Spectral-inversion complement of the lowpass filter (zero gain at DC)."""
    nyquist = signal.sample_rate / 2.0
    if not 0 < cutoff_hz < nyquist:
        raise ValidationError(
            f"highpass cutoff must be in (0, {nyquist:g}) Hz, got {cutoff_hz!r}")
    taps = -_lowpass_taps(cutoff_hz, signal.sample_rate)
    taps[(FIR_TAP_COUNT - 1) // 2] += 1.0
    out = _apply_fir(signal.samples, taps)
    return AudioSignal(np.clip(out, -1.0, 1.0), signal.sample_rate)


def resample_roundtrip(signal: AudioSignal, intermediate_rate_hz: int) -> AudioSignal:
    """Polyphase-resample down to an intermediate rate and back up."""
    rate = int(intermediate_rate_hz)
    if rate <= 0:
        raise ValidationError(
            f"intermediate rate must be > 0 Hz, got {intermediate_rate_hz!r}")
    ratio = Fraction(rate, signal.sample_rate)
    up, down = ratio.numerator, ratio.denominator
    if up == down:
        return AudioSignal(signal.samples, signal.sample_rate)
    mid = sps.resample_poly(signal.samples, up, down)
    back = sps.resample_poly(mid, down, up)
    out = _fit_length(back, len(signal))
    return AudioSignal(np.clip(out, -1.0, 1.0), signal.sample_rate)


def requantize(signal: AudioSignal, bits: int) -> AudioSignal:
    """Mid-rise requantization onto a grid of 2**bits - 1 levels."""
    bits = int(bits)
    if not 2 <= bits <= 32:
        raise ValidationError(f"bit depth must be in [2, 32], got {bits}")
    scale = float(2 ** (bits - 1) - 1)
    out = np.round(signal.samples * scale) / scale
    return AudioSignal(np.clip(out, -1.0, 1.0), signal.sample_rate)


def amplitude_scale(signal: AudioSignal, factor: float) -> AudioSignal:
    """Multiply every sample by a positive factor, clamping to [-1, 1]."""
    if not factor > 0:
        raise ValidationError(f"scale factor must be > 0, got {factor!r}")
    return AudioSignal(np.clip(signal.samples * factor, -1.0, 1.0),
                       signal.sample_rate)


def crop_leading(signal: AudioSignal, fraction: float) -> AudioSignal:
    """Remove the leading fraction of samples and zero-pad the end."""
    if not 0 <= fraction < 1:
        raise ValidationError(f"crop fraction must be in [0, 1), got {fraction!r}")
    cut = int(fraction * len(signal))
    out = np.zeros(len(signal))
    kept = signal.samples[cut:]
    out[: kept.size] = kept
    return AudioSignal(out, signal.sample_rate)


@dataclass(frozen=True)
class CodecCommand:
    """Shell command templates for an external MP3 encoder/decoder pair.

    The encode template receives {input} (WAV path), {output} (MP3 path)
    and {bitrate} (kbit/s); the decode template receives {input} (MP3
    path) and {output} (WAV path). The decoder must produce mono 16-bit
    PCM at the input rate. Defaults target the ``lame`` command-line
    tool.
    """

    encode_template: str = "lame --quiet -b {bitrate} {input} {output}"
    decode_template: str = "lame --quiet --decode {input} {output}"

    def __post_init__(self):
        for label, template, needed in (
                ("encode", self.encode_template, ("{input}", "{output}", "{bitrate}")),
                ("decode", self.decode_template, ("{input}", "{output}"))):
            missing = [p for p in needed if p not in template]
            if missing:
                raise ValidationError(
                    f"{label} template is missing placeholders {missing}: "
                    f"{template!r}")


def _run_codec(step, template, mapping):
    # the template is split first, then each token formatted, so paths
    # containing spaces stay single arguments
    argv = [token.format(**mapping) for token in shlex.split(template)]
    if shutil.which(argv[0]) is None:
        raise CodecError(f"{step} command not found: {argv[0]!r}; "
                         f"install it or configure another codec")
    result = subprocess.run(argv, capture_output=True, text=True)
    if result.returncode != 0:
        detail = (result.stderr or result.stdout).strip().splitlines()
        tail = detail[-1] if detail else "no diagnostic output"
        raise CodecError(
            f"{step} command exited with status {result.returncode}: {tail}")


def _align_to(reference, decoded, max_lag):
    # codecs delay their output; find the lag of best correlation and
    # undo it before comparing frame by frame
    corr = sps.correlate(decoded, reference, mode="full", method="fft")
    lags = sps.correlation_lags(decoded.size, reference.size, mode="full")
    window = np.abs(lags) <= max_lag
    lag = int(lags[window][np.argmax(corr[window])])
    if lag >= 0:
        shifted = decoded[lag:]
    else:
        shifted = np.concatenate([np.zeros(-lag), decoded])
    return _fit_length(shifted, reference.size)


def mp3_roundtrip(signal: AudioSignal, bitrate_kbps: int,
                  codec: CodecCommand | None = None,
                  workdir=None) -> AudioSignal:
    """Compress to MP3 and decode back using external commands.

    The decoded audio is re-aligned to the input by cross-correlation
    over lags up to +-2048 samples, then trimmed or zero-padded to the
    original length.
    """
    bitrate = int(bitrate_kbps)
    if bitrate not in MP3_BITRATES:
        raise ValidationError(
            f"bitrate must be one of {MP3_BITRATES} kbps, got {bitrate_kbps!r}")
    codec = codec if codec is not None else CodecCommand()
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        wav_in = str(Path(tmp) / "roundtrip_in.wav")
        mp3_path = str(Path(tmp) / "roundtrip.mp3")
        wav_out = str(Path(tmp) / "roundtrip_out.wav")
        write_wav(wav_in, signal)
        _run_codec("encode", codec.encode_template,
                   {"input": wav_in, "output": mp3_path, "bitrate": bitrate})
        _run_codec("decode", codec.decode_template,
                   {"input": mp3_path, "output": wav_out})
        decoded = read_wav(wav_out)
    if decoded.sample_rate != signal.sample_rate:
        raise CodecError(
            f"decoder returned {decoded.sample_rate} Hz audio for a "
            f"{signal.sample_rate} Hz input; fix the codec templates")
    aligned = _align_to(signal.samples, decoded.samples, MP3_ALIGN_MAX_LAG)
    return AudioSignal(np.clip(aligned, -1.0, 1.0), signal.sample_rate)


@dataclass(frozen=True)
class AttackSpec:
    """One attack plus its parameter, ready to apply to any signal.

    ``parameter`` is kind-specific: SNR in dB (awgn), bitrate in kbps
    (mp3), cutoff in Hz (lowpass/highpass), intermediate rate in Hz
    (resample), bit depth (requantize), gain factor (amplitude_scale) or
    leading fraction (crop). ``seed`` only affects awgn.
    """

    kind: str
    parameter: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ValidationError(
                f"unknown attack {self.kind!r}, expected one of {ATTACK_KINDS}")
        # signal-independent range checks; rate-relative ones (cutoffs)
        # happen when the attack runs
        if self.kind == "mp3" and int(self.parameter) not in MP3_BITRATES:
            raise ValidationError(
                f"mp3 bitrate must be one of {MP3_BITRATES}, got {self.parameter!r}")
        if self.kind in ("lowpass", "highpass", "resample") and not self.parameter > 0:
            raise ValidationError(
                f"{self.kind} parameter must be > 0, got {self.parameter!r}")
        if self.kind == "requantize" and not 2 <= int(self.parameter) <= 32:
            raise ValidationError(
                f"requantize bits must be in [2, 32], got {self.parameter!r}")
        if self.kind == "amplitude_scale" and not self.parameter > 0:
            raise ValidationError(
                f"amplitude factor must be > 0, got {self.parameter!r}")
        if self.kind == "crop" and not 0 <= self.parameter < 1:
            raise ValidationError(
                f"crop fraction must be in [0, 1), got {self.parameter!r}")
        if self.kind == "awgn" and not math.isfinite(self.parameter):
            raise ValidationError(f"awgn SNR must be finite, got {self.parameter!r}")

    def apply(self, signal: AudioSignal, codec: CodecCommand | None = None,
              workdir=None) -> AudioSignal:
        """Run the attack on a signal."""
        if self.kind == "awgn":
            return awgn(signal, self.parameter, self.seed)
        if self.kind == "mp3":
            return mp3_roundtrip(signal, int(self.parameter), codec, workdir)
        if self.kind == "lowpass":
            return lowpass(signal, self.parameter)
        if self.kind == "highpass":
            return highpass(signal, self.parameter)
        if self.kind == "resample":
            return resample_roundtrip(signal, int(self.parameter))
        if self.kind == "requantize":
            return requantize(signal, int(self.parameter))
        if self.kind == "amplitude_scale":
            return amplitude_scale(signal, self.parameter)
        return crop_leading(signal, self.parameter)
