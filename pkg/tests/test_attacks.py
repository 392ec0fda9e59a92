import sys

import numpy as np
import pytest

from gbtmark import (
    AttackSpec,
    AudioSignal,
    CodecCommand,
    CodecError,
    ValidationError,
    amplitude_scale,
    awgn,
    crop_leading,
    highpass,
    lowpass,
    mp3_roundtrip,
    read_wav,
    requantize,
    resample_roundtrip,
    write_wav,
)
from gbtmark.synth import ar_noise, speech_like, tone


def rms(x):
    return float(np.sqrt(np.mean(np.square(x))))


# ---------------------------------------------------------------- awgn

def test_awgn_hits_target_snr():
    signal = speech_like(10.0, 8000, seed=4)  # 80000 samples
    for target in (20.0, 10.0):
        noisy = awgn(signal, target, seed=9)
        noise = noisy.samples - signal.samples
        realized = 10 * np.log10(np.mean(signal.samples ** 2) / np.mean(noise ** 2))
        assert realized == pytest.approx(target, abs=0.5)


def test_awgn_deterministic_per_seed():
    signal = ar_noise(5000, seed=1, rms=0.1)
    assert np.array_equal(awgn(signal, 20, seed=7).samples,
                          awgn(signal, 20, seed=7).samples)
    assert not np.array_equal(awgn(signal, 20, seed=7).samples,
                              awgn(signal, 20, seed=8).samples)


def test_awgn_high_snr_nearly_identity():
    signal = ar_noise(20000, seed=2, rms=0.3)
    noisy = awgn(signal, 100.0, seed=3)
    assert rms(noisy.samples - signal.samples) <= 1e-4


def test_awgn_rejects_silence_and_bad_snr():
    with pytest.raises(ValidationError):
        awgn(AudioSignal(np.zeros(100), 8000), 20)
    with pytest.raises(ValidationError):
        awgn(ar_noise(100, seed=0), float("inf"))


# ------------------------------------------------------------- filters

def test_lowpass_passband_preserved():
    probe = tone(100.0, 1.0, 8000)
    out = lowpass(probe, 4000.0)
    interior = slice(200, -200)  # skip edge transients
    ratio = rms(out.samples[interior]) / rms(probe.samples[interior])
    assert ratio == pytest.approx(1.0, abs=0.01)


def test_lowpass_at_nyquist_is_identity_filter():
    probe = speech_like(1.0, 8000, seed=5)
    out = lowpass(probe, 4000.0)
    # taps collapse to a unit impulse; only the final 63 samples are
    # lost to the delay compensation
    assert np.allclose(out.samples[:-63], probe.samples[:-63], atol=1e-12)
    assert np.all(out.samples[-63:] == 0)


def test_lowpass_attenuates_stopband():
    probe = tone(3500.0, 1.0, 8000)
    out = lowpass(probe, 1000.0)
    assert rms(out.samples) < 0.01 * rms(probe.samples)


def test_highpass_passband_preserved():
    probe = tone(3900.0, 1.0, 8000)
    out = highpass(probe, 50.0)
    interior = slice(200, -200)
    ratio = rms(out.samples[interior]) / rms(probe.samples[interior])
    assert ratio == pytest.approx(1.0, abs=0.01)


def test_highpass_removes_dc():
    signal = AudioSignal(np.full(8000, 0.25), 8000)
    out = highpass(signal, 50.0)
    assert abs(np.mean(out.samples)) <= 1e-3


def test_filter_cutoff_validation():
    probe = tone(100.0, 0.2, 8000)
    with pytest.raises(ValidationError):
        lowpass(probe, 0.0)
    with pytest.raises(ValidationError):
        lowpass(probe, 4001.0)
    with pytest.raises(ValidationError):
        highpass(probe, 4000.0)  # highpass needs cutoff strictly below Nyquist
    with pytest.raises(ValidationError):
        highpass(probe, -5.0)


# ------------------------------------------------------------ resample

def test_resample_identity_rate():
    signal = speech_like(1.0, 8000, seed=6)
    out = resample_roundtrip(signal, 8000)
    assert rms(out.samples - signal.samples) <= 1e-6


def test_resample_6000_preserves_low_tone():
    probe = tone(1000.0, 1.0, 8000)
    out = resample_roundtrip(probe, 6000)
    interior = slice(400, -400)
    ratio = rms(out.samples[interior]) / rms(probe.samples[interior])
    assert ratio == pytest.approx(1.0, abs=0.01)


def test_resample_4000_kills_high_tone():
    probe = tone(3000.0, 1.0, 8000)  # above the 2 kHz intermediate Nyquist
    out = resample_roundtrip(probe, 4000)
    assert rms(out.samples) < 0.05 * rms(probe.samples)


def test_resample_length_preserved_odd_sizes():
    signal = AudioSignal(ar_noise(10007, seed=3).samples, 8000)
    for rate in (6000, 4000, 11025, 16000):
        out = resample_roundtrip(signal, rate)
        assert len(out) == len(signal)
        assert out.sample_rate == 8000


def test_resample_rejects_nonpositive_rate():
    with pytest.raises(ValidationError):
        resample_roundtrip(ar_noise(100, seed=0), 0)


# ---------------------------------------------------------- requantize

def test_requantize_24_bits_refines_pcm16():
    # snap to the 16-bit read grid first
    signal = ar_noise(5000, seed=4, rms=0.3)
    pcm = AudioSignal(np.round(signal.samples * 32768.0) / 32768.0, 8000)
    out = requantize(pcm, 24)
    # half a 24-bit step; the grids are not nested exactly
    assert np.max(np.abs(out.samples - pcm.samples)) <= 0.5 / (2 ** 23 - 1)


def test_requantize_8_bit_error_bound():
    signal = ar_noise(5000, seed=5, rms=0.3)
    out = requantize(signal, 8)
    assert np.max(np.abs(out.samples - signal.samples)) <= 1 / 254 + 1e-12


def test_requantize_2_bits_snaps_to_crude_grid():
    signal = AudioSignal(np.array([0.6, -0.6, 0.2, 0.0]), 8000)
    out = requantize(signal, 2)
    assert np.array_equal(out.samples, [1.0, -1.0, 0.0, 0.0])


def test_requantize_validates_depth():
    signal = ar_noise(100, seed=0)
    for bits in (1, 33):
        with pytest.raises(ValidationError):
            requantize(signal, bits)


# ----------------------------------------------------- amplitude scale

def test_amplitude_scale_basic():
    signal = AudioSignal(np.array([0.5, -0.5, 0.8]), 8000)
    assert np.array_equal(amplitude_scale(signal, 1.0).samples, signal.samples)
    assert amplitude_scale(signal, 0.7).samples[0] == pytest.approx(0.35, abs=1e-15)
    assert amplitude_scale(signal, 2.0).samples[2] == 1.0  # clamped


def test_amplitude_scale_roundtrip_without_clamp():
    signal = ar_noise(1000, seed=6, rms=0.1)
    out = amplitude_scale(amplitude_scale(signal, 0.5), 2.0)
    assert np.allclose(out.samples, signal.samples, atol=1e-15)


def test_amplitude_scale_rejects_nonpositive():
    with pytest.raises(ValidationError):
        amplitude_scale(ar_noise(100, seed=0), 0.0)


# ---------------------------------------------------------------- crop

def test_crop_zero_fraction_is_identity():
    signal = ar_noise(1000, seed=7)
    assert np.array_equal(crop_leading(signal, 0.0).samples, signal.samples)


def test_crop_fraction_02_len_100():
    signal = AudioSignal(np.linspace(-0.9, 0.9, 100), 8000)
    out = crop_leading(signal, 0.2)
    assert len(out) == 100
    assert np.array_equal(out.samples[:80], signal.samples[20:])
    assert np.all(out.samples[80:] == 0)


def test_crop_validates_fraction():
    signal = ar_noise(100, seed=0)
    for fraction in (-0.1, 1.0):
        with pytest.raises(ValidationError):
            crop_leading(signal, fraction)


# ----------------------------------------------------------------- mp3

def fake_codec(tmp_path, delay=0):
    """Codec stand-in: encode copies the file, decode optionally delays it."""
    decoder = tmp_path / "fake_decode.py"
    decoder.write_text(
        "import sys\n"
        "import numpy as np\n"
        "from gbtmark import AudioSignal, read_wav, write_wav\n"
        f"delay = {delay}\n"
        "x = read_wav(sys.argv[1])\n"
        "out = np.concatenate([np.zeros(delay), x.samples])\n"
        "write_wav(sys.argv[2], AudioSignal(out, x.sample_rate))\n"
    )
    # the copier ignores the trailing bitrate argument
    copier = "import shutil, sys; shutil.copy(sys.argv[1], sys.argv[2])"
    return CodecCommand(
        encode_template=f'"{sys.executable}" -c "{copier}" {{input}} {{output}} '
                        f"{{bitrate}}",
        decode_template=f'"{sys.executable}" "{decoder}" {{input}} {{output}}',
    )


def test_mp3_roundtrip_with_copy_codec(tmp_path):
    signal = speech_like(1.0, 8000, seed=8)
    out = mp3_roundtrip(signal, 64, codec=fake_codec(tmp_path))
    assert len(out) == len(signal)
    assert out.sample_rate == signal.sample_rate
    # identity codec: only the 16-bit write/read quantization remains
    assert np.max(np.abs(out.samples - signal.samples)) <= 1 / 32767
    corr = np.corrcoef(out.samples, signal.samples)[0, 1]
    assert corr > 0.9


def test_mp3_roundtrip_alignment_cancels_decoder_delay(tmp_path):
    signal = speech_like(1.0, 8000, seed=9)
    out = mp3_roundtrip(signal, 64, codec=fake_codec(tmp_path, delay=576))
    assert len(out) == len(signal)
    assert np.max(np.abs(out.samples - signal.samples)) <= 1 / 32767


def test_mp3_missing_codec(tmp_path):
    codec = CodecCommand(
        encode_template="definitely-not-a-real-encoder {input} {output} {bitrate}",
        decode_template="definitely-not-a-real-decoder {input} {output}",
    )
    with pytest.raises(CodecError, match="not found"):
        mp3_roundtrip(speech_like(0.5, 8000, seed=1), 64, codec=codec)


def test_mp3_failing_codec(tmp_path):
    codec = CodecCommand(
        encode_template=f'"{sys.executable}" -c "import sys; sys.exit(3)" '
                        f"{{input}} {{output}} {{bitrate}}",
        decode_template=f'"{sys.executable}" -c pass {{input}} {{output}}',
    )
    with pytest.raises(CodecError, match="status 3"):
        mp3_roundtrip(speech_like(0.5, 8000, seed=1), 64, codec=codec)


def test_mp3_validates_bitrate(tmp_path):
    with pytest.raises(ValidationError):
        mp3_roundtrip(speech_like(0.5, 8000, seed=1), 48, codec=fake_codec(tmp_path))


def test_codec_template_placeholders_required():
    with pytest.raises(ValidationError):
        CodecCommand(encode_template="lame {input} {output}")  # no {bitrate}
    with pytest.raises(ValidationError):
        CodecCommand(decode_template="lame --decode {input}")


# ----------------------------------------------------- generic contract

GRID_SANS_MP3 = [
    AttackSpec("awgn", 20.0, seed=3),
    AttackSpec("awgn", 10.0, seed=3),
    AttackSpec("lowpass", 4000.0),
    AttackSpec("highpass", 50.0),
    AttackSpec("resample", 6000),
    AttackSpec("resample", 4000),
    AttackSpec("requantize", 24),
    AttackSpec("requantize", 8),
    AttackSpec("amplitude_scale", 0.9),
    AttackSpec("amplitude_scale", 0.7),
    AttackSpec("crop", 0.2),
    AttackSpec("crop", 0.3),
]


@pytest.mark.parametrize("spec", GRID_SANS_MP3,
                         ids=lambda s: f"{s.kind}-{s.parameter:g}")
def test_attack_preserves_length_rate_and_range(spec):
    signal = speech_like(1.5, 8000, seed=10)
    out = spec.apply(signal)
    assert len(out) == len(signal)
    assert out.sample_rate == signal.sample_rate
    assert np.max(np.abs(out.samples)) <= 1.0


def test_attack_spec_validation():
    with pytest.raises(ValidationError):
        AttackSpec("echo", 1.0)
    with pytest.raises(ValidationError):
        AttackSpec("mp3", 48)
    with pytest.raises(ValidationError):
        AttackSpec("crop", 1.0)
    with pytest.raises(ValidationError):
        AttackSpec("requantize", 1)
    with pytest.raises(ValidationError):
        AttackSpec("amplitude_scale", 0.0)
    with pytest.raises(ValidationError):
        AttackSpec("awgn", float("nan"))


def test_wav_helpers_roundtrip(tmp_path):
    # attacks lean on WAV I/O for the codec hop; sanity-check it here
    signal = speech_like(0.5, 8000, seed=11)
    path = tmp_path / "clip.wav"
    write_wav(path, signal)
    back = read_wav(path)
    assert back.sample_rate == 8000
    assert np.max(np.abs(back.samples - signal.samples)) <= 1 / 32767
