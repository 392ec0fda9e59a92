"""Quality and robustness measures: PSNR/SNR, bit error rate, payload."""

import math
from dataclasses import dataclass

import numpy as np

from .audio import AudioSignal
from .errors import ValidationError
from .watermark import WatermarkImage


@dataclass(frozen=True)
class QualityReport:
    """Distortion of a test signal against a reference.

    PSNR uses a fixed full-scale peak of 1.0; identical signals report
    infinite PSNR/SNR.
    """

    psnr_db: float
    snr_db: float
    mse: float


def psnr(reference: AudioSignal, test: AudioSignal) -> QualityReport:
    """Peak and plain signal-to-noise ratio of test against reference."""
    if reference.sample_rate != test.sample_rate:
        raise ValidationError(
            f"sample rates differ: {reference.sample_rate} vs {test.sample_rate}")
    if len(reference) != len(test):
        raise ValidationError(
            f"signal lengths differ: {len(reference)} vs {len(test)}")
    error = test.samples - reference.samples
    mse = float(np.mean(error * error))
    if mse == 0.0:
        return QualityReport(psnr_db=math.inf, snr_db=math.inf, mse=0.0)
    power = float(np.mean(reference.samples ** 2))
    snr_db = 10.0 * math.log10(power / mse) if power > 0 else -math.inf
    return QualityReport(psnr_db=10.0 * math.log10(1.0 / mse),
                         snr_db=snr_db, mse=mse)


def ber(original: WatermarkImage, extracted: WatermarkImage) -> float:
    """Fraction of mismatched bits between two equally sized images."""
    if (original.width, original.height) != (extracted.width, extracted.height):
        raise ValidationError(
            f"image dimensions differ: {original.width}x{original.height} vs "
            f"{extracted.width}x{extracted.height}")
    return float(np.mean(original.bits != extracted.bits))


def payload(sample_rate_hz: float, frame_size: int) -> float:
    """Embeddable bits per second: one bit per frame."""
    if sample_rate_hz <= 0 or frame_size <= 0:
        raise ValidationError("sample rate and frame size must be positive")
    return sample_rate_hz / frame_size
