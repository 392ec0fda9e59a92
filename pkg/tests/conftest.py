import numpy as np
import pytest

from gbtmark import EmbedParams, GraphConfig, WatermarkImage, embed, make_plan
from gbtmark.synth import speech_like

# Fixed corpus for the heavier end-to-end tests: three clips, one
# balanced random watermark. Clip seed 2 is also the anchor for the
# crop-monotonicity check, so do not change these without re-checking.
CLIP_SEEDS = (1, 2, 3)
WATERMARK_SEED = 7


def random_watermark(width=25, height=25, seed=WATERMARK_SEED):
    rng = np.random.default_rng(seed)
    return WatermarkImage(width, height, rng.integers(0, 2, width * height))


@pytest.fixture(scope="session")
def default_plan():
    return make_plan(GraphConfig())


@pytest.fixture(scope="session")
def watermark():
    return random_watermark()


@pytest.fixture(scope="session")
def speech_clips():
    return tuple(speech_like(3.0, 8000, seed=s) for s in CLIP_SEEDS)


@pytest.fixture(scope="session")
def embedded_clips(speech_clips, watermark):
    """Embedding results for every session clip, with default parameters."""
    return tuple(embed(clip, watermark, EmbedParams()) for clip in speech_clips)
