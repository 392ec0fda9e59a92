"""Audio watermarking via a graph-based frame transform and SVD.

A binary image is embedded one bit per frame into the largest singular
value of the leading transform coefficients of a host signal's
high-energy frames, and recovered with the key saved at embed time.
"""

from .audio import AudioSignal
from .attacks import (
    AttackSpec,
    CodecCommand,
    amplitude_scale,
    awgn,
    crop_leading,
    highpass,
    lowpass,
    mp3_roundtrip,
    requantize,
    resample_roundtrip,
)
from .benchmark import (
    DEFAULT_GRID,
    BenchmarkReport,
    BenchmarkRow,
    report_to_csv,
    report_to_markdown,
    run_benchmark,
)
from .errors import (
    AudioFormatError,
    CapacityError,
    CodecError,
    ConfigError,
    GbtmarkError,
    IneligibleFrameError,
    KeyFormatError,
    NumericError,
    ValidationError,
)
from .fileio import (
    read_key,
    read_pbm,
    read_wav,
    write_key,
    write_pbm,
    write_wav,
)
from .metrics import QualityReport, ber, payload, psnr
from .transform import (
    GraphConfig,
    TransformPlan,
    build_adjacency,
    build_laplacian,
    forward,
    inverse,
    make_plan,
)
from .watermark import (
    EmbeddingKey,
    EmbedParams,
    FrameRecord,
    WatermarkImage,
    WatermarkedResult,
    embed,
    embed_bit,
    extract,
    extract_bit,
    frame_energy,
    frame_signal,
    reshape_for_svd,
    select_frames,
)

__version__ = "0.1.0"
