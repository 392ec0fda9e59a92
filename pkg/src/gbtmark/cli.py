"""Command-line interface: embed, extract, attack and benchmark."""

import argparse
import os
import sys
from pathlib import Path

from .attacks import ATTACK_KINDS, AttackSpec, CodecCommand, MP3_BITRATES
from .benchmark import run_benchmark, report_to_csv, report_to_markdown
from .errors import (
    AudioFormatError,
    CapacityError,
    CodecError,
    ConfigError,
    GbtmarkError,
    KeyFormatError,
    ValidationError,
)
from .fileio import read_key, read_pbm, read_wav, write_key, write_pbm, write_wav
from .metrics import ber, payload, psnr
from .transform import GraphConfig
from .watermark import EmbedParams, embed, extract

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_TOOL = 3

CODEC_ENCODE_ENV = "GBTMARK_CODEC_ENCODE"
CODEC_DECODE_ENV = "GBTMARK_CODEC_DECODE"


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the CLI contract
    # reserves 2 for I/O problems and uses 1 for usage
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_embed_flags(parser):
    parser.add_argument("--frame-size", type=int, default=10,
                        help="samples per frame (default 10)")
    parser.add_argument("--ws", type=float, default=0.05,
                        help="watermark strength (default 0.05)")
    parser.add_argument("--coeff-fraction", type=float, default=0.4,
                        help="fraction of leading coefficients used (default 0.4)")
    parser.add_argument("--w1", type=float, default=1.0,
                        help="first-neighbour edge weight (default 1.0)")
    parser.add_argument("--w2", type=float, default=0.3,
                        help="second-neighbour edge weight (default 0.3)")


def _add_codec_flags(parser):
    parser.add_argument("--codec-encode", default=None,
                        help=f"MP3 encode command template with {{input}} {{output}} "
                             f"{{bitrate}} placeholders (or ${CODEC_ENCODE_ENV})")
    parser.add_argument("--codec-decode", default=None,
                        help=f"MP3 decode command template with {{input}} {{output}} "
                             f"placeholders (or ${CODEC_DECODE_ENV})")


def _params_from(args) -> EmbedParams:
    graph = GraphConfig(frame_size=args.frame_size, w1=args.w1, w2=args.w2)
    return EmbedParams(ws=args.ws, coeff_fraction=args.coeff_fraction, graph=graph)


def _codec_from(args) -> CodecCommand:
    encode = args.codec_encode or os.environ.get(CODEC_ENCODE_ENV)
    decode = args.codec_decode or os.environ.get(CODEC_DECODE_ENV)
    defaults = CodecCommand()
    return CodecCommand(encode_template=encode or defaults.encode_template,
                        decode_template=decode or defaults.decode_template)


def _cmd_embed(args) -> int:
    host = read_wav(args.host)
    watermark = read_pbm(args.watermark)
    result = embed(host, watermark, _params_from(args))
    write_wav(args.out_wav, result.signal)
    write_key(args.out_key, result.key)
    quality = psnr(host, result.signal)
    print(f"psnr: {quality.psnr_db:.2f} dB")
    print(f"payload: {payload(host.sample_rate, args.frame_size):g} bits/s")
    return EXIT_OK


def _cmd_extract(args) -> int:
    signal = read_wav(args.wav)
    key = read_key(args.key)
    recovered = extract(signal, key)
    write_pbm(args.out_pbm, recovered)
    if args.reference is not None:
        reference = read_pbm(args.reference)
        print(f"ber: {ber(reference, recovered):.6f}")
    return EXIT_OK


def _attack_spec_from(args) -> AttackSpec:
    flags = {"awgn": ("snr", args.snr), "mp3": ("bitrate", args.bitrate),
             "lowpass": ("cutoff", args.cutoff), "highpass": ("cutoff", args.cutoff),
             "resample": ("rate", args.rate), "requantize": ("bits", args.bits),
             "amplitude_scale": ("factor", args.factor),
             "crop": ("fraction", args.fraction)}
    name, value = flags[args.kind]
    if value is None:
        raise ValidationError(f"attack {args.kind!r} requires --{name}")
    return AttackSpec(args.kind, float(value), seed=args.seed)


def _cmd_attack(args) -> int:
    signal = read_wav(args.wav_in)
    spec = _attack_spec_from(args)
    codec = _codec_from(args) if spec.kind == "mp3" else None
    write_wav(args.wav_out, spec.apply(signal, codec=codec))
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    watermark = read_pbm(args.watermark)
    report = run_benchmark(args.corpus_dir, watermark,
                           params=_params_from(args), seed=args.seed,
                           codec=_codec_from(args))
    Path(args.out_csv).write_text(report_to_csv(report), encoding="ascii")
    if args.markdown:
        print(report_to_markdown(report), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gbtmark",
                     description="Audio watermarking in the singular values of "
                                 "graph-transform coefficients")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("embed", parents=[], help="embed a PBM image into a WAV")
    cmd.add_argument("host", help="host WAV file (mono PCM16)")
    cmd.add_argument("watermark", help="watermark PBM file (P1)")
    cmd.add_argument("out_wav", help="output watermarked WAV")
    cmd.add_argument("out_key", help="output key file")
    _add_embed_flags(cmd)
    cmd.set_defaults(func=_cmd_embed)

    cmd = commands.add_parser("extract", help="extract a watermark using a key")
    cmd.add_argument("wav", help="watermarked (possibly attacked) WAV file")
    cmd.add_argument("key", help="key file from embedding")
    cmd.add_argument("out_pbm", help="output PBM file")
    cmd.add_argument("--reference", default=None,
                     help="original watermark PBM; prints the BER against it")
    cmd.set_defaults(func=_cmd_extract)

    cmd = commands.add_parser("attack", help="apply one attack to a WAV")
    cmd.add_argument("kind", choices=ATTACK_KINDS)
    cmd.add_argument("wav_in")
    cmd.add_argument("wav_out")
    cmd.add_argument("--snr", type=float, help="awgn: target SNR in dB")
    cmd.add_argument("--seed", type=int, default=0, help="awgn noise seed")
    cmd.add_argument("--bitrate", type=int, choices=MP3_BITRATES,
                     help="mp3: bitrate in kbps")
    cmd.add_argument("--cutoff", type=float, help="lowpass/highpass: cutoff in Hz")
    cmd.add_argument("--rate", type=int, help="resample: intermediate rate in Hz")
    cmd.add_argument("--bits", type=int, help="requantize: target bit depth")
    cmd.add_argument("--factor", type=float, help="amplitude_scale: gain factor")
    cmd.add_argument("--fraction", type=float, help="crop: leading fraction removed")
    _add_codec_flags(cmd)
    cmd.set_defaults(func=_cmd_attack)

    cmd = commands.add_parser("benchmark",
                              help="run the full attack grid over a corpus")
    cmd.add_argument("corpus_dir", help="directory of mono PCM16 WAV files")
    cmd.add_argument("watermark", help="watermark PBM file")
    cmd.add_argument("out_csv", help="output CSV path")
    cmd.add_argument("--seed", type=int, default=0, help="awgn noise seed")
    cmd.add_argument("--markdown", action="store_true",
                     help="also print the per-attack means as a markdown table")
    _add_embed_flags(cmd)
    _add_codec_flags(cmd)
    cmd.set_defaults(func=_cmd_benchmark)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError, CapacityError) as exc:
        print(f"gbtmark: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AudioFormatError, KeyFormatError, OSError) as exc:
        print(f"gbtmark: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CodecError as exc:
        print(f"gbtmark: error: {exc}", file=sys.stderr)
        return EXIT_TOOL
    except GbtmarkError as exc:
        print(f"gbtmark: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main())
