"""Command-line front door: encode, decode, analyze, schematic, serve.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import sys
import time

from . import codec
from .analysis import DEFAULT_SCHEMATIC_SEED, render_beat_schematic, tuning_report
from .audio import read_wav, write_wav
from .codec import (decode, decode_image, encode, export_png, import_png,
                    quantization_snr_estimate, read_cspec, render_image,
                    write_cspec)
from .dsp import FrameSpec
from .logwarp import build_log_axis
from .service import SessionConfig, StreamServer

_MODE_NAMES = {"rect": "rectangular", "rectangular": "rectangular", "polar": "polar"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cspec",
                     description="Invertible complex-color spectrograms")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="WAV -> CSPEC (+ optional PNG)")
    p.add_argument("input", help="input WAV file")
    p.add_argument("output", help="output CSPEC file")
    p.add_argument("--png", help="also render a PNG image")
    p.add_argument("--fft-size", type=int, default=2048)
    p.add_argument("--hop", type=int, default=0, help="default: fft size")
    p.add_argument("--window", default="rectangular",
                   choices=("rectangular", "hann"))
    p.add_argument("--aref", type=float, default=1.0)
    p.add_argument("--axis", choices=("linear", "log"), default="linear")
    p.add_argument("--mode", choices=("rect", "polar"), default="rect")
    p.add_argument("--fmin", type=float, default=27.5)
    p.add_argument("--fmax", type=float, default=4186.0)
    p.add_argument("--rows", type=int, default=512)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="CSPEC or PNG -> WAV")
    p.add_argument("input", help="input CSPEC or PNG file")
    p.add_argument("output", help="output WAV file")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("analyze", help="tuning report for a WAV of notes")
    p.add_argument("input", help="input WAV file")
    p.add_argument("--a4", type=float, default=440.0)
    p.add_argument("--notes", default="auto",
                   help='"auto" or comma-separated note names')
    p.add_argument("--segments", type=int, default=0,
                   help="equal segments to split into (auto mode)")
    p.add_argument("--fft-size", type=int, default=2048)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("schematic", help="render the phase-beat schematic")
    p.add_argument("--out", required=True, help="output PNG file")
    p.add_argument("--seed", type=int, default=DEFAULT_SCHEMATIC_SEED)
    p.add_argument("--slices", type=int, default=128)
    p.add_argument("--spans", type=int, default=4)
    p.add_argument("--lines", type=int, default=25)
    p.set_defaults(func=cmd_schematic)

    p = sub.add_parser("serve", help="run the live streaming service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=9473)
    p.add_argument("--fft-size", type=int, default=2048)
    p.add_argument("--hop", type=int, default=0)
    p.add_argument("--axis", choices=("linear", "log"), default="linear")
    p.add_argument("--mode", choices=("rect", "polar"), default="rect")
    p.add_argument("--fmin", type=float, default=27.5)
    p.add_argument("--fmax", type=float, default=4186.0)
    p.add_argument("--rows", type=int, default=512)
    p.add_argument("--aref", type=float, default=1.0)
    p.add_argument("--a4", type=float, default=440.0)
    p.set_defaults(func=cmd_serve)
    return parser


def cmd_encode(args) -> int:
    audio = read_wav(args.input)
    spec = FrameSpec(args.fft_size, args.hop or None, args.window)
    start = time.perf_counter()
    spectrogram, cfile = encode(audio, spec, args.aref)
    write_cspec(cfile, args.output)
    if args.png:
        axis = None
        if args.axis == "log":
            axis = build_log_axis(args.fmin, min(args.fmax, audio.sample_rate / 2),
                                  args.rows, spec, audio.sample_rate)
        image = render_image(spectrogram, len(audio), axis, _MODE_NAMES[args.mode])
        export_png(image, args.png)
    elapsed = time.perf_counter() - start
    rate = len(audio) / elapsed if elapsed > 0 else float("inf")
    speed = rate / audio.sample_rate
    print(f"encoded {len(audio)} samples in {elapsed:.3f} s "
          f"({rate:,.0f} samples/s, {speed:.1f}x real time)")
    return 0


def cmd_decode(args) -> int:
    with open(args.input, "rb") as f:
        head = f.read(8)
    if head[:4] == codec.MAGIC:
        audio = decode(read_cspec(args.input))
    else:
        image = import_png(args.input)
        if image.unknown_provenance:
            raise ValueError("unknown provenance")
        snr = quantization_snr_estimate(image)
        print(f"warning: 8-bit PNG is a lossy carrier; estimated "
              f"reconstruction SNR {snr:.1f} dB", file=sys.stderr)
        audio = decode_image(image)
    write_wav(audio, args.output)
    print(f"wrote {len(audio)} samples to {args.output}")
    return 0


def cmd_analyze(args) -> int:
    audio = read_wav(args.input)
    spec = FrameSpec(args.fft_size)
    if args.notes == "auto":
        segments = args.segments or None
        report = tuning_report(audio, args.a4, segments=segments, frame_spec=spec)
    else:
        names = [n.strip() for n in args.notes.split(",") if n.strip()]
        report = tuning_report(audio, args.a4, note_list=names, frame_spec=spec)
    print(report.to_text())
    return 0


def cmd_schematic(args) -> int:
    image = render_beat_schematic(slices=args.slices, coeff_spans=args.spans,
                                  lines_per_coeff=args.lines, seed=args.seed)
    export_png(image, args.out)
    print(f"wrote {image.width}x{image.height} schematic to {args.out}")
    return 0


def cmd_serve(args) -> int:
    defaults = SessionConfig(
        fft_size=args.fft_size, hop=args.hop, axis=args.axis,
        mode=_MODE_NAMES[args.mode], fmin=args.fmin, fmax=args.fmax,
        rows=args.rows, a_ref=args.aref, a4=args.a4,
    )
    server = StreamServer(args.host, args.port, defaults)
    print(f"serving on {server.host}:{server.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"cspec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
