"""Command-line interface.

Subcommands mirror the pipeline stages so each one is inspectable on its
own: `stylize` runs the whole chain, `stretch`/`unstretch` expose the
forward and backward mappings (connected by a record.json document), and
`stats` prints per-level covariance-matching residuals.

Exit codes are stable contracts:
  0 success, 2 I/O or usage failure, 3 empty mask / dimension mismatch,
  4 numeric failure (degenerate features), 5 malformed record document.
"""

import argparse
import os
import sys
import numpy as np

from .codec import encode, pad_to_depth
from .errors import (
    DegenerateFeaturesError,
    DimensionMismatchError,
    EmptyMaskError,
    ImageIOError,
    RecordError,
)
from .raster import load_image, load_mask, save_image
from .stretching import backward_stretch, forward_stretch, read_record, write_record
from .transfer import (
    DEFAULT_ALPHA,
    DEFAULT_LEVELS,
    _stylize_levels,
    composite,
    style_level_stats,
)
from .wct import covariance, mean_center

DEFAULT_THRESHOLD = 128

# Per-flag conversion used both for config files and merged defaults.
_CONVERTERS = {"alpha": float, "levels": int, "mask_threshold": int}
_DEFAULTS = {"alpha": DEFAULT_ALPHA, "levels": DEFAULT_LEVELS, "mask_threshold": DEFAULT_THRESHOLD}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stretchstyle",
        description="Transfer the style of one image onto a masked instance of another.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *names):
        p.add_argument("--config", help="key=value file supplying any flag; flags win")
        if "content" in names:
            p.add_argument("--content", help="content image (PNG)")
        if "style" in names:
            p.add_argument("--style", help="style image (PNG)")
        if "mask" in names:
            p.add_argument("--mask", help="instance mask image (PNG)")
            p.add_argument("--mask-threshold", type=int, dest="mask_threshold",
                           help="luma byte at or above which a mask pixel is true (default 128)")
        if "out" in names:
            p.add_argument("--out", help="output path")
        if "alpha" in names:
            p.add_argument("--alpha", type=float,
                           help=f"style/content blend in [0,1] (default {DEFAULT_ALPHA})")
            p.add_argument("--levels", type=int,
                           help=f"codec depth in 1..5 (default {DEFAULT_LEVELS})")

    p = sub.add_parser("stylize", help="run the full pipeline")
    add_common(p, "content", "style", "mask", "out", "alpha")
    p.add_argument("--dump-dir", dest="dump_dir",
                   help="directory for per-stage intermediates")
    p.set_defaults(func=cmd_stylize, required=("content", "style", "mask", "out"))

    p = sub.add_parser("stretch", help="stretch the masked instance into a rectangle")
    add_common(p, "content", "mask", "out")
    p.add_argument("--record", help="where to write the stretch record (JSON)")
    p.set_defaults(func=cmd_stretch, required=("content", "mask", "out", "record"))

    p = sub.add_parser("unstretch", help="invert a stretch using its record")
    add_common(p, "out")
    p.add_argument("--stretched", help="stretched instance image (PNG)")
    p.add_argument("--record", help="stretch record written by `stretch`")
    p.set_defaults(func=cmd_unstretch, required=("stretched", "record", "out"))

    p = sub.add_parser("stats", help="print per-level covariance residuals")
    add_common(p, "content", "style", "mask", "alpha")
    p.set_defaults(func=cmd_stats, required=("content", "style", "mask"))

    return parser


def _read_config(path) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ImageIOError(f"cannot read config {path}: {exc}") from exc
    return values


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill flags from the config file, then apply defaults; flags win."""
    if getattr(args, "config", None):
        for key, raw in _read_config(args.config).items():
            if not hasattr(args, key) or key in ("config", "func", "command", "required"):
                continue
            if getattr(args, key) is None:
                setattr(args, key, _CONVERTERS.get(key, str)(raw))
    for key, default in _DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, default)
    missing = [name for name in args.required if getattr(args, name, None) is None]
    if missing:
        raise ValueError("missing required flag(s): " + ", ".join(f"--{m}" for m in missing))
    return args


def _load_pair(args):
    content = load_image(args.content)
    mask = load_mask(args.mask, threshold=args.mask_threshold)
    return content, mask


def cmd_stylize(args) -> int:
    content, mask = _load_pair(args)
    style = load_image(args.style)
    stretched, record = forward_stretch(content, mask)
    restyled = _stylize_levels(stretched, style_level_stats(style, args.levels), args.alpha)
    unstretched = backward_stretch(restyled, record)
    output = composite(content, unstretched, mask)
    if args.dump_dir:
        os.makedirs(args.dump_dir, exist_ok=True)
        save_image(stretched, os.path.join(args.dump_dir, "stretched.png"))
        save_image(restyled, os.path.join(args.dump_dir, "stylized_stretched.png"))
        save_image(unstretched, os.path.join(args.dump_dir, "unstretched.png"))
        write_record(record, os.path.join(args.dump_dir, "record.json"))
    save_image(output, args.out)
    return 0


def cmd_stretch(args) -> int:
    content, mask = _load_pair(args)
    stretched, record = forward_stretch(content, mask)
    save_image(stretched, args.out)
    write_record(record, args.record)
    return 0


def cmd_unstretch(args) -> int:
    record = read_record(args.record)
    stretched = load_image(args.stretched)
    save_image(backward_stretch(stretched, record), args.out)
    return 0


def _relative_residual(features, style_features) -> float:
    out_cov = covariance(mean_center(features)[0])
    style_cov = covariance(mean_center(style_features)[0])
    return float(np.abs(out_cov - style_cov).max() / np.abs(style_cov).max())


def cmd_stats(args) -> int:
    content, mask = _load_pair(args)
    style = load_image(args.style)
    stats = style_level_stats(style, args.levels)
    degenerate = [level for level, s in enumerate(stats, start=1) if s.eig.values[0] <= 0.0]
    if degenerate:
        for level in degenerate:
            print(f"warning: degenerate-style covariance at level {level}", file=sys.stderr)
        for level in range(1, args.levels + 1):
            print(f"level={level} residual=nan")
        return 0
    stretched, _ = forward_stretch(content, mask)
    restyled = _stylize_levels(stretched, stats, args.alpha)
    for level in range(1, args.levels + 1):
        padded_out, _ = pad_to_depth(restyled, level)
        padded_style, _ = pad_to_depth(style, level)
        residual = _relative_residual(
            encode(padded_out, level).matrix, encode(padded_style, level).matrix
        )
        print(f"level={level} residual={residual:.6e}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = _merge_config(args)
        return args.func(args)
    except RecordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except DegenerateFeaturesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (EmptyMaskError, DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ImageIOError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
