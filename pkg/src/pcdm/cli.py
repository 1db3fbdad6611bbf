"""Command-line front end.

Subcommands: ``score`` (single pair, any metric), ``map`` (distortion
map export), ``eval`` (manifest-driven dataset evaluation),
``decompose`` (chroma/intensity split) and ``live-manifest`` (convert a
LIVE release-2 tree into the flat manifest CSV).

Exit codes: 0 ok, 1 runtime failure, 2 usage error. Stdout carries only
machine-readable results; diagnostics go to stderr.
"""

import argparse
import os
import sys

import numpy as np

from . import baselines, evaluation, pipeline
from .errors import PcdmError
from .imageio import load_image, save_grayscale_map, save_image
from .naming import load_naming_table

_CONFIG_KEYS = ("sampling_rate", "alpha", "z", "de_threshold", "table")


def _load_toml(path):
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _build_config(args):
    """Merge flags > config file > built-in defaults into a PcdmConfig."""
    file_cfg = _load_toml(args.config) if getattr(args, "config", None) else {}
    unknown = set(file_cfg) - set(_CONFIG_KEYS)
    if unknown:
        raise PcdmError(f"unknown config keys: {sorted(unknown)}")

    def pick(flag_name, file_key, default):
        v = getattr(args, flag_name, None)
        if v is not None:
            return v
        return file_cfg.get(file_key, default)

    kwargs = {
        "sampling_rate": float(pick("rate", "sampling_rate", 0.05)),
        "alpha": float(pick("alpha", "alpha", 0.5)),
        "z": float(pick("z", "z", 10.0)),
        "de_threshold": float(pick("threshold", "de_threshold", 7.0)),
    }
    table_path = pick("table", "table", None)
    if table_path:
        return pipeline.make_config(load_naming_table(table_path), **kwargs)
    return pipeline.default_config(**kwargs)


def _add_pipeline_flags(sp, with_metric_default=None):
    sp.add_argument("--rate", type=float, help="sampling rate in (0, 1], default 0.05")
    sp.add_argument("--alpha", type=float, help="fusion weight in [0, 1], default 0.5")
    sp.add_argument("--z", type=float, help="logistic steepness, default 10")
    sp.add_argument("--threshold", type=float, help="color-difference cap, default 7")
    sp.add_argument("--table", help="path to a learned naming table")
    sp.add_argument("--config", help="TOML config file (flags take precedence)")


def _cmd_score(args):
    ref = load_image(args.ref)
    dist = load_image(args.dist)
    if args.metric == "pcdm":
        res = pipeline.pcdm_score(ref, dist, _build_config(args))
        print(f"metric=pcdm score={res.score:.6f} residual={res.residual:.6f}")
    else:
        score = evaluation.raw_score(args.metric, ref, dist)
        print(f"metric={args.metric} score={score:.6f}")
    return 0


def _cmd_map(args):
    ref = load_image(args.ref)
    dist = load_image(args.dist)
    if args.metric == "pcdm":
        values = pipeline.pcdm_map(ref, dist, _build_config(args))
        if args.residual:
            values = 1.0 - values
    else:
        if args.residual:
            raise PcdmError("--residual applies to the pcdm map only")
        _, values = baselines.ssim(ref, dist)
        values = np.clip(values, 0.0, 1.0)  # negative SSIM clamps to black
    save_grayscale_map(values, args.out)
    return 0


def _cmd_eval(args):
    manifest = evaluation.load_manifest(args.manifest)
    config = _build_config(args) if args.metric == "pcdm" else None

    def progress(done, total):
        print(f"\rscored {done}/{total}", end="", file=sys.stderr, flush=True)
        if done == total:
            print(file=sys.stderr)

    report = evaluation.evaluate(
        manifest,
        args.metric,
        config=config,
        form=args.form,
        jobs=args.jobs,
        progress=progress if args.jobs == 1 else None,
    )
    evaluation.write_report(report, args.out_dir, include_reference_rows=args.reference_rows)
    overall = report.cells["all"]
    print(f"metric={args.metric} cc={overall.pearson_cc:.6f} rmse={overall.rmse:.6f}")
    return 0


def _cmd_decompose(args):
    ref = load_image(args.ref)
    dist = load_image(args.dist)
    intensity, chroma = evaluation.decompose_distortion(ref, dist)
    save_image(intensity, args.out_intensity)
    save_image(chroma, args.out_chroma)
    return 0


def _cmd_live_manifest(args):
    rows = build_live_manifest(args.live_dir)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("ref,dist,dmos,class\n")
        for ref, dist, dmos, cls in rows:
            fh.write(f"{ref},{dist},{dmos:.6f},{cls}\n")
    print(f"wrote {len(rows)} entries to {args.out}")
    return 0


def build_live_manifest(live_dir):
    """Walk a LIVE release-2 tree into flat manifest rows.

    Expects subdirectories jp2k, jpeg, wn, gblur, fastfading with
    img<N>.bmp plus info.txt naming each file's reference, refimgs/
    with the pristine bitmaps, and dmos_realigned.mat whose dmos
    vector is ordered jp2k, jpeg, wn, gblur, fastfading; rows flagged
    as pristine copies (orgs == 1) are dropped. Paths in the manifest
    are relative to ``live_dir``.
    """
    from scipy.io import loadmat

    mat = loadmat(os.path.join(live_dir, "dmos_realigned.mat"))
    dmos = mat["dmos_new"].ravel()
    orgs = mat["orgs"].ravel()
    refnames = [str(c[0]) for c in loadmat(os.path.join(live_dir, "refnames_all.mat"))["refnames_all"].ravel()]
    layout = [("jp2k", 227, "jp2k"), ("jpeg", 233, "jpeg"), ("wn", 174, "wn"),
              ("gblur", 174, "gblur"), ("fastfading", 174, "ff")]
    if sum(n for _, n, _ in layout) != dmos.size:
        raise PcdmError(f"unexpected LIVE dmos length {dmos.size}")
    rows = []
    pos = 0
    for subdir, count, cls in layout:
        for k in range(1, count + 1):
            if not orgs[pos]:
                rows.append(
                    (
                        os.path.join("refimgs", refnames[pos]),
                        os.path.join(subdir, f"img{k}.bmp"),
                        float(dmos[pos]),
                        cls,
                    )
                )
            pos += 1
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pcdm", description="Full-reference image quality assessment toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("score", help="score one reference/distorted pair")
    sp.add_argument("--ref", required=True)
    sp.add_argument("--dist", required=True)
    sp.add_argument("--metric", choices=evaluation.METRIC_IDS, default="pcdm")
    _add_pipeline_flags(sp)
    sp.set_defaults(func=_cmd_score)

    sp = sub.add_parser("map", help="export a distortion map as grayscale PNG")
    sp.add_argument("--ref", required=True)
    sp.add_argument("--dist", required=True)
    sp.add_argument("--metric", choices=("pcdm", "ssim"), default="pcdm")
    sp.add_argument("--out", required=True)
    sp.add_argument("--residual", action="store_true", help="export 1 - v (pcdm only)")
    _add_pipeline_flags(sp)
    sp.set_defaults(func=_cmd_map)

    sp = sub.add_parser("eval", help="evaluate a metric over a manifest")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--metric", choices=evaluation.METRIC_IDS, required=True)
    sp.add_argument("--out-dir", required=True)
    sp.add_argument("--form", choices=("standard", "shifted"), default="standard")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp.add_argument(
        "--reference-rows",
        action="store_true",
        help="append published multi-scale metric results to the text report",
    )
    _add_pipeline_flags(sp)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("decompose", help="split a distortion into intensity/chroma parts")
    sp.add_argument("--ref", required=True)
    sp.add_argument("--dist", required=True)
    sp.add_argument("--out-intensity", required=True)
    sp.add_argument("--out-chroma", required=True)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("live-manifest", help="build a manifest CSV from a LIVE release-2 tree")
    sp.add_argument("--live-dir", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_live_manifest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PcdmError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
