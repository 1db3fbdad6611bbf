"""Dataset evaluation harness.

Covers manifest ingestion, the five-parameter nonlinear regression
mapping raw metric scores onto the DMOS scale, correlation statistics,
per-distortion-class reports and the chroma/intensity decomposition
experiment.
"""

import csv
import os
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from . import baselines, pipeline
from .colorspace import rgb_to_ycbcr, ycbcr_to_rgb
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    MissingFile,
    NonConvergence,
    ParseError,
    UnknownClass,
)
from .imageio import load_image

DISTORTION_CLASSES = ("jp2k", "jpeg", "wn", "gblur", "ff", "other")
METRIC_IDS = ("pcdm", "psnr", "ssim", "de2000")

# Published benchmark results for the multi-scale structural metrics we
# deliberately do not implement; carried into reports as labeled
# external reference rows, never computed here.
REFERENCE_ROWS = {
    "ms-ssim": {
        "cc": {"jp2k": 0.962, "jpeg": 0.961, "wn": 0.977, "gblur": 0.943, "ff": 0.948, "all": 0.946},
        "rmse": {"jp2k": 7.12, "jpeg": 7.30, "wn": 8.38, "gblur": 7.38, "ff": 7.04, "all": 7.43},
    },
    "cw-ssim": {
        "cc": {"jp2k": 0.926, "jpeg": 0.927, "wn": 0.949, "gblur": 0.768, "ff": 0.835, "all": 0.872},
        "rmse": {"jp2k": 9.75, "jpeg": 9.30, "wn": 9.24, "gblur": 14.45, "ff": 13.62, "all": 10.87},
    },
}


@dataclass(frozen=True)
class ManifestEntry:
    ref_path: str
    dist_path: str
    dmos: float
    distortion_class: str


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple

    def classes(self):
        seen = []
        for e in self.entries:
            if e.distortion_class not in seen:
                seen.append(e.distortion_class)
        return seen


def load_manifest(path) -> DatasetManifest:
    """Parse a ``ref,dist,dmos,class`` CSV; paths resolve relative to it."""
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"empty manifest {path}") from None
        if [h.strip() for h in header] != ["ref", "dist", "dmos", "class"]:
            raise ParseError(f"manifest header must be 'ref,dist,dmos,class', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            ref, dist, dmos_s, cls = (f.strip() for f in row)
            if cls not in DISTORTION_CLASSES:
                raise UnknownClass(f"{path}:{lineno}: unknown class {cls!r}")
            try:
                dmos = float(dmos_s)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad dmos {dmos_s!r}") from None
            if not np.isfinite(dmos):
                raise ParseError(f"{path}:{lineno}: dmos must be finite")
            rp = ref if os.path.isabs(ref) else os.path.join(base, ref)
            dp = dist if os.path.isabs(dist) else os.path.join(base, dist)
            for p in (rp, dp):
                if not os.path.isfile(p):
                    raise MissingFile(f"{path}:{lineno}: no such file {p}")
            entries.append(ManifestEntry(rp, dp, dmos, cls))
    return DatasetManifest(entries=tuple(entries))


# ---------------------------------------------------------------------------
# Nonlinear regression onto the DMOS scale
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionParams:
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    beta5: float

    def as_array(self):
        return np.array([self.beta1, self.beta2, self.beta3, self.beta4, self.beta5])


def regression_curve(beta, s0, form: str = "standard"):
    """Five-parameter monotone map from raw scores to the DMOS scale.

    ``standard`` is the usual logistic form
    b1*(1/2 - 1/(1 + exp(b2*(s0 - b3)))) + b4*s0 + b5. ``shifted``
    is the variant b1*(1 - 1/(2 + exp(b2*(s0 - b3)))) + b4*s0 + b5 with
    asymptotes at b1/2 and b1 instead of symmetric around zero; both
    span the same model family up to reparametrization of b5.
    """
    b1, b2, b3, b4, b5 = beta
    s0 = np.asarray(s0, dtype=np.float64)
    t = np.clip(b2 * (s0 - b3), -500.0, 500.0)
    if form == "standard":
        core = 0.5 - 1.0 / (1.0 + np.exp(t))
    elif form == "shifted":
        core = 1.0 - 1.0 / (2.0 + np.exp(t))
    else:
        raise ValueError(f"unknown regression form {form!r}")
    return b1 * core + b4 * s0 + b5


def fit_regression(raw_scores, dmos, form: str = "standard") -> RegressionParams:
    """Least-squares fit of :func:`regression_curve` to (raw, dmos).

    Deterministic: a documented initialization plus five fixed
    perturbed restarts, best fit kept.
    """
    s0 = np.asarray(raw_scores, dtype=np.float64)
    y = np.asarray(dmos, dtype=np.float64)
    if s0.shape != y.shape or s0.ndim != 1 or s0.size < 5:
        raise DegenerateInput("need two equal-length 1-D arrays of at least 5 points")
    if np.ptp(s0) == 0.0:
        raise DegenerateInput("raw scores are all equal")

    std = s0.std()
    init = np.array(
        [
            np.ptp(y),
            1.0 / std if std > 0 else 1.0,
            s0.mean(),
            0.0,
            y.mean(),
        ]
    )

    # Exact affine least-squares start: with beta1 = 0 the model is
    # linear, so keeping this start guarantees the fit never does worse
    # than the best straight line.
    slope, intercept = np.polyfit(s0, y, 1)
    affine = np.array([0.0, init[1], init[2], slope, intercept])

    rng = np.random.default_rng(0)
    starts = [init, affine]
    for _ in range(5):
        starts.append(init * (1.0 + 0.3 * rng.standard_normal(5)) + 0.1 * rng.standard_normal(5))

    best = None
    for x0 in starts:
        try:
            res = least_squares(
                lambda b: regression_curve(b, s0, form) - y,
                x0,
                method="lm",
                max_nfev=10_000,
            )
        except Exception:
            continue
        if best is None or res.cost < best.cost:
            best = res
    if best is None:
        raise NonConvergence("no regression start converged")
    return RegressionParams(*best.x)


# ---------------------------------------------------------------------------
# Correlation statistics
# ---------------------------------------------------------------------------


def _check_xy(x, y, min_len=2):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < min_len:
        raise DegenerateInput(f"need two equal-length 1-D arrays of at least {min_len} points")
    return x, y


def pearson_cc(x, y) -> float:
    """Pearson linear correlation coefficient."""
    x, y = _check_xy(x, y)
    xd = x - x.mean()
    yd = y - y.mean()
    denom = np.sqrt((xd * xd).sum() * (yd * yd).sum())
    if denom == 0.0:
        raise DegenerateInput("zero variance input")
    return float((xd * yd).sum() / denom)


def rmse(x, y) -> float:
    """Root-mean-square error between two equal-length vectors."""
    x, y = _check_xy(x, y)
    return float(np.sqrt(np.mean((x - y) ** 2)))


def _average_ranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ranks = np.empty_like(xs)
    i = 0
    n = xs.size
    while i < n:
        j = i
        while j + 1 < n and xs[j + 1] == xs[i]:
            j += 1
        ranks[i : j + 1] = 0.5 * (i + j) + 1.0  # 1-based average rank
        i = j + 1
    out = np.empty_like(ranks)
    out[order] = ranks
    return out


def spearman_rho(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""
    x, y = _check_xy(x, y)
    return pearson_cc(_average_ranks(x), _average_ranks(y))


# ---------------------------------------------------------------------------
# Full evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReportCell:
    n: int
    pearson_cc: float
    rmse: float
    spearman_rho: float
    params: RegressionParams


@dataclass(frozen=True)
class MetricReport:
    metric_id: str
    cells: dict  # class name (plus "all") -> ReportCell
    scatter: tuple  # rows of (raw, regressed, dmos, class)
    excluded_infinite: int


def raw_score(metric_id: str, ref, dist, config=None) -> float:
    """Scalar raw score of one metric on one image pair."""
    if metric_id == "pcdm":
        return pipeline.pcdm_score(ref, dist, config).score
    if metric_id == "psnr":
        return baselines.psnr(ref, dist)
    if metric_id == "ssim":
        return baselines.ssim(ref, dist)[0]
    if metric_id == "de2000":
        return baselines.mean_de2000(ref, dist)
    raise ValueError(f"unknown metric {metric_id!r}; expected one of {METRIC_IDS}")


def evaluate(
    manifest: DatasetManifest,
    metric_id: str,
    config=None,
    form: str = "standard",
    jobs: int = 1,
    progress=None,
) -> MetricReport:
    """Score every manifest pair, fit the regression per class and
    overall, and report CC/RMSE/Spearman per cell.

    Non-finite raw scores (identical pairs under PSNR) are excluded
    with a warning count. ``jobs`` > 1 scores pairs in a process pool.
    """
    if metric_id not in METRIC_IDS:
        raise ValueError(f"unknown metric {metric_id!r}; expected one of {METRIC_IDS}")
    entries = manifest.entries
    if not entries:
        raise DegenerateInput("empty manifest")

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raws = list(pool.map(_score_entry, [(e, metric_id, config) for e in entries]))
    else:
        raws = []
        for k, e in enumerate(entries):
            raws.append(_score_entry((e, metric_id, config)))
            if progress is not None:
                progress(k + 1, len(entries))

    raws = np.array(raws, dtype=np.float64)
    finite = np.isfinite(raws)
    excluded = int((~finite).sum())
    if excluded:
        warnings.warn(f"excluded {excluded} pairs with non-finite {metric_id} scores")

    dmos = np.array([e.dmos for e in entries])
    classes = np.array([e.distortion_class for e in entries])

    cells = {}
    scatter = []
    groups = [(c, classes == c) for c in manifest.classes()]
    groups.append(("all", np.ones(len(entries), dtype=bool)))
    for name, mask in groups:
        mask = mask & finite
        n = int(mask.sum())
        if n == 0:
            continue
        params = fit_regression(raws[mask], dmos[mask], form=form)
        pred = regression_curve(params.as_array(), raws[mask], form=form)
        cells[name] = ReportCell(
            n=n,
            pearson_cc=pearson_cc(pred, dmos[mask]),
            rmse=rmse(pred, dmos[mask]),
            spearman_rho=spearman_rho(raws[mask], dmos[mask]),
            params=params,
        )
        if name != "all":
            for r, p, d in zip(raws[mask], pred, dmos[mask]):
                scatter.append((float(r), float(p), float(d), name))
    return MetricReport(
        metric_id=metric_id, cells=cells, scatter=tuple(scatter), excluded_infinite=excluded
    )


def _score_entry(args):
    entry, metric_id, config = args
    ref = load_image(entry.ref_path)
    dist = load_image(entry.dist_path)
    return raw_score(metric_id, ref, dist, config)


def report_text(report: MetricReport, include_reference_rows: bool = False) -> str:
    """Aligned plain-text table of the report."""
    order = [c for c in (*DISTORTION_CLASSES, "all") if c in report.cells]
    lines = []
    lines.append(f"metric: {report.metric_id}")
    header = f"{'cell':>8} {'n':>5} {'CC':>8} {'RMSE':>8} {'SROCC':>8}"
    lines.append(header)
    for name in order:
        c = report.cells[name]
        lines.append(
            f"{name:>8} {c.n:>5d} {c.pearson_cc:>8.4f} {c.rmse:>8.3f} {c.spearman_rho:>8.4f}"
        )
    if report.excluded_infinite:
        lines.append(f"excluded non-finite scores: {report.excluded_infinite}")
    if include_reference_rows:
        lines.append("")
        lines.append("external reference values (published, not computed here):")
        for metric, rows in REFERENCE_ROWS.items():
            for cls in (*DISTORTION_CLASSES[:5], "all"):
                if cls in rows["cc"]:
                    lines.append(
                        f"{metric:>8} {cls:>6} CC={rows['cc'][cls]:.3f} RMSE={rows['rmse'][cls]:.2f}"
                    )
    return "\n".join(lines) + "\n"


def report_csv_rows(report: MetricReport):
    """Machine-readable rows: metric,cell,n,cc,rmse,srocc,beta1..beta5."""
    order = [c for c in (*DISTORTION_CLASSES, "all") if c in report.cells]
    rows = [["metric", "cell", "n", "cc", "rmse", "srocc", "b1", "b2", "b3", "b4", "b5"]]
    for name in order:
        c = report.cells[name]
        rows.append(
            [
                report.metric_id,
                name,
                c.n,
                f"{c.pearson_cc:.6f}",
                f"{c.rmse:.6f}",
                f"{c.spearman_rho:.6f}",
                *(f"{b:.6g}" for b in c.params.as_array()),
            ]
        )
    return rows


def write_report(report: MetricReport, out_dir, include_reference_rows: bool = False) -> None:
    """Write report.txt, report.csv and scatter.csv into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    prefix = os.path.join(out_dir, report.metric_id)
    with open(prefix + "_report.txt", "w", encoding="utf-8") as fh:
        fh.write(report_text(report, include_reference_rows))
    with open(prefix + "_report.csv", "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(report_csv_rows(report))
    with open(prefix + "_scatter.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["raw", "regressed", "dmos", "class"])
        for row in report.scatter:
            w.writerow([f"{row[0]:.9g}", f"{row[1]:.9g}", f"{row[2]:.9g}", row[3]])


# ---------------------------------------------------------------------------
# Chroma / intensity decomposition
# ---------------------------------------------------------------------------


def decompose_distortion(ref, dist):
    """Split a distortion into intensity-only and chroma-only variants.

    intensity-only: distorted luma with the reference chroma planes.
    chroma-only: reference luma with the distorted chroma planes.
    """
    ref = np.asarray(ref)
    dist = np.asarray(dist)
    if ref.shape != dist.shape:
        raise DimensionMismatch(f"image shapes differ: {ref.shape} vs {dist.shape}")
    ref_ycc = rgb_to_ycbcr(ref)
    dist_ycc = rgb_to_ycbcr(dist)
    intensity = dist_ycc.copy()
    intensity[..., 1:] = ref_ycc[..., 1:]
    chroma = ref_ycc.copy()
    chroma[..., 1:] = dist_ycc[..., 1:]
    return ycbcr_to_rgb(intensity), ycbcr_to_rgb(chroma)
