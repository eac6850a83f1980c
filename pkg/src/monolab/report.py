"""Tables of bound curves: example reproduction, CSV/JSON emission and parsing."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import (
    BoundCurve,
    OrderedMeasures,
    default_grid,
    monogamy_curve,
    partition_concurrence,
    partition_inputs,
    polygamy_high_curve,
    sandwich_curve,
)
from .linalg import InputError
from .measures import MeasureKind, pairwise_measures
from .states import EXAMPLE_W_PARAMS, PRNG_NAME, w_class_state

EXAMPLES = ("ex1", "ex2", "ex3-lower", "ex3-upper")
SIG_DIGITS = 12
LEVELS = ("level2", "level3", "level4")

# pairwise concurrences listed for the first worked example, used as given
EX1_CONCURRENCES = (0.9107, 0.3333, 0.244)
EX1_S = 0.6
EX2_S = 3 / 5


@dataclass
class RunManifest:
    command: str
    seed: int
    version: str = __version__
    timestamp: str = field(default_factory=lambda: manifest_timestamp())
    prng: str = PRNG_NAME
    notes: dict[str, str] = field(default_factory=dict)

    def items(self) -> list[tuple[str, str]]:
        base = [
            ("command", self.command),
            ("seed", str(self.seed)),
            ("version", self.version),
            ("prng", self.prng),
            ("timestamp", self.timestamp),
        ]
        return base + sorted(self.notes.items())

    def comment_lines(self) -> list[str]:
        return [f"# {k}: {v}" for k, v in self.items()]


def manifest_timestamp(stamp: bool = False) -> str:
    """UTC time from SOURCE_DATE_EPOCH if set, wall clock if ``stamp``, else "unset".

    Leaving it unset by default keeps reruns byte-identical.
    """
    raw = os.environ.get("SOURCE_DATE_EPOCH")
    if raw:
        return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(int(raw)))
    if stamp:
        return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return "unset"


def fmt(value: float) -> str:
    text = f"{float(value):.{SIG_DIGITS}g}"
    return "0" if text == "-0" else text


# -- example reproduction ----------------------------------------------------


def with_gaps(curve: BoundCurve, lower: bool) -> BoundCurve:
    """Append gap columns; a positive gap means ours is the tighter bound."""
    fam = dict(curve.families)
    for name in LEVELS:
        diff = fam["ours"] - fam[name] if lower else fam[name] - fam["ours"]
        fam["gap" + name[-1]] = diff
    return BoundCurve(curve.grid, fam)


def _example_w():
    return w_class_state(EXAMPLE_W_PARAMS)


def reproduce_example(example_id: str, grid=None) -> tuple[BoundCurve, dict[str, str]]:
    """Curve families for one worked example plus notes for the manifest."""
    if example_id not in EXAMPLES:
        raise InputError(f"unknown example {example_id!r}; choose from {', '.join(EXAMPLES)}")
    if example_id == "ex1":
        m = OrderedMeasures.from_values(EX1_CONCURRENCES, 2.0)
        grid = default_grid("monogamy") if grid is None else grid
        curve = with_gaps(monogamy_curve(m, grid, EX1_S), lower=True)
        return curve, {"inputs": "concurrences " + ",".join(map(str, EX1_CONCURRENCES)), "s": fmt(EX1_S)}
    psi = _example_w()
    if example_id == "ex2":
        coa = pairwise_measures(psi, 0, MeasureKind.COA)
        m = OrderedMeasures.from_values(coa.values, 2.0)
        grid = default_grid("polygamy-high") if grid is None else grid
        curve = with_gaps(polygamy_high_curve(m, grid, EX2_S), lower=False)
        return curve, {"inputs": "wclass " + ",".join(fmt(v) for v in EXAMPLE_W_PARAMS.lambdas), "s": fmt(EX2_S)}
    side = example_id.split("-")[1]
    grid = default_grid("sandwich") if grid is None else grid
    curve = sandwich_curve(partition_inputs(psi), grid, side)
    fam = dict(with_gaps(curve, lower=side == "lower").families)
    fam["C_independent"] = partition_concurrence(psi) ** np.asarray(grid, dtype=float)
    return BoundCurve(grid, _ordered(fam)), {"inputs": "wclass " + ",".join(fmt(v) for v in EXAMPLE_W_PARAMS.lambdas), "side": side}


def _ordered(fam: dict) -> dict:
    head = [k for k in ("ours", *LEVELS, "C_independent") if k in fam]
    return {k: fam[k] for k in head + [k for k in fam if k not in head]}


# -- emission ----------------------------------------------------------------


def curve_columns(curve: BoundCurve) -> list[str]:
    return ["exponent", *_ordered(curve.families)]


def render_csv(curve: BoundCurve, manifest: RunManifest) -> str:
    buf = io.StringIO()
    for line in manifest.comment_lines():
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    cols = curve_columns(curve)
    writer.writerow(cols)
    fam = _ordered(curve.families)
    for i, x in enumerate(curve.grid):
        writer.writerow([fmt(x), *(fmt(fam[c][i]) for c in cols[1:])])
    return buf.getvalue()


def render_json(curve: BoundCurve, manifest: RunManifest) -> str:
    fam = _ordered(curve.families)
    doc = {
        "manifest": dict(manifest.items()),
        "exponent": [float(fmt(x)) for x in curve.grid],
        "families": {k: [float(fmt(v)) for v in vals] for k, vals in fam.items()},
    }
    return json.dumps(doc, indent=2) + "\n"


def render(curve: BoundCurve, manifest: RunManifest, fmt_name: str = "csv") -> str:
    if fmt_name == "csv":
        return render_csv(curve, manifest)
    if fmt_name == "json":
        return render_json(curve, manifest)
    raise InputError(f"unknown format {fmt_name!r}")


def parse_csv(text: str) -> tuple[BoundCurve, dict[str, str]]:
    """Read a CSV written by :func:`render_csv` back into a curve and its manifest."""
    manifest = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            manifest[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows or rows[0][0] != "exponent":
        raise InputError("missing header row starting with 'exponent'")
    header, data = rows[0], np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, len(rows[0]))
    fam = {name: data[:, j] for j, name in enumerate(header) if j}
    return BoundCurve(data[:, 0], fam), manifest


def write_output(text: str, out: str | None) -> None:
    if out is None:
        import sys

        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
