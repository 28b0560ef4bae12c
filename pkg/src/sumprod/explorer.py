"""Seeded sweeps over fields, set families and sizes, with CSV/JSON reports."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .bounds import MODES, BoundReport, check_chain
from .errors import BadDescriptor, IoFailure, SizeTooLarge, SumprodError
from .field import FieldSpec, make_field
from .setstats import SubsetFq, read_subset

KINDS = ("random", "subfield", "interval", "geometric", "custom-file")

CSV_COLUMNS = [
    "q", "p", "l", "family", "mode", "size_A", "size_B", "size_C", "size_L", "size_image",
    "E3", "lemma1_pass", "lemma2_pass", "tail_pass", "energy_upper_pass", "exact_bound",
    "asymptotic_bound", "ratio", "seed", "status",
]


@dataclass(frozen=True)
class FamilyDescriptor:
    kind: str
    params: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadDescriptor(f"unknown family kind {self.kind!r}")
        if self.kind == "custom-file" and "path" not in self.params:
            raise BadDescriptor("custom-file family needs a 'path'")

    @classmethod
    def from_dict(cls, d) -> FamilyDescriptor:
        if isinstance(d, str):
            return cls(d)
        d = dict(d)
        return cls(d.pop("kind"), d)

    @property
    def label(self) -> str:
        return str(self.params.get("label", self.kind))

    @property
    def deterministic(self) -> bool:
        return self.kind != "random"


@dataclass
class ExperimentConfig:
    fields: list
    families: list
    sizes: list
    trials_per_cell: int = 1
    master_seed: int = 0
    mode: str = "BA+C"
    coupling: str = "equal"
    output: dict | None = None

    def __post_init__(self):
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")
        if self.mode not in MODES + ("both",):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.coupling not in ("equal", "independent"):
            raise ValueError(f"unknown coupling {self.coupling!r}")
        self.fields = [_field_from_config(f) for f in self.fields]
        self.families = [f if isinstance(f, FamilyDescriptor) else FamilyDescriptor.from_dict(f)
                         for f in self.families]

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> ExperimentConfig:
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except OSError as exc:
            raise IoFailure(str(exc)) from exc

    @property
    def modes(self) -> tuple:
        return MODES if self.mode == "both" else (self.mode,)


def _field_from_config(f) -> FieldSpec:
    if isinstance(f, FieldSpec):
        return f
    if isinstance(f, str):
        return FieldSpec.parse(f)
    p, l = f
    return make_field(int(p), int(l))


def resolve_size(q: int, size) -> int:
    """Cardinality from an integer, a density in (0, 1), or {"exponent": e} meaning ceil(q^e)."""
    if isinstance(size, dict):
        e = Fraction(str(size["exponent"]))
        num, den = e.numerator, e.denominator
        k = max(0, int(round(q ** float(e))) - 2)
        while k**den < q**num:
            k += 1
        return k
    if isinstance(size, float):
        if not 0 < size <= 1:
            raise SizeTooLarge(f"density {size} outside (0, 1]")
        return math.ceil(Fraction(str(size)) * q)
    return int(size)


def cell_seed(master_seed: int, index: int, salt: str = "") -> int:
    """Stable 64-bit seed for a sweep cell, independent of execution order."""
    h = hashlib.blake2b(f"{master_seed}:{index}:{salt}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def _progression(F, first, step, size, op):
    out, x = [], int(first)
    for _ in range(size):
        out.append(x)
        x = op(x, step)
    elems = set(out)
    if len(elems) < size:
        raise SizeTooLarge(f"progression has only {len(elems)} distinct terms, {size} requested")
    return SubsetFq.from_elements(F.q, sorted(elems))


def generate_family(F: FieldSpec, d: FamilyDescriptor, size: int, seed: int) -> SubsetFq:
    if d.kind == "subfield":
        deg = int(d.params.get("degree", 1))
        if deg < 1 or F.l % deg:
            raise BadDescriptor(f"subfield degree {deg} does not divide {F.l}")
        return SubsetFq.from_elements(F.q, F.subfield(deg))
    if d.kind == "custom-file":
        G, S = read_subset(d.params["path"])
        if G != F:
            raise BadDescriptor(f"set file is over {G}, not {F}")
        return S
    if size > F.q:
        raise SizeTooLarge(f"size {size} exceeds q = {F.q}")
    if size < 0:
        raise SizeTooLarge("negative size")
    if d.kind == "random":
        rng = np.random.default_rng(seed)
        return SubsetFq.from_elements(F.q, rng.choice(F.q, size=size, replace=False))
    if d.kind == "interval":
        return _progression(F, d.params.get("start", 0), d.params.get("step", 1), size, F.add)
    ratio = int(d.params.get("ratio", F.primitive_element))
    if ratio == 0:
        raise BadDescriptor("geometric ratio must be nonzero")
    return _progression(F, d.params.get("start", 1), ratio, size, F.mul)


def _avoid_zero(F: FieldSpec, S: SubsetFq, seed: int) -> SubsetFq:
    """Swap 0 for a random nonzero element outside S."""
    rng = np.random.default_rng(cell_seed(seed, 0, "avoid-zero"))
    spare = np.flatnonzero(~S.bits)
    spare = spare[spare != 0]
    if spare.size == 0:
        raise SizeTooLarge("no nonzero element left to replace 0")
    elems = [x for x in S.elements().tolist() if x != 0] + [int(rng.choice(spare))]
    return SubsetFq.from_elements(F.q, elems)


def _draw(F, d, size, seed, coupling):
    """Returns (A, B, C, notes)."""
    notes = []
    if coupling == "equal":
        S = generate_family(F, d, size, seed)
        if d.kind == "random" and 0 in S:
            S = _avoid_zero(F, S, seed)
            notes.append("resampled-zero")
        return S, S, S, notes
    A, B, C = (generate_family(F, d, size, cell_seed(seed, i, role))
               for i, role in enumerate("ABC"))
    if d.kind == "random" and 0 in B:
        B = _avoid_zero(F, B, seed)
        notes.append("resampled-zero")
    return A, B, C, notes


def _error_row(F, d, mode, seed, exc) -> BoundReport:
    return BoundReport(field=str(F), q=F.q, p=F.p, l=F.l, mode=mode, size_A=0, size_B=0,
                       size_C=0, size_L=0, size_image=0, family=d.label, seed=seed,
                       status=f"error:{type(exc).__name__}:{exc}")


def iter_cells(cfg: ExperimentConfig):
    """(index, field, family, size, trial) in sweep order.

    Non-random families ignore trials beyond the first, and subfield families
    also ignore the size list, since they would repeat identical instances.
    """
    index = 0
    for F in cfg.fields:
        for d in cfg.families:
            sizes = cfg.sizes[:1] if d.kind in ("subfield", "custom-file") else cfg.sizes
            for size in sizes or [0]:
                trials = 1 if d.deterministic else cfg.trials_per_cell
                for trial in range(trials):
                    yield index, F, d, size, trial
                    index += 1


def run_cell(cfg: ExperimentConfig, index, F, d, size) -> list:
    seed = cell_seed(cfg.master_seed, index)
    try:
        A, B, C, notes = _draw(F, d, resolve_size(F.q, size), seed, cfg.coupling)
    except SumprodError as exc:
        return [_error_row(F, d, m, seed, exc) for m in cfg.modes]
    rows = []
    for mode in cfg.modes:
        try:
            rep = check_chain(F, A, B, C, mode=mode, family=d.label, seed=seed)
            rep.notes[:0] = notes
        except SumprodError as exc:
            rep = _error_row(F, d, mode, seed, exc)
        rows.append(rep)
    return rows


def run_suite(cfg: ExperimentConfig, workers: int = 1) -> list:
    """One report per (field, family, size, trial) cell and mode, in cell order."""
    if not cfg.families or not cfg.fields:
        return []
    cells = list(iter_cells(cfg))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            futures = [pool.submit(run_cell, cfg, i, F, d, s) for i, F, d, s, _ in cells]
            results = [f.result() for f in futures]
    else:
        results = [run_cell(cfg, i, F, d, s) for i, F, d, s, _ in cells]
    return [row for rows in results for row in rows]


def summarize(rows) -> dict:
    """Ratio statistics; c_min is the smallest observed |set| / min{q, ...}."""
    ratios = [r.ratio for r in rows if not r.status.startswith("error")]
    failed = sum(1 for r in rows if r.checks_passed is False)
    return {
        "rows": len(rows),
        "failed": failed,
        "errors": sum(1 for r in rows if r.status.startswith("error")),
        "min_ratio": min(ratios) if ratios else None,
        "median_ratio": statistics.median(ratios) if ratios else None,
        "c_min": min(ratios) if ratios else None,
    }


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def status_text(r: BoundReport) -> str:
    return ";".join([r.status] + list(r.notes))


def csv_row(r: BoundReport) -> list:
    values = {
        "q": r.q, "p": r.p, "l": r.l, "family": r.family, "mode": r.mode,
        "size_A": r.size_A, "size_B": r.size_B, "size_C": r.size_C, "size_L": r.size_L,
        "size_image": r.size_image, "E3": r.E3, "lemma1_pass": r.lemma1_pass,
        "lemma2_pass": r.lemma2_pass, "tail_pass": r.tail_pass,
        "energy_upper_pass": r.energy_upper_pass, "exact_bound": r.exact_lower_bound,
        "asymptotic_bound": r.asymptotic_bound, "ratio": r.ratio, "seed": r.seed,
        "status": status_text(r),
    }
    return [_cell(values[c]) for c in CSV_COLUMNS]


def format_report(rows, fmt: str = "csv", summary: bool = True) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(csv_row(r))
    if summary and rows:
        s = summarize(rows)
        blank = {c: "" for c in CSV_COLUMNS}
        blank["family"] = "summary"
        blank["ratio"] = _cell(s["c_min"])
        blank["status"] = (f"rows={s['rows']};failed={s['failed']};errors={s['errors']};"
                           f"min_ratio={_cell(s['min_ratio'])};median_ratio={_cell(s['median_ratio'])}")
        w.writerow([blank[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def emit_report(rows, fmt: str, path) -> Path:
    path = Path(path)
    try:
        path.write_text(format_report(rows, fmt), newline="\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return path
