"""Result rows, pass/fail checks and CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .config import ExperimentConfig

COLUMNS = ("experiment", "q", "M1", "M2", "N", "sigma", "t", "statistic", "value", "ci_low", "ci_high", "seed")


@dataclass(frozen=True)
class Row:
    """One tagged statistic.  Experiments with a single truncation M report it as M1."""

    experiment: str
    statistic: str
    value: float
    q: int | None = None
    M1: int | None = None
    M2: int | None = None
    N: int | None = None
    sigma: float | None = None
    t: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    seed: int | None = None


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ExperimentResult:
    experiment: str
    config: ExperimentConfig | None = None
    rows: list[Row] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    def add(self, statistic: str, value, **tags):
        """Append a row; complex values become ``.re`` and ``.im`` rows."""
        if isinstance(value, complex):
            lo, hi = tags.pop("ci_low", None), tags.pop("ci_high", None)
            half = None if lo is None else (hi - lo) / 2
            for part, v in (("re", value.real), ("im", value.imag)):
                extra = {} if half is None else {"ci_low": v - half, "ci_high": v + half}
                self.rows.append(Row(self.experiment, f"{statistic}.{part}", float(v), **tags, **extra))
        else:
            self.rows.append(Row(self.experiment, statistic, float(value), **tags))

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def values(self, statistic: str, **tags) -> list[float]:
        return [
            r.value
            for r in self.rows
            if r.statistic == statistic and all(getattr(r, k) == v for k, v in tags.items())
        ]

    def value(self, statistic: str, **tags) -> float:
        vals = self.values(statistic, **tags)
        if len(vals) != 1:
            raise KeyError(f"{len(vals)} rows match {statistic} {tags}")
        return vals[0]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def to_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in result.rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in COLUMNS])
    return buf.getvalue()


def to_json(result: ExperimentResult) -> str:
    doc = {
        "experiment": result.experiment,
        "config": None if result.config is None else result.config.to_dict(),
        "records": [{c: asdict(r)[c] for c in COLUMNS} for r in result.rows],
        "checks": [asdict(c) for c in result.checks],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def emit(result: ExperimentResult, format: str = "csv", path=None) -> str:
    """Serialize the result; also write it to ``path`` when given.  Returns the text."""
    if format == "csv":
        text = to_csv(result)
    elif format == "json":
        text = to_json(result)
    else:
        raise ValueError(f"unknown format {format!r}")
    if path is not None:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write results to {path}: {exc}") from exc
    return text


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
