"""Row serialisation (CSV / JSON / JSONL) and run configuration."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import os
from dataclasses import dataclass, fields
from typing import IO

from .claims import CLAIMS, ClaimReport, NClass
from .correlations import Engine

COLUMNS = (
    "N",
    "class",
    "r_upsilon",
    "r_lambda0",
    "r_lambda",
    "noncoprime",
    "coprime",
    "denominator",
    "ratio_K",
    "goldbach",
    "relaxed_goldbach",
    "conjecture1",
    "failing_primes",
    "s_of_N",
    "hl_residual",
)
THEOREM_COLUMNS = (
    "N", "class", "r_upsilon", "noncoprime", "coprime", "denominator", "ratio_K", "relaxed_goldbach",
)
CONJECTURE_COLUMNS = ("N", "class", "denominator", "conjecture1", "failing_primes")

JSON_RECORD_CAP = 10**6
FORMATS = ("csv", "json", "jsonl")


def sig9(x: float) -> float:
    """Round to 9 significant digits (the precision written to reports)."""
    return float(f"{x:.9g}")


def report_row(r: ClaimReport) -> dict:
    """Column values of one report, reals already rounded."""
    rec = r.record
    return {
        "N": r.N,
        "class": r.nclass.value,
        "r_upsilon": sig9(rec.r_upsilon),
        "r_lambda0": sig9(rec.r_lambda0),
        "r_lambda": sig9(rec.r_lambda),
        "noncoprime": sig9(rec.noncoprime_part),
        "coprime": sig9(rec.coprime_part),
        "denominator": sig9(rec.denominator),
        "ratio_K": None if r.ratio_k is None else sig9(r.ratio_k),
        "goldbach": r.goldbach,
        "relaxed_goldbach": r.relaxed_goldbach,
        "conjecture1": r.conjecture1_holds,
        "failing_primes": list(r.failing_primes),
        "s_of_N": sig9(r.s_of_n),
        "hl_residual": sig9(r.hl_residual),
    }


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.9g}"
    if isinstance(v, list):
        return ";".join(str(x) for x in v)
    return str(v)


def parse_csv_row(row: dict[str, str]) -> dict:
    """Inverse of the CSV cell encoding, for round-trip checks and readers."""
    out: dict = {}
    for k, v in row.items():
        if k in ("N",):
            out[k] = int(v)
        elif k == "class":
            out[k] = v
        elif k in ("goldbach", "relaxed_goldbach", "conjecture1"):
            out[k] = None if v == "" else v == "true"
        elif k == "failing_primes":
            out[k] = [int(x) for x in v.split(";")] if v else []
        else:
            out[k] = None if v == "" else float(v)
    return out


def timestamp_line() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


class ReportWriter:
    """Writes report rows to ``stream`` in one of :data:`FORMATS`.

    With ``timestamp=True`` CSV output starts with ``# generated <ISO-8601>``
    and JSONL with ``{"generated": ...}``.  JSON output is a bare array and
    never carries a timestamp.
    """

    def __init__(self, stream: IO[str], fmt: str = "csv", columns=COLUMNS, timestamp: bool = True):
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}")
        self.stream = stream
        self.fmt = fmt
        self.columns = tuple(columns)
        self.count = 0
        self._csv = None
        if fmt == "csv":
            if timestamp:
                stream.write(f"# generated {timestamp_line()}\n")
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(self.columns)
        elif fmt == "jsonl":
            if timestamp:
                stream.write(json.dumps({"generated": timestamp_line()}) + "\n")
        else:
            stream.write("[")

    def write(self, r: ClaimReport) -> None:
        row = report_row(r)
        row = {k: row[k] for k in self.columns}
        if self.fmt == "csv":
            self._csv.writerow([_csv_cell(row[k]) for k in self.columns])
        elif self.fmt == "jsonl":
            self.stream.write(json.dumps(row) + "\n")
        else:
            if self.count >= JSON_RECORD_CAP:
                raise OverflowError(f"JSON output is capped at {JSON_RECORD_CAP} records; use jsonl")
            self.stream.write(("\n" if self.count == 0 else ",\n") + json.dumps(row))
        self.count += 1

    def close(self) -> None:
        if self.fmt == "json":
            self.stream.write("\n]\n" if self.count else "]\n")
        self.stream.flush()


def read_rows(text: str, fmt: str) -> list[dict]:
    """Parse writer output back into typed rows (timestamp lines skipped)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("# generated")]
    if fmt == "csv":
        return [parse_csv_row(r) for r in csv.DictReader(io.StringIO("\n".join(lines)))]
    if fmt == "jsonl":
        return [r for r in map(json.loads, lines) if "generated" not in r]
    return json.loads("\n".join(lines))


# -- configuration ------------------------------------------------------------


@dataclass
class RunConfig:
    limit: int | None = None
    lo: int = 8
    hi: int = 1000
    weights: tuple[str, ...] = ("lambda", "lambda0", "upsilon")
    engine: Engine = Engine.DIRECT
    output_format: str = "csv"
    cache_path: str | None = None
    threads: int | str = "auto"
    classes: tuple[NClass, ...] | None = None
    claims: tuple[str, ...] | None = None
    product_limit: int | None = None
    timestamp: bool = True
    allow_uncertified: bool = False

    def resolved_threads(self) -> int:
        if self.threads == "auto":
            return max(1, os.cpu_count() or 1)
        n = int(self.threads)
        if n < 1:
            raise ValueError(f"threads must be >= 1, got {n}")
        return n

    def validate(self) -> None:
        if self.lo > self.hi:
            return
        if self.limit is not None and self.hi > self.limit:
            raise ValueError(f"hi={self.hi} exceeds limit={self.limit}")


def _coerce(name: str, raw: str):
    raw = raw.strip()
    if name in ("limit", "lo", "hi", "product_limit"):
        return int(float(raw)) if "e" in raw.lower() else int(raw)
    if name == "engine":
        return Engine(raw.lower())
    if name == "output_format":
        if raw.lower() not in FORMATS:
            raise ValueError(f"unknown format {raw!r}")
        return raw.lower()
    if name == "threads":
        return raw if raw == "auto" else int(raw)
    if name == "weights":
        return tuple(w.strip() for w in raw.split(",") if w.strip())
    if name == "classes":
        return tuple(NClass(c.strip().lower()) for c in raw.split(",") if c.strip())
    if name == "claims":
        out = tuple(c.strip() for c in raw.split(",") if c.strip())
        bad = set(out) - set(CLAIMS)
        if bad:
            raise ValueError(f"unknown claims {sorted(bad)}")
        return out
    if name in ("timestamp", "allow_uncertified"):
        return raw.lower() in ("1", "true", "yes", "on")
    return raw


_ALIASES = {"format": "output_format", "cache": "cache_path", "class": "classes"}


def load_config_file(path: str | os.PathLike) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    known = {f.name for f in fields(RunConfig)}
    out: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = _ALIASES.get(key.replace("-", "_"), key.replace("-", "_"))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, value)
    return out


def resolve_config(cli: dict, file_path: str | None = None, env=os.environ) -> RunConfig:
    """Merge settings: CLI flags beat the config file, which beats defaults.

    ``PCL_CACHE`` supplies the cache path when neither CLI nor file does.
    """
    merged: dict = {}
    if env.get("PCL_CACHE"):
        merged["cache_path"] = env["PCL_CACHE"]
    if file_path:
        merged.update(load_config_file(file_path))
    merged.update({k: v for k, v in cli.items() if v is not None})
    cfg = RunConfig(**merged)
    cfg.engine = Engine(cfg.engine)
    return cfg
