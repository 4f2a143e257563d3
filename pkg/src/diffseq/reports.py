"""Line-delimited report records for branch scans (JSON lines, CSV, text table).

Interval endpoints are dyadic, so they have exact finite decimal expansions.
With ``digits=None`` they are written exactly; with a digit count they are
first rounded outward (lo down, hi up) to that many fractional digits, and the
in-memory record is rounded the same way so a written report re-parses to the
records that produced it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil, floor
from typing import IO, Iterable, List, Optional, Union

from .diophantine_branch import Branch, StepRecord
from .exact_arith import Verdict

CSV_COLUMNS = ("x_prime", "n", "A", "p", "zn", "is_integer", "step_lo", "step_hi",
               "lower", "upper", "monotone", "bits")
CHECKPOINT_EVERY = 10_000


def format_decimal(q: Fraction, digits: Optional[int] = None) -> str:
    """Exact decimal text for q; q must terminate unless ``digits`` is given."""
    q = Fraction(q)
    if digits is None:
        den = q.denominator
        twos = (den & -den).bit_length() - 1
        if den != 1 << twos:
            raise ValueError(f"{q} has no finite binary expansion")
        digits = twos
        scaled = q.numerator * 5 ** twos
    else:
        scaled = q * 10 ** digits
        if scaled.denominator != 1:
            raise ValueError(f"{q} needs more than {digits} digits")
        scaled = scaled.numerator
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def parse_decimal(text: str) -> Fraction:
    return Fraction(text)


def round_outward(lo: Fraction, hi: Fraction, digits: int):
    scale = 10 ** digits
    return Fraction(floor(lo * scale), scale), Fraction(ceil(hi * scale), scale)


def rounded(rec: StepRecord, digits: Optional[int]) -> StepRecord:
    if digits is None:
        return rec
    lo, hi = round_outward(rec.step_lo, rec.step_hi, digits)
    return replace(rec, step_lo=lo, step_hi=hi)


@dataclass
class ScanSummary:
    x_prime: int
    n: int
    A: int
    p_start: int
    p_stop: int
    grade: str
    digits: Optional[int] = None
    records: int = 0
    bounds_certified: int = 0
    monotone_certified: int = 0
    violations: List[int] = field(default_factory=list)
    undecided: List[int] = field(default_factory=list)
    integer_points: List[int] = field(default_factory=list)

    @classmethod
    def start(cls, branch: Branch, p_start: int, p_stop: int, digits=None) -> "ScanSummary":
        return cls(branch.x_prime, branch.n, branch.A, p_start, p_stop, branch.grade, digits)

    def add(self, rec: StepRecord) -> None:
        self.records += 1
        if rec.bounds_ok:
            self.bounds_certified += 1
        if rec.monotone is Verdict.GREATER:
            self.monotone_certified += 1
        if rec.violation:
            self.violations.append(rec.p)
        if rec.undecided:
            self.undecided.append(rec.p)
        if rec.is_integer:
            self.integer_points.append(rec.p)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.undecided


def _verdict(v: Optional[Verdict]) -> Optional[str]:
    return None if v is None else v.value


def record_to_dict(rec: StepRecord, digits: Optional[int] = None) -> dict:
    return {
        "type": "step",
        "x_prime": rec.x_prime, "n": rec.n, "A": rec.A, "p": rec.p,
        "zn": str(rec.zn),
        "is_integer": rec.is_integer,
        "step_lo": format_decimal(rec.step_lo, digits),
        "step_hi": format_decimal(rec.step_hi, digits),
        "lower": _verdict(rec.lower), "upper": _verdict(rec.upper),
        "monotone": _verdict(rec.monotone),
        "bits": rec.bits,
    }


def record_from_dict(d: dict) -> StepRecord:
    mono = d.get("monotone")
    return StepRecord(
        int(d["x_prime"]), int(d["n"]), int(d["A"]), int(d["p"]), int(d["zn"]),
        d["is_integer"] in (True, "True", "true", "1"),
        parse_decimal(d["step_lo"]), parse_decimal(d["step_hi"]),
        Verdict(d["lower"]), Verdict(d["upper"]),
        Verdict(mono) if mono not in (None, "") else None,
        int(d["bits"]),
    )


def summary_to_dict(s: ScanSummary) -> dict:
    d = {"type": "summary"}
    d.update(s.__dict__)
    return d


def summary_from_dict(d: dict) -> ScanSummary:
    d = dict(d)
    d.pop("type", None)
    return ScanSummary(**d)


def read_jsonl(stream: IO[str]) -> List[Union[StepRecord, ScanSummary]]:
    out = []
    for line in stream:
        line = line.strip()
        if not line:
            continue
        d = json.loads(line)
        out.append(summary_from_dict(d) if d.get("type") == "summary" else record_from_dict(d))
    return out


def read_csv(stream: IO[str]) -> List[StepRecord]:
    return [record_from_dict(row) for row in csv.DictReader(stream)]


class ReportWriter:
    """Sole owner of the output stream; flushes every CHECKPOINT_EVERY records."""

    def __init__(self, stream: IO[str], fmt: str = "jsonl", digits: Optional[int] = None):
        if fmt not in ("jsonl", "csv", "table"):
            raise ValueError(f"unknown format {fmt!r}")
        self.stream, self.fmt, self.digits = stream, fmt, digits
        self.count = 0
        if fmt == "csv":
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(CSV_COLUMNS)
        elif fmt == "table":
            stream.write(self._table_line(CSV_COLUMNS) + "\n")

    @staticmethod
    def _table_line(cells) -> str:
        widths = (7, 3, 3, 7, 24, 10, 26, 26, 9, 9, 9, 5)
        return " ".join(str(c).rjust(w) for c, w in zip(cells, widths))

    def write(self, rec: StepRecord) -> StepRecord:
        """Write one record; returns the (possibly rounded) record written."""
        rec = rounded(rec, self.digits)
        d = record_to_dict(rec, self.digits)
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(d) + "\n")
        else:
            row = ["" if d[c] is None else d[c] for c in CSV_COLUMNS]
            if self.fmt == "csv":
                self._csv.writerow(row)
            else:
                self.stream.write(self._table_line(row) + "\n")
        self.count += 1
        if self.count % CHECKPOINT_EVERY == 0:
            self.stream.flush()
        return rec

    def write_summary(self, s: ScanSummary) -> None:
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(summary_to_dict(s)) + "\n")
        elif self.fmt == "table":
            self.stream.write(render_summary(s) + "\n")
        # csv carries step rows only; the summary goes to stderr from the CLI
        self.stream.flush()


def render_summary(s: ScanSummary) -> str:
    lines = [
        f"branch x'={s.x_prime} n={s.n} A={s.A}  p in [{s.p_start}, {s.p_stop})  [{s.grade}]",
        f"  records: {s.records}",
        f"  1 < Step < (A+1)^(1/n) certified: {s.bounds_certified}",
        f"  Step increasing certified: {s.monotone_certified}",
        f"  integer points: {s.integer_points}",
        f"  violations: {s.violations}",
        f"  undecided: {s.undecided}",
    ]
    return "\n".join(lines)


def dumps_records(records: Iterable[StepRecord], fmt: str = "jsonl",
                  digits: Optional[int] = None) -> str:
    buf = io.StringIO()
    w = ReportWriter(buf, fmt, digits)
    for r in records:
        w.write(r)
    return buf.getvalue()
