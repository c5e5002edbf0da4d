"""
Reporting - Verification records and CSV / JSON table emitters
"""
import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from mpmath import mp, mpf, mpc

from modules.numeric_kernel import working_digits

logger = logging.getLogger(__name__)


def format_value(value, digits=None):
    """Decimal string for an mpf / mpc / int; strings pass through."""
    digits = digits or working_digits()
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, mpc):
        re = mp.nstr(value.real, digits)
        im = mp.nstr(abs(value.imag), digits)
        sign = "-" if value.imag < 0 else "+"
        return f"{re}{sign}{im}j"
    return mp.nstr(mpf(value), digits)


def _distance(computed, reference):
    if isinstance(computed, mpc) or isinstance(reference, mpc):
        delta = mpc(computed) - mpc(reference)
        return max(abs(delta.real), abs(delta.imag))
    return abs(mpf(computed) - mpf(reference))


@dataclass(frozen=True)
class VerificationRecord:
    name: str
    computed: str
    reference: str
    abs_diff: str
    tolerance: str
    passed: bool

    @classmethod
    def compare(cls, name, computed, reference, tol):
        """
        Build a record from two values

        Args:
            name: row label
            computed: value produced by the library
            reference: independent or closed-form value
            tol: absolute tolerance (mpf); complex values compare Re and Im separately

        Returns:
            VerificationRecord with passed = abs_diff <= tol
        """
        diff = _distance(computed, reference)
        return cls(
            name=name,
            computed=format_value(computed),
            reference=format_value(reference),
            abs_diff=format_value(diff, 5),
            tolerance=format_value(tol, 5),
            passed=bool(diff <= tol),
        )

    @classmethod
    def check(cls, name, condition, detail=""):
        """Record for a property that has no single reference value."""
        return cls(name, detail, "", "", "", bool(condition))

    @classmethod
    def failure(cls, name, reason, tol=None):
        """Row for a computation that raised instead of producing a value."""
        logger.warning("%s failed: %s", name, reason)
        return cls(name, "", "", "", format_value(tol, 5) if tol is not None else "", False)

    def to_dict(self):
        return {
            "name": self.name,
            "computed": self.computed,
            "reference": self.reference,
            "abs_diff": self.abs_diff,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


RECORD_HEADER = ["name", "computed", "reference", "abs_diff", "tolerance", "pass"]


@dataclass
class Table:
    header: list
    rows: list = field(default_factory=list)

    @classmethod
    def from_records(cls, records):
        table = cls(list(RECORD_HEADER))
        for record in records:
            table.rows.append([record.to_dict()[key] for key in RECORD_HEADER])
        return table

    def add_row(self, values):
        self.rows.append(list(values))

    def _cells(self, row):
        return [format_value(v) for v in row]

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow(self._cells(row))
        return buffer.getvalue()

    def to_json(self):
        objects = []
        for row in self.rows:
            obj = {}
            for key, value in zip(self.header, row):
                obj[key] = value if isinstance(value, bool) else format_value(value)
            objects.append(obj)
        return json.dumps(objects, indent=2) + "\n"

    def render(self, fmt):
        return self.to_json() if fmt == "json" else self.to_csv()


def emit(table, fmt, path=None, stream=None):
    """
    Write a table to ``path`` or to ``stream``

    Raises:
        OSError: the output file cannot be written
    """
    text = table.render(fmt)
    if path:
        path = Path(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info("Wrote %d rows to %s", len(table.rows), path)
    elif stream is not None:
        stream.write(text)
    return text
