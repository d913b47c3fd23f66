"""Input parsing with strict schema validation."""

import csv
from dataclasses import dataclass


class SchemaError(ValueError):
    """The input file does not match the expected column contract."""


STUDY_COLUMNS = ("run", "method", "lambda1_opt", "lambda2_opt", "cod", "atf", "failed")
REMARK_COLUMNS = ("lambda2", "f", "g")

#: Canonical method order used across all figures.
METHOD_ORDER = ("RARX", "VF", "DI", "TC", "CS")


@dataclass(frozen=True)
class StudyRow:
    run: int
    method: str
    lambda1: float
    lambda2: float
    cod: float
    atf: float
    failed: bool


def _check_header(header, required, path):
    missing = [c for c in required if header is None or c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")


def load_study(path):
    """Parse a study CSV into rows; failed rows are kept but flagged."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, STUDY_COLUMNS, path)
        col = {name: k for k, name in enumerate(header)}

        def num(cell):
            return float(cell) if cell.strip() else float("nan")

        for line_no, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) < len(header):
                raise SchemaError(f"{path}:{line_no}: expected {len(header)} cells, got {len(row)}")
            rows.append(
                StudyRow(
                    run=int(row[col["run"]]),
                    method=row[col["method"]].strip().upper(),
                    lambda1=num(row[col["lambda1_opt"]]),
                    lambda2=num(row[col["lambda2_opt"]]),
                    cod=num(row[col["cod"]]),
                    atf=num(row[col["atf"]]),
                    failed=row[col["failed"]].strip() == "1",
                )
            )
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_remark_curve(path):
    """Parse a kernel comparison CSV into (lambda2, f, g) float columns."""
    lam2, f, g = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        _check_header(header, REMARK_COLUMNS, path)
        col = {name: k for k, name in enumerate(header)}
        for row in reader:
            if not row or not any(cell.strip() for cell in row):
                continue
            lam2.append(float(row[col["lambda2"]]))
            f.append(float(row[col["f"]]))
            g.append(float(row[col["g"]]))
    if not lam2:
        raise SchemaError(f"{path}: no data rows")
    return lam2, f, g


def methods_present(rows):
    """Methods found in the study, in canonical order."""
    present = {row.method for row in rows}
    ordered = [m for m in METHOD_ORDER if m in present]
    extras = sorted(present - set(METHOD_ORDER))
    return ordered + extras
