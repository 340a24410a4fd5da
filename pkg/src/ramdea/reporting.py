"""Dataset ingestion, pipeline orchestration, and report rendering.

The CSV dialect is self-describing: the first column is ``dmu`` and
every other column is headed ``in:<label>`` or ``out:<label>`` in any
order.  Lines starting with '#' and blank lines are ignored; decimal
separator is '.'.

Rendering mirrors the scoring tables common in the field: three decimal
places for table and csv output, full (round-trippable) precision for
json.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from . import dea, grs, rts
from .lp import LpError, SolverSettings

__all__ = [
    "DataFormatError",
    "AnalysisConfig",
    "DmuReport",
    "parse_dataset",
    "run_analysis",
    "render_report",
]

OUTPUT_FORMATS = ("json", "csv", "table")

_RTS_SHORT = {rts.INCREASING: "IRS", rts.CONSTANT: "CRS", rts.DECREASING: "DRS"}

_PIPELINE_ERRORS = (
    LpError,
    grs.DegenerateNormalizerError,
    rts.NotOnFrontierError,
    rts.NormalizationUnattainableError,
)


class DataFormatError(ValueError):
    """Malformed input data or configuration."""


@dataclass
class AnalysisConfig:
    """Knobs for one end-to-end run; defaults match the library modules."""

    scheme: str = "ram"
    regime: str = "vrs"
    feas_tol: float = 1e-9
    eff_tol: float = dea.EFF_TOL
    support_tol: float = grs.SUPPORT_TOL
    rts_tol: float = rts.RTS_TOL
    output_format: str = "table"
    dmu_filter: tuple[str, ...] | None = None


@dataclass
class DmuReport:
    """Per-unit results; a group of fields is None when its stage was skipped."""

    name: str
    rho: float | None = None
    efficient: bool | None = None
    grs_members: list[tuple[str, float]] | None = None
    projection_inputs: dict[str, float] | None = None
    projection_outputs: dict[str, float] | None = None
    minimum_face_dimension: int | None = None
    rts_class: str | None = None
    omega_min: float | None = None
    omega_max: float | None = None


def parse_dataset(source: str) -> dea.Dataset:
    """Parse CSV text into a Dataset, preserving column order.

    Raises DataFormatError with the offending line (and column, where it
    applies) for malformed headers, duplicate names, non-numeric cells
    and ragged rows.
    """
    rows = []
    for lineno, line in enumerate(source.splitlines(), 1):
        if line.startswith("#") or not line.strip():
            continue
        cells = next(csv.reader([line]))
        rows.append((lineno, [cell.strip() for cell in cells]))
    if not rows:
        raise DataFormatError("no header row found")

    header_line, header = rows[0]
    if not header or header[0].lower() != "dmu":
        raise DataFormatError(
            f"line {header_line}: first column must be 'dmu', got "
            f"{header[0] if header else ''!r}"
        )
    in_cols: list[tuple[int, str]] = []
    out_cols: list[tuple[int, str]] = []
    for pos, cell in enumerate(header[1:], start=2):
        if cell.startswith("in:") and len(cell) > 3:
            in_cols.append((pos, cell[3:]))
        elif cell.startswith("out:") and len(cell) > 4:
            out_cols.append((pos, cell[4:]))
        else:
            raise DataFormatError(
                f"line {header_line}, column {pos}: expected 'in:<label>' or "
                f"'out:<label>', got {cell!r}"
            )
    if not in_cols or not out_cols:
        raise DataFormatError(
            f"line {header_line}: need at least one 'in:' and one 'out:' column"
        )
    if len(rows) == 1:
        raise DataFormatError("no data rows after the header")

    names: list[str] = []
    values: list[list[float]] = []
    for lineno, cells in rows[1:]:
        if len(cells) != len(header):
            raise DataFormatError(
                f"line {lineno}: expected {len(header)} cells, got {len(cells)}"
            )
        name = cells[0]
        if name in names:
            raise DataFormatError(f"line {lineno}: duplicate DMU name {name!r}")
        names.append(name)
        row = []
        for pos, cell in enumerate(cells[1:], start=2):
            try:
                value = float(cell)
            except ValueError:
                value = float("nan")
            if value != value or value in (float("inf"), float("-inf")):
                raise DataFormatError(
                    f"line {lineno}, column {pos}: non-numeric value {cell!r}"
                )
            row.append(value)
        values.append(row)

    inputs = [[values[j][pos - 2] for j in range(len(names))] for pos, _ in in_cols]
    outputs = [[values[j][pos - 2] for j in range(len(names))] for pos, _ in out_cols]
    return dea.Dataset(
        names, inputs, outputs,
        input_labels=[label for _, label in in_cols],
        output_labels=[label for _, label in out_cols],
    )


def _validate_config(config: AnalysisConfig, dataset: dea.Dataset) -> None:
    if config.scheme not in dea.SCHEMES:
        raise DataFormatError(f"unknown scheme {config.scheme!r}")
    if config.regime not in dea.REGIMES:
        raise DataFormatError(f"unknown regime {config.regime!r}")
    if config.output_format not in OUTPUT_FORMATS:
        raise DataFormatError(f"unknown output format {config.output_format!r}")
    for field in ("feas_tol", "eff_tol", "support_tol", "rts_tol"):
        if getattr(config, field) <= 0.0:
            raise DataFormatError(f"{field} must be strictly positive")
    if config.dmu_filter:
        unknown = [name for name in config.dmu_filter if name not in dataset.names]
        if unknown:
            raise DataFormatError(f"unknown DMU name(s) in filter: {', '.join(unknown)}")


def _annotated(name: str, exc: Exception) -> Exception:
    return exc.__class__(f"{name}: {exc}")


def run_analysis(config: AnalysisConfig, dataset: dea.Dataset,
                 stages: str = "all") -> list[DmuReport]:
    """Score, reference and classify every (filtered) unit, in dataset order.

    ``stages`` limits the work: "efficiency" stops after scoring, "grs"
    adds reference sets and faces, "all" adds the scale classification
    (skipped under the "crs" regime, whose class is constant everywhere).
    """
    if stages not in ("efficiency", "grs", "all"):
        raise ValueError(f"unknown stages {stages!r}")
    _validate_config(config, dataset)
    settings = SolverSettings(feas_tol=config.feas_tol)
    wanted = set(config.dmu_filter) if config.dmu_filter else None
    selected = [
        j for j, name in enumerate(dataset.names)
        if wanted is None or name in wanted
    ]

    results = []
    for j, name in enumerate(dataset.names):
        try:
            results.append(dea.evaluate(
                dataset, j, config.scheme, config.regime, settings, config.eff_tol
            ))
        except _PIPELINE_ERRORS as exc:
            raise _annotated(name, exc) from exc

    reports = {}
    for j in selected:
        reports[j] = DmuReport(
            name=dataset.names[j],
            rho=float(results[j].rho),
            efficient=bool(results[j].efficient),
        )
    if stages == "efficiency":
        return [reports[j] for j in selected]

    frontier = [j for j in range(dataset.n_dmus) if results[j].efficient]
    for j in selected:
        name = dataset.names[j]
        try:
            reference = grs.identify_grs(
                dataset, j, results[j], config.scheme, config.regime,
                frontier, settings, config.support_tol, config.eff_tol,
            )
            face = grs.minimum_face(dataset, reference)
        except _PIPELINE_ERRORS as exc:
            raise _annotated(name, exc) from exc
        report = reports[j]
        report.grs_members = [
            (dataset.names[member], float(reference.weights[k]))
            for k, member in enumerate(reference.efficient_indices)
            if member in reference.members
        ]
        report.projection_inputs = dict(zip(
            dataset.input_labels,
            (float(v) for v in reference.interior_projection_inputs),
        ))
        report.projection_outputs = dict(zip(
            dataset.output_labels,
            (float(v) for v in reference.interior_projection_outputs),
        ))
        report.minimum_face_dimension = face.dimension

        if stages == "all" and config.regime == "vrs":
            anchor = (reference.interior_projection_inputs,
                      reference.interior_projection_outputs)
            try:
                omega_min, omega_max = rts.intercept_bounds(dataset, anchor, settings)
            except _PIPELINE_ERRORS as exc:
                raise _annotated(name, exc) from exc
            report.rts_class = rts.classify_rts(
                (omega_min, omega_max), config.rts_tol
            )
            report.omega_min = omega_min
            report.omega_max = omega_max
    return [reports[j] for j in selected]


def render_report(reports: list[DmuReport], output_format: str) -> str:
    """Serialise reports to json, csv or aligned table text.

    Field groups absent from the reports (skipped stages, or the scale
    classification under "crs") are omitted from the output.
    """
    if output_format == "json":
        return _render_json(reports)
    if output_format == "csv":
        return _render_csv(reports)
    if output_format == "table":
        return _render_table(reports)
    raise DataFormatError(f"unknown output format {output_format!r}")


def _groups(reports):
    first = reports[0] if reports else DmuReport(name="")
    return (
        first.rho is not None,
        first.grs_members is not None,
        first.rts_class is not None,
    )


def _render_json(reports) -> str:
    objects = []
    for report in reports:
        obj: dict = {"name": report.name}
        if report.rho is not None:
            obj["rho"] = report.rho
            obj["efficient"] = report.efficient
        if report.grs_members is not None:
            obj["grs"] = [
                {"name": name, "weight": weight}
                for name, weight in report.grs_members
            ]
            obj["projection"] = {
                "inputs": report.projection_inputs,
                "outputs": report.projection_outputs,
            }
            obj["minimum_face_dimension"] = report.minimum_face_dimension
        if report.rts_class is not None:
            obj["rts"] = {
                "class": report.rts_class,
                "omega_min": report.omega_min,
                "omega_max": report.omega_max,
            }
        objects.append(obj)
    return json.dumps(objects, indent=2) + "\n"


def _grs_cell(members) -> str:
    return ";".join(f"{name}:{weight:.3f}" for name, weight in members)


def _render_csv(reports) -> str:
    has_eff, has_grs, has_rts = _groups(reports)
    header = ["dmu"]
    if has_eff:
        header += ["rho", "efficient"]
    if has_grs:
        header += ["grs", "face_dim"]
        header += [f"proj_in:{label}" for label in reports[0].projection_inputs]
        header += [f"proj_out:{label}" for label in reports[0].projection_outputs]
    if has_rts:
        header += ["rts", "omega_min", "omega_max"]
    if not reports:
        header = ["dmu", "rho", "efficient", "grs", "face_dim"]

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for report in reports:
        row = [report.name]
        if has_eff:
            row += [f"{report.rho:.3f}", "true" if report.efficient else "false"]
        if has_grs:
            row += [_grs_cell(report.grs_members), str(report.minimum_face_dimension)]
            row += [f"{v:.3f}" for v in report.projection_inputs.values()]
            row += [f"{v:.3f}" for v in report.projection_outputs.values()]
        if has_rts:
            row += [
                _RTS_SHORT[report.rts_class],
                f"{report.omega_min:.3f}",
                f"{report.omega_max:.3f}",
            ]
        writer.writerow(row)
    return buffer.getvalue()


def _render_table(reports) -> str:
    has_eff, has_grs, has_rts = _groups(reports)
    header = ["dmu"]
    if has_eff:
        header += ["rho", "eff"]
    if has_grs:
        header += ["global reference set", "projection", "dim"]
    if has_rts:
        header += ["rts", "intercept range"]
    if not reports:
        header = ["dmu", "rho", "eff", "global reference set", "dim"]

    table = [header]
    for report in reports:
        row = [report.name]
        if has_eff:
            row += [f"{report.rho:.3f}", "yes" if report.efficient else "no"]
        if has_grs:
            proj_in = ", ".join(f"{v:.3f}" for v in report.projection_inputs.values())
            proj_out = ", ".join(f"{v:.3f}" for v in report.projection_outputs.values())
            row += [
                " ".join(f"{name}:{w:.3f}" for name, w in report.grs_members),
                f"({proj_in} -> {proj_out})",
                str(report.minimum_face_dimension),
            ]
        if has_rts:
            row += [
                _RTS_SHORT[report.rts_class],
                f"[{report.omega_min:.3f}, {report.omega_max:.3f}]",
            ]
        table.append(row)

    widths = [max(len(row[k]) for row in table) for k in range(len(header))]
    lines = []
    for row in table:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
