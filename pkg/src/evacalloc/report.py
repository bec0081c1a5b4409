"""Render plan documents: human-readable text, canonical JSON, or matrix CSV."""

from __future__ import annotations

import csv
import io

from .pipeline import canonical_json

FORMATS = ("text", "structured", "matrix-csv")


def render_report(document: dict, fmt: str = "text", matrix: tuple | None = None) -> str:
    """``matrix`` (required for matrix-csv) is (point_ids, resource_ids, grid)."""
    if fmt == "structured":
        return canonical_json(document)
    if fmt == "matrix-csv":
        if matrix is None:
            raise ValueError("matrix-csv rendering needs the distribution matrix")
        return render_matrix_csv(*matrix)
    if fmt == "text":
        return render_text(document)
    raise ValueError(f"unknown report format {fmt!r}; choose from {FORMATS}")


def render_matrix_csv(point_ids: list[str], resource_ids: list[str], grid: list[list[int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + list(resource_ids))
    for pid, row in zip(point_ids, grid):
        writer.writerow([pid] + list(row))
    return buf.getvalue()


def _fmt_time(seconds: float) -> str:
    return f"{seconds:.1f}"


def render_text(document: dict) -> str:
    lines = []
    per_point = document.get("per_point", [])
    served = sum(1 for p in per_point if p["served"])
    lines.append("Evacuation allocation report")
    lines.append(
        f"status: {document['status']}   objective: {_fmt_time(document['objective_s'])} s"
        f"   vehicles used: {document['vehicles_used']}"
    )
    lines.append(f"{served} points served of {len(per_point)}" if per_point else "0 points served")
    for p in per_point:
        lines.append("")
        lines.append(
            f"Rescue point {p['point_id']} (priority {p['priority']}, demand {p['demand_seats']} seats)"
        )
        if p["served"]:
            lines.append(f"  served: yes   seats delivered: {p['seats_delivered']}")
        else:
            lines.append(f"  served: NO    seat deficit: {p['deficit_seats']}")
        if p["resources"]:
            lines.append(f"  {'driver':<22} {'vehicle':<24} {'class':<11}{'seats':>5}  {'time (s)':>9}")
            for r in p["resources"]:
                lines.append(
                    f"  {str(r['driver_id']):<22} {str(r['vehicle_id']):<24} "
                    f"{str(r['vehicle_class']):<11}{r['seats']:>5}  {_fmt_time(r['time_s']):>9}"
                )
        for leg in p["shelters"]:
            lines.append(
                f"  shelter {leg['shelter_id']}: {leg['persons']} person(s), {_fmt_time(leg['time_s'])} s away"
            )
    occupancy = document.get("shelter_occupancy", [])
    if occupancy:
        lines.append("")
        lines.append("Shelter occupancy")
        for s in occupancy:
            cap = s["capacity"] if s["capacity"] is not None else "?"
            lines.append(f"  {s['shelter_id']}: {s['occupied']}/{cap}")
    for note in document.get("notices", []):
        lines.append(f"note: {note}")
    for diag in document.get("diagnostics", []):
        lines.append(f"diagnostic: {diag}")
    return "\n".join(lines) + "\n"
