"""
Human-readable rendering of reports.

The JSON document is the contract; this module only lays the same content out
as text, with pandas tables for branch and face listings.
"""
import logging
from typing import Any, Callable, Dict, List

import pandas as pd

logger = logging.getLogger(__name__)


def _number(doc) -> str:
    if doc is None:
        return "-"
    if "exact" in doc:
        return doc["exact"]
    if abs(doc["im"]) <= 1e-12:
        return f"{doc['re']:.10g}"
    return f"{doc['re']:.10g}{doc['im']:+.10g}i"


def _series(rows: List[dict], limit: int = 4) -> str:
    pieces = [f"{_number(row)}*t^{row['ord']}" for row in rows[:limit]]
    if len(rows) > limit:
        pieces.append("...")
    return " + ".join(pieces) if pieces else "0"


def _zeta(doc: Dict[str, Any]) -> str:
    factors = "".join(
        f"(1-t^{item['d']})" if item["e"] == 1 else f"(1-t^{item['d']})^{item['e']}"
        for item in doc["factors"]
    ) or "1"
    return f"{factors}   [degree {doc['degree']}, Milnor number {doc['milnor']}]"


def _table(rows: List[dict]) -> str:
    if not rows:
        return "  (none)"
    frame = pd.DataFrame(rows)
    return frame.to_string(index=False)


class TextRenderer:
    """Lays out a report document as plain text, one section per command."""

    def __init__(self):
        self.sections: Dict[str, Callable[[Dict[str, Any]], List[str]]] = {
            "newton": self._newton,
            "multcond": self._multcond,
            "zeta": self._zeta,
            "zeta-mixed": self._zeta_mixed,
            "zeta3h": self._zeta3h,
            "jacobian": self._jacobian,
            "puiseux": self._puiseux,
            "fibration": self._fibration,
        }

    def render(self, report: Dict[str, Any]) -> str:
        lines = [
            "=" * 60,
            f"{report['tool']} {report['version']} - {report['command']}",
            "=" * 60,
            f"f = {report['input'].get('f')}",
        ]
        if report["input"].get("g"):
            lines.append(f"g = {report['input']['g']}")
        if report.get("error"):
            lines.append(f"❌ {report['error']['type']}: {report['error']['message']}")
        elif report["command"] in self.sections:
            lines.extend(self.sections[report["command"]](report["result"]))
        lines.append(f"exit code {report['exit_code']}")
        return "\n".join(lines)

    def render_batch(self, batch: Dict[str, Any]) -> str:
        blocks = [self.render(report) for report in batch["reports"]]
        blocks.append(f"batch of {len(batch['reports'])} jobs, exit code {batch['exit_code']}")
        return "\n\n".join(blocks)

    # ---------------------------------------------------------- sections

    def _newton(self, result):
        lines = []
        for name, doc in result.items():
            boundary = doc["boundary"]
            lines.append(f"Γ({name}): vertices {boundary['vertices']}, intercepts {boundary['intercepts']}")
            lines.append(_table([
                {"P": str(tuple(face["P"])), "d": face["d"], "dim": face["dim"], "points": str(face["points"])}
                for face in boundary["faces"]
            ]))
            if doc.get("newton_number") is not None:
                lines.append(f"Newton number {doc['newton_number']}, area of Γ_−: {doc['area']}")
            if doc.get("nondegenerate") is not None:
                lines.append("non-degenerate" if doc["nondegenerate"] else f"degenerate: {doc['detail']}")
        return lines

    def _multcond(self, result):
        verdict = result["verdict"]
        if verdict["satisfied"]:
            return [f"✅ Newton multiplicity condition holds ({verdict['direction']})"]
        return [
            f"❌ Newton multiplicity condition violated; witness P={tuple(verdict['witness'])}",
            f"d(P;f) = {result['d_f']}, d(P;g) = {result['d_g']}",
        ]

    def _zeta(self, result):
        return [f"ζ_{name} = {_zeta(doc)}" for name, doc in result.items()]

    def _zeta_mixed(self, result):
        return [f"ζ_H = {_zeta(result['zeta'])}", f"containment: {result['direction']}"]

    def _zeta3h(self, result):
        lines = [
            f"d_f = {result['d_f']}, d_g = {result['d_g']}",
            f"χ(C_f) = {result['chi_C_f']}, χ(C_g) = {result['chi_C_g']}, "
            f"#(C_f ∩ C_g) = {result['intersections']}, χ(E') = {result['chi_E_prime']}",
            f"ζ_H = {_zeta(result['zeta'])}",
        ]
        lines.extend(f"warning: {w}" for w in result["warnings"])
        return lines

    def _faces(self, faces):
        return _table([
            {"P": str(tuple(face["P"])), "kind": face["kind"], "d(P;J)": face["d_J"],
             "d(P;f)": face["d_f"], "d(P;g)": face["d_g"], "expected": face["expected"]}
            for face in faces
        ])

    def _jacobian(self, result):
        return [f"J = {result['expanded']}", f"  = {result['factored']}", "faces of Γ(J):",
                self._faces(result["faces"])]

    def _puiseux(self, result):
        rows = [
            {"P": str(tuple(b["P"])) if b["P"] else b["rooted_at"], "x": b["x"], "y": _series(b["y"]),
             "e": b["e"], "mult": b["component_multiplicity"], "verified_to": b["verified_to"]}
            for b in result["branches"]
        ]
        return [f"{len(rows)} branches", _table(rows)]

    def _fibration(self, result):
        verdict = result["multiplicity_condition"]
        lines = [f"multiplicity condition: {'holds' if verdict['satisfied'] else 'violated'}"
                 + (f", witness P={tuple(verdict['witness'])}" if verdict.get("witness") else "")]
        if result.get("jacobian"):
            lines.append(f"J = {result['jacobian']['factored']}")
        rows = []
        for report in result["branches"]:
            branch = report["branch"]
            rows.append({
                "branch": str(tuple(branch["P"])) if branch["P"] else branch["rooted_at"],
                "y": _series(branch["y"], 2),
                "face": report["face_kind"] or "-",
                "sigma(0)": _number(report["sigma_leading"]),
                "k": report["k"] if report["k"] is not None else "-",
                "verdict": report["verdict"],
            })
        if rows:
            lines.append(_table(rows))
        lines.append(f"verdict: {result['verdict']} - {result['message']}")
        if result.get("caveat"):
            lines.append(f"note: {result['caveat']}")
        return lines


renderer = TextRenderer()


def render_text(document: Dict[str, Any]) -> str:
    if "reports" in document:
        return renderer.render_batch(document)
    return renderer.render(document)
