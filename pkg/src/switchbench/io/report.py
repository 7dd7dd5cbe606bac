"""
Serialization of analysis reports: a lossless dict/JSON form carrying the
full certificate, and a text form for people.
"""
from __future__ import annotations

import json

from switchbench.contracts.enums import CertificateKind
from switchbench.core.analyzer import AnalysisReport, OracleSection
from switchbench.core.criteria import (
    ControllabilityCertificate,
    DilationWitness,
    NonaccessibleSet,
    SDisjointEdge,
    SDisjointEdgeSet,
    Verdict,
)
from switchbench.core.errors import ParseError
from switchbench.core.graphs import AccessReport, Vertex
from switchbench.utils.performance_monitor import format_seconds

import logging

LOGGER = logging.getLogger(__name__)


def _labels(vertices) -> list[str]:
    return [v.label for v in sorted(vertices)]


def _vertices(labels) -> frozenset[Vertex]:
    return frozenset(Vertex.parse(label) for label in labels)


def _access_to_dict(access: AccessReport) -> dict:
    return {
        "accessible": _labels(access.accessible),
        "forest": {state.label: parent.label for state, parent in access.forest.items()},
        "nonaccessible": _labels(access.nonaccessible),
    }


def _access_from_dict(data: dict) -> AccessReport:
    return AccessReport(
        accessible=_vertices(data["accessible"]),
        forest={Vertex.parse(s): Vertex.parse(p) for s, p in data["forest"].items()},
        nonaccessible=_vertices(data["nonaccessible"]),
    )


def certificate_to_dict(certificate) -> dict:
    out = {"kind": certificate.kind.value}
    if isinstance(certificate, NonaccessibleSet):
        out["states"] = _labels(certificate.states)
        out["access"] = _access_to_dict(certificate.access)
    elif isinstance(certificate, DilationWitness):
        out["s_set"] = _labels(certificate.s_set)
        out["t_size"] = certificate.t_size
        out["per_color_t"] = {str(c): _labels(vs) for c, vs in certificate.per_color_t.items()}
    else:
        out["edges"] = [
            {"begin": e.begin.label, "end": e.end.label, "color": e.color}
            for e in certificate.edges.edges
        ]
        out["access"] = _access_to_dict(certificate.access)
    return out


def certificate_from_dict(data: dict):
    kind = CertificateKind(data["kind"])
    if kind == CertificateKind.NONACCESSIBLE:
        return NonaccessibleSet(_vertices(data["states"]), _access_from_dict(data["access"]))
    if kind == CertificateKind.DILATION:
        return DilationWitness(
            s_set=_vertices(data["s_set"]),
            t_size=int(data["t_size"]),
            per_color_t={int(c): _vertices(vs) for c, vs in data["per_color_t"].items()},
        )
    edges = SDisjointEdgeSet(tuple(
        SDisjointEdge(Vertex.parse(e["begin"]), Vertex.parse(e["end"]), int(e["color"]))
        for e in data["edges"]
    ))
    return ControllabilityCertificate(edges, _access_from_dict(data["access"]))


def report_to_dict(report: AnalysisReport) -> dict:
    verdict = report.verdict
    oracle = None
    if report.oracle is not None:
        oracle = {
            "trials": report.oracle.trials,
            "seed": report.oracle.seed,
            "dimensions": list(report.oracle.dimensions),
            "controllable": report.oracle.controllable,
            "agreement": report.oracle.agreement,
            "ctrb_rank": report.oracle.ctrb_rank,
        }
    return {
        "system": {
            "n": report.n,
            "r": report.r,
            "m": report.m,
            "free_parameters": report.free_parameters,
            "source": report.source,
        },
        "verdict": {
            "controllable": verdict.controllable,
            "accessibility_ok": verdict.accessibility_ok,
            "rank_ok": verdict.rank_ok,
            "theorem1_sufficient": verdict.theorem1_sufficient,
            "s_disjoint_count": verdict.s_disjoint_count,
            "subsystem_lin": list(verdict.subsystem_lin),
        },
        "certificate": certificate_to_dict(verdict.certificate),
        "oracle": oracle,
        "timing": dict(report.timing),
    }


def report_from_dict(data: dict) -> AnalysisReport:
    try:
        system = data["system"]
        v = data["verdict"]
        verdict = Verdict(
            controllable=bool(v["controllable"]),
            accessibility_ok=bool(v["accessibility_ok"]),
            rank_ok=bool(v["rank_ok"]),
            certificate=certificate_from_dict(data["certificate"]),
            theorem1_sufficient=bool(v["theorem1_sufficient"]),
            s_disjoint_count=int(v["s_disjoint_count"]),
            subsystem_lin=tuple(bool(x) for x in v["subsystem_lin"]),
        )
        oracle = None
        if data.get("oracle") is not None:
            o = data["oracle"]
            oracle = OracleSection(
                trials=int(o["trials"]),
                seed=int(o["seed"]),
                dimensions=tuple(int(d) for d in o["dimensions"]),
                controllable=bool(o["controllable"]),
                agreement=bool(o["agreement"]),
                ctrb_rank=o.get("ctrb_rank"),
            )
        return AnalysisReport(
            n=int(system["n"]),
            r=int(system["r"]),
            m=int(system["m"]),
            free_parameters=int(system["free_parameters"]),
            verdict=verdict,
            oracle=oracle,
            timing={k: float(t) for k, t in data.get("timing", {}).items()},
            source=system.get("source"),
        )
    except (KeyError, TypeError, ValueError) as e:
        LOGGER.error(f"Malformed report: {e!r}")
        raise ParseError(f"Malformed report: {e!r}") from e


def render_report_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def render_report_text(report: AnalysisReport) -> str:
    verdict = report.verdict
    source = f" [{report.source}]" if report.source else ""
    lines = [
        f"System: n={report.n} r={report.r} m={report.m} "
        f"({report.free_parameters} free parameters){source}",
        f"Structurally controllable: {_yes(verdict.controllable)}",
        f"  no nonaccessible state: {_yes(verdict.accessibility_ok)}",
        f"  S-disjoint edges: {verdict.s_disjoint_count}/{report.n}",
        f"  union-graph sufficient test: {_yes(verdict.theorem1_sufficient)}",
        "  subsystems controllable alone: "
        + " ".join(f"{i}:{_yes(ok)}" for i, ok in enumerate(verdict.subsystem_lin, start=1)),
    ]

    certificate = verdict.certificate
    lines.append(f"Certificate ({certificate.kind.value}):")
    if isinstance(certificate, NonaccessibleSet):
        lines.append(f"  nonaccessible states: {', '.join(_labels(certificate.states))}")
    elif isinstance(certificate, DilationWitness):
        per_color = "; ".join(
            f"T{c}={{{', '.join(_labels(vs))}}}" for c, vs in certificate.per_color_t.items()
        ) or "all empty"
        lines.append(
            f"  S={{{', '.join(_labels(certificate.s_set))}}} "
            f"|T(S)|={certificate.t_size} < |S|={len(certificate.s_set)} ({per_color})"
        )
    else:
        lines.append(f"  edges: {', '.join(str(e) for e in certificate.edges.edges)}")
        for state in sorted(certificate.access.forest):
            stem = "->".join(v.label for v in certificate.access.stem(state))
            lines.append(f"  stem {state}: {stem}")

    if report.oracle is not None:
        oracle = report.oracle
        full = sum(1 for dim in oracle.dimensions if dim == report.n)
        ctrb = "" if oracle.ctrb_rank is None else f", controllability matrix rank {oracle.ctrb_rank}"
        lines.append(
            f"Oracle: {oracle.trials} trials from seed {oracle.seed}, full dimension in "
            f"{full}/{oracle.trials} (dims {', '.join(map(str, oracle.dimensions))}){ctrb} -> "
            f"{'agrees' if oracle.agreement else 'DISAGREES'}"
        )

    if report.timing:
        lines.append(
            "Timing: " + ", ".join(f"{stage} {format_seconds(t)}" for stage, t in report.timing.items())
        )
    return "\n".join(lines) + "\n"
