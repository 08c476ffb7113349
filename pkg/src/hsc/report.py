"""Deterministic machine-readable reports.

A report is a schema tag, a command name, and an ordered list of sections,
each an ordered list of key/value string pairs.  Emission is canonical
(identical reports produce byte-identical text) and parsing inverts it
exactly, so round-tripping is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SCHEMA = "hsc-report/1"


class ReportError(ValueError):
    pass


@dataclass
class Report:
    command: str
    sections: list = field(default_factory=list)
    schema: str = SCHEMA

    def section(self, name: str) -> list:
        """Start (or fetch) a section; returns its mutable pair list."""
        for sec, pairs in self.sections:
            if sec == name:
                return pairs
        pairs: list = []
        self.sections.append((name, pairs))
        return pairs

    def add(self, section: str, key: str, value) -> None:
        self.section(section).append((str(key), _render(value)))

    def get(self, section: str, key: str) -> str:
        for sec, pairs in self.sections:
            if sec == section:
                for k, v in pairs:
                    if k == key:
                        return v
        raise ReportError(f"missing {section}.{key}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Report)
            and self.schema == other.schema
            and self.command == other.command
            and [(s, list(p)) for s, p in self.sections]
            == [(s, list(p)) for s, p in other.sections]
        )


def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_render(v) for v in value)
    if isinstance(value, dict):
        return " ".join(f"{k}:{_render(v)}" for k, v in sorted(value.items()))
    return str(value)


def emit(report: Report) -> str:
    lines = [f"schema: {report.schema}", f"command: {report.command}"]
    for name, pairs in report.sections:
        lines.append("")
        lines.append(f"[{name}]")
        for k, v in pairs:
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> Report:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("schema: "):
        raise ReportError("missing schema line")
    schema = lines[0][len("schema: "):]
    if len(lines) < 2 or not lines[1].startswith("command: "):
        raise ReportError("missing command line")
    command = lines[1][len("command: "):]
    rep = Report(command=command, schema=schema)
    current = None
    for ln, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = rep.section(line[1:-1])
            continue
        if ": " not in line:
            raise ReportError(f"line {ln}: expected 'key: value'")
        if current is None:
            raise ReportError(f"line {ln}: pair outside any section")
        k, v = line.split(": ", 1)
        current.append((k, v))
    return rep
