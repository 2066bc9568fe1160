"""Report documents rendered as aligned text or as CSV sections."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field


def _cell(x, csv_mode: bool) -> str:
    if isinstance(x, float):
        return repr(x) if csv_mode else f"{x:.6g}"
    return str(x)


@dataclass
class Section:
    title: str
    header: list[str]
    rows: list[list] = field(default_factory=list)


@dataclass
class ReportDocument:
    inputs: dict = field(default_factory=dict)
    sections: list[Section] = field(default_factory=list)

    def add(self, title: str, header: list[str], rows: list[list]) -> Section:
        sec = Section(title, header, rows)
        self.sections.append(sec)
        return sec

    def section(self, title: str) -> Section:
        for sec in self.sections:
            if sec.title == title:
                return sec
        raise KeyError(title)

    def to_text(self) -> str:
        out = []
        if self.inputs:
            out.append("# inputs")
            width = max(len(k) for k in self.inputs)
            out += [f"  {k:<{width}}  {v}" for k, v in self.inputs.items()]
        for sec in self.sections:
            out.append(f"\n# {sec.title}")
            cells = [sec.header] + [[_cell(x, False) for x in r] for r in sec.rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(sec.header))]
            for r in cells:
                out.append("  " + "  ".join(c.rjust(w) for c, w in zip(r, widths)))
        return "\n".join(out) + "\n"

    def to_csv(self) -> str:
        """One CSV table per section, each preceded by a ``# title`` line."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.inputs:
            buf.write("# inputs\n")
            writer.writerow(["key", "value"])
            for k, v in self.inputs.items():
                writer.writerow([k, _cell(v, True)])
        for sec in self.sections:
            buf.write(f"# {sec.title}\n")
            writer.writerow(sec.header)
            for r in sec.rows:
                writer.writerow([_cell(x, True) for x in r])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_text()


def read_csv_sections(text: str) -> dict[str, list[list[str]]]:
    """Split CSV output back into ``{title: rows}`` (header row first)."""
    sections: dict[str, list[list[str]]] = {}
    current = None
    for line in text.splitlines():
        if line.startswith("# "):
            current = sections.setdefault(line[2:], [])
        elif line and current is not None:
            current.extend(csv.reader([line]))
    return sections
