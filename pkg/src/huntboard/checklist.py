"""Checklist templates.

Templates live in a human-editable config file loaded at service start, not
in code. Format: blocks separated by blank lines, `key: value` lines plus
one `item:` line per checklist entry. `#` starts a comment.

    id: default-hunt
    name: Standard Hunt Session
    item: Review prior shift notes
    item: ...

Template content is resolved at submission time and embedded in the
instantiate event, so replay is independent of this file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

DEFAULT_TEMPLATE_RESOURCE = "checklist-templates.conf"


@dataclass
class ChecklistTemplate:
    template_id: str
    name: str
    items: list[str] = field(default_factory=list)


class TemplateParseError(ValueError):
    pass


def parse_templates(text: str) -> dict[str, ChecklistTemplate]:
    templates: dict[str, ChecklistTemplate] = {}
    current: ChecklistTemplate | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            current = None
            continue
        if line.startswith("#"):
            continue
        if ":" not in line:
            raise TemplateParseError(f"line {lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip().lower()
        value = value.strip()
        if key == "id":
            if not value:
                raise TemplateParseError(f"line {lineno}: empty template id")
            if value in templates:
                raise TemplateParseError(f"line {lineno}: duplicate template id {value!r}")
            current = ChecklistTemplate(template_id=value, name=value)
            templates[value] = current
            continue
        if current is None:
            raise TemplateParseError(f"line {lineno}: {key!r} before any 'id:'")
        if key == "name":
            current.name = value
        elif key == "item":
            if not value:
                raise TemplateParseError(f"line {lineno}: empty item text")
            current.items.append(value)
        else:
            raise TemplateParseError(f"line {lineno}: unknown key {key!r}")
    return templates


def load_templates(path: str | Path) -> dict[str, ChecklistTemplate]:
    return parse_templates(Path(path).read_text(encoding="utf-8"))


def default_template_text() -> str:
    return (
        resources.files("huntboard.data")
        .joinpath(DEFAULT_TEMPLATE_RESOURCE)
        .read_text(encoding="utf-8")
    )


def load_default_templates() -> dict[str, ChecklistTemplate]:
    return parse_templates(default_template_text())
