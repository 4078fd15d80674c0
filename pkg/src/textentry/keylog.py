"""JSON-lines keystroke logs.

The first line is a header ``{"presented": ...}``; every following line is
one event ``{"seq": n, "kind": ..., "value": ...}``. Writing is canonical
(fixed key order, compact separators, UTF-8 without escaping, LF endings),
so ``write(read(data)) == data`` for any file this module produced.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import KeylogFormatError
from .metrics import InputStream, Keystroke, Kind


def dumps(stream: InputStream) -> str:
    lines = [json.dumps({"presented": stream.presented}, ensure_ascii=False, separators=(",", ":"))]
    for e in stream.events:
        lines.append(
            json.dumps(
                {"seq": e.seq, "kind": e.kind.value, "value": e.value},
                ensure_ascii=False,
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + "\n"


def loads(text: str) -> InputStream:
    presented = None
    events = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise KeylogFormatError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise KeylogFormatError("expected a JSON object", lineno)
        if presented is None:
            if "presented" not in obj or not isinstance(obj["presented"], str):
                raise KeylogFormatError('first line must be a {"presented": text} header', lineno)
            presented = obj["presented"]
            continue
        try:
            kind = Kind(obj["kind"])
            events.append(Keystroke(kind, obj.get("value"), obj["seq"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise KeylogFormatError(f"bad event: {exc}", lineno) from None
    if presented is None:
        raise KeylogFormatError("empty keystroke log", 1)
    try:
        return InputStream(tuple(events), presented)
    except ValueError as exc:
        raise KeylogFormatError(str(exc), 0) from None


def read(path: str | Path) -> InputStream:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads(fh.read())


def write(stream: InputStream, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(stream))
