"""Wire format: one JSON document per frame or command.

Documents carry a top-level `"v": 1`, use canonical (sorted) key order so
encoding is byte-stable, and serialize numeric payload values with at most
3 decimal places. Field-by-field schema lives in docs/wire-schema.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import SchemaError

WIRE_VERSION = 1

FRAME_TYPES = (
    "sensor", "map", "status", "wall_model", "classification", "ack", "error",
)

COMMAND_KINDS = ("start", "stop", "home", "set_plan", "ping", "download")

# Required payload keys per frame type; nested dicts list required subkeys.
PAYLOAD_SCHEMAS: dict[str, dict] = {
    "sensor": {
        "pose_id": None,
        "pose": {"x": None, "y": None, "heading": None},
        "sensors": {"voc": None, "co2": None, "smoke": None,
                    "temperature": None, "humidity": None, "battery": None},
    },
    "map": {"pose_id": None, "points": None},
    "status": {"robot_state": None},
    "wall_model": {"corners": None, "lines": None, "wall_lengths": None},
    "classification": {"score": None, "label": None, "term_strengths": None},
    "ack": {"command": None, "ok": None},
    "error": {"code": None},
}

MAX_POINTS_PER_FRAME = 64


@dataclass(frozen=True)
class Frame:
    type: str
    seq: int
    t: int
    payload: dict
    v: int = WIRE_VERSION


@dataclass(frozen=True)
class Command:
    kind: str
    args: dict = field(default_factory=dict)


def quantize(value, places: int = 3):
    """Round floats (recursively) to the wire precision; ints pass through."""
    if isinstance(value, bool) or isinstance(value, int):
        return value
    if isinstance(value, float):
        return round(value, places)
    if isinstance(value, dict):
        return {k: quantize(v, places) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [quantize(v, places) for v in value]
    return value


def _dumps(doc: dict) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      allow_nan=False).encode("utf-8")


def encode_frame(f: Frame) -> bytes:
    doc = {
        "v": f.v,
        "type": f.type,
        "seq": f.seq,
        "t": f.t,
        "payload": quantize(f.payload),
    }
    return _dumps(doc)


def _require(doc: dict, key: str, prefix: str = ""):
    if key not in doc:
        raise SchemaError(prefix + key, "missing required field")
    return doc[key]


def _check_payload(payload: dict, schema: dict, prefix: str):
    for key, sub in schema.items():
        value = _require(payload, key, prefix)
        if isinstance(sub, dict):
            if not isinstance(value, dict):
                raise SchemaError(prefix + key, "expected an object")
            _check_payload(value, sub, prefix + key + ".")


def decode_frame(data: bytes | str) -> Frame:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise SchemaError("document", f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaError("document", "frame must be a JSON object")
    v = _require(doc, "v")
    if v != WIRE_VERSION:
        raise SchemaError("v", f"unsupported wire version {v!r}")
    ftype = _require(doc, "type")
    if ftype not in FRAME_TYPES:
        raise SchemaError("type", f"unknown frame type {ftype!r}")
    seq = _require(doc, "seq")
    if not isinstance(seq, int) or isinstance(seq, bool):
        raise SchemaError("seq", "must be an integer")
    t = _require(doc, "t")
    if not isinstance(t, (int, float)) or isinstance(t, bool):
        raise SchemaError("t", "must be a number")
    payload = _require(doc, "payload")
    if not isinstance(payload, dict):
        raise SchemaError("payload", "must be an object")
    _check_payload(payload, PAYLOAD_SCHEMAS[ftype], "payload.")
    return Frame(type=ftype, seq=seq, t=int(t), payload=payload, v=v)


def encode_command(c: Command) -> bytes:
    return _dumps({"v": WIRE_VERSION, "kind": c.kind, "args": quantize(c.args)})


def decode_command(data: bytes | str) -> Command:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise SchemaError("document", f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaError("document", "command must be a JSON object")
    kind = _require(doc, "kind")
    args = doc.get("args", {})
    if not isinstance(args, dict):
        raise SchemaError("args", "must be an object")
    if not isinstance(kind, str):
        raise SchemaError("kind", "must be a string")
    return Command(kind=kind, args=args)
