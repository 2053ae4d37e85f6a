from .wire import (
    COMMAND_KINDS,
    FRAME_TYPES,
    WIRE_VERSION,
    Command,
    Frame,
    decode_command,
    decode_frame,
    encode_command,
    encode_frame,
)
from .logio import (
    load_points_file,
    load_xy_text,
    mission_log_to_bytes,
    mission_log_to_dict,
    parse_mission_log,
)
from .session import SessionState, touch, watchdog_tick
from .server import ServeConfig, create_app

__all__ = [
    "COMMAND_KINDS", "FRAME_TYPES", "WIRE_VERSION",
    "Command", "Frame", "decode_command", "decode_frame",
    "encode_command", "encode_frame",
    "load_points_file", "load_xy_text", "mission_log_to_bytes",
    "mission_log_to_dict", "parse_mission_log",
    "SessionState", "touch", "watchdog_tick",
    "ServeConfig", "create_app",
]
