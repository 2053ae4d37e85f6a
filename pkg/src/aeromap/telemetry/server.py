"""Live telemetry service: frame broadcast over a websocket, a small REST
surface for stateless reads, the connection-loss watchdog, and the mission
runner that advances the simulation.

One writer (the mission loop) publishes frames; every connected client
receives the same sequence with the same seq numbers. Command acks and
errors are broadcast too, so seq stays gap-free for every observer.
"""

from __future__ import annotations

import asyncio
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field, replace

from fastapi import FastAPI, Request, Response, WebSocket, WebSocketDisconnect

from ..errors import InsufficientGeometryError, NoRuleFiredError, SchemaError
from ..fuzzy.config import FuzzyConfig, default_config
from ..fuzzy.crisp import crisp_classify, crossover_thresholds
from ..fuzzy.engine import classify
from ..mapping.walls import WallModel, WallParams, extract_walls
from ..sim.mission import (
    MissionEvent,
    MissionLog,
    SweepPlan,
    dock_pose,
    home_iter,
    sweep_iter,
)
from ..sim.world import Pose, World
from .logio import mission_log_to_bytes
from .session import HALTED, HOMING, IDLE, SWEEPING, SessionState, touch, watchdog_tick
from .wire import (
    COMMAND_KINDS,
    MAX_POINTS_PER_FRAME,
    Command,
    Frame,
    decode_command,
    encode_frame,
    quantize,
)


@dataclass
class ServeConfig:
    world: World
    plan: SweepPlan = field(default_factory=SweepPlan)
    wall_params: WallParams = field(default_factory=WallParams)
    fuzzy: FuzzyConfig | None = None
    watchdog_timeout_ms: float = 2000.0
    tick_ms: float = 100.0
    heartbeat_ms: float = 500.0
    frame_interval_ms: float = 25.0
    static_dir: str | None = None  # built operator console, served at /


class TelemetryService:
    def __init__(self, config: ServeConfig):
        self.config = config
        self.fuzzy = config.fuzzy or default_config()
        self.thresholds = crossover_thresholds(self.fuzzy)
        self.session = SessionState(
            robot_state=IDLE,
            last_client_contact=0.0,
            watchdog_timeout=config.watchdog_timeout_ms,
        )
        self.seq = 0
        self.subscribers: list[asyncio.Queue] = []
        self.log = MissionLog()
        self.latest: dict[str, dict] = {}
        self.pose: Pose = dock_pose(config.world, config.plan.standoff)
        self.sim_t = 0
        self.phase = "sweep"
        self.mission_iter = None
        self.rng = None
        self.wall_model: WallModel | None = None
        self._running = asyncio.Event()
        self._lock = asyncio.Lock()
        self._t0 = time.monotonic()
        self._tasks: list[asyncio.Task] = []

    # -- clocks ------------------------------------------------------------

    def now_ms(self) -> float:
        return (time.monotonic() - self._t0) * 1000.0

    # -- broadcast ---------------------------------------------------------

    def publish(self, ftype: str, payload: dict, t: int | None = None) -> None:
        self.seq += 1
        frame = Frame(type=ftype, seq=self.seq,
                      t=int(self.now_ms()) if t is None else int(t),
                      payload=payload)
        encoded = encode_frame(frame)
        self.latest[ftype] = {
            "v": frame.v, "type": frame.type, "seq": frame.seq,
            "t": frame.t, "payload": quantize(payload),
        }
        for q in list(self.subscribers):
            q.put_nowait(encoded)

    def publish_status(self, event: MissionEvent | None = None) -> None:
        payload = {
            "robot_state": self.session.robot_state,
            "pose": {"x": self.pose.x, "y": self.pose.y, "heading": self.pose.heading},
            "sim_t": self.sim_t,
            "mission": {
                "frames": len(self.log.frames),
                "points": len(self.log.points),
                "events": len(self.log.events),
            },
            "watchdog_timeout_ms": self.session.watchdog_timeout,
        }
        if event is not None:
            payload["event"] = {"t": event.t, "kind": event.kind, "detail": event.detail}
        self.publish("status", payload)

    # -- command handling --------------------------------------------------

    async def execute(self, cmd: Command) -> dict:
        async with self._lock:
            handler = getattr(self, f"_cmd_{cmd.kind}", None)
            if handler is None:
                return {"ok": False, "code": "bad_command",
                        "detail": f"unknown command kind {cmd.kind!r}"}
            return handler(cmd.args)

    def _cmd_ping(self, args: dict) -> dict:
        return {"ok": True, "detail": "pong"}

    def _cmd_start(self, args: dict) -> dict:
        state = self.session.robot_state
        if state in (SWEEPING, HOMING):
            return {"ok": True, "detail": f"already {state}"}
        if self.mission_iter is not None:
            self.log.events.append(MissionEvent(self.sim_t, "resume", {}))
            self.session = replace(
                self.session,
                robot_state=HOMING if self.phase == "home" else SWEEPING,
            )
            self._running.set()
            self.publish_status(self.log.events[-1])
            return {"ok": True, "detail": "resumed"}
        self.log = MissionLog()
        self.wall_model = None
        self.rng = self.config.world.rng()
        self.pose = dock_pose(self.config.world, self.config.plan.standoff)
        self.sim_t = 0
        self.phase = "sweep"
        self.mission_iter = sweep_iter(self.config.world, self.config.plan, self.rng)
        self.session = replace(self.session, robot_state=SWEEPING)
        self._running.set()
        self.publish_status()
        return {"ok": True, "detail": "mission started"}

    def _cmd_stop(self, args: dict) -> dict:
        if self.session.robot_state in (SWEEPING, HOMING):
            self._running.clear()
            self.session = replace(self.session, robot_state=IDLE)
            self.publish_status()
            return {"ok": True, "detail": "paused"}
        return {"ok": True, "detail": "already stopped"}

    def _cmd_home(self, args: dict) -> dict:
        if self.rng is None:
            self.rng = self.config.world.rng()
        self.phase = "home"
        self.mission_iter = home_iter(
            self.config.world, self.pose, self.config.world.noise.enabled,
            self.rng, self.config.plan,
        )
        self.session = replace(self.session, robot_state=HOMING)
        self._running.set()
        self.publish_status()
        return {"ok": True, "detail": "homing"}

    def _cmd_set_plan(self, args: dict) -> dict:
        if self.session.robot_state in (SWEEPING, HOMING):
            return {"ok": False, "code": "busy",
                    "detail": "cannot change the plan while the robot is moving"}
        try:
            self.config.plan = replace(self.config.plan, **args)
        except Exception as e:  # surfaced to the client as a bad_command error
            return {"ok": False, "code": "bad_command", "detail": str(e)}
        self.mission_iter = None
        return {"ok": True, "detail": "plan updated"}

    def _cmd_download(self, args: dict) -> dict:
        return {"ok": True, "detail": "GET /api/log", "url": "/api/log"}

    # -- mission loop ------------------------------------------------------

    def _apply_item(self, item: tuple) -> None:
        kind = item[0]
        if kind == "event":
            ev: MissionEvent = item[1]
            self.sim_t = max(self.sim_t, ev.t)
            self.log.events.append(ev)
            if ev.kind == "home_begin":
                self.phase = "home"
                self.session = replace(self.session, robot_state=HOMING)
            self.publish_status(ev)
        elif kind == "pose":
            self.pose = item[1]
            self.sim_t = max(self.sim_t, item[2])
        elif kind == "frame":
            pose_id, logged = item[1], item[2]
            self.log.frames.append(logged)
            self.pose = logged.pose
            self.sim_t = max(self.sim_t, logged.sensors.timestamp)
            self.publish("sensor", {
                "pose_id": pose_id,
                "pose": {"x": logged.pose.x, "y": logged.pose.y,
                         "heading": logged.pose.heading},
                "sensors": logged.sensors.as_dict(),
            }, t=logged.sensors.timestamp)
            try:
                c = classify(logged.sensors, self.fuzzy)
                payload = {"pose_id": pose_id, "score": c.crisp_score,
                           "label": c.label, "term_strengths": c.term_strengths}
            except NoRuleFiredError:
                payload = {"pose_id": pose_id, "score": None,
                           "label": crisp_classify(logged.sensors.as_dict(),
                                                   self.thresholds),
                           "term_strengths": {}, "fallback": "crisp"}
            self.publish("classification", payload, t=logged.sensors.timestamp)
        elif kind == "scan":
            pose_id, points = item[1], item[2]
            self.log.points.extend(points)
            coords = [[p.x, p.y] for p in points]
            for i in range(0, len(coords), MAX_POINTS_PER_FRAME):
                self.publish("map", {
                    "pose_id": pose_id,
                    "points": coords[i:i + MAX_POINTS_PER_FRAME],
                }, t=self.sim_t)
        elif kind == "home_result":
            self.pose = item[1]

    def _finish_mission(self) -> None:
        self.mission_iter = None
        self.phase = "sweep"
        self._running.clear()
        self.session = replace(self.session, robot_state=IDLE)
        self.publish_status()
        if self.log.points:
            try:
                self.wall_model = extract_walls(self.log.point_array(),
                                                self.config.wall_params)
                self.publish("wall_model", self.wall_model.as_dict(), t=self.sim_t)
            except InsufficientGeometryError as e:
                self.publish("error", {"code": "extraction_failed", "detail": str(e)})

    async def _mission_loop(self) -> None:
        while True:
            await self._running.wait()
            async with self._lock:
                it = self.mission_iter
                if it is None:
                    self._running.clear()
                    continue
                try:
                    item = next(it)
                except StopIteration:
                    self._finish_mission()
                    continue
                self._apply_item(item)
            await asyncio.sleep(self.config.frame_interval_ms / 1000.0)

    async def _watchdog_loop(self) -> None:
        while True:
            await asyncio.sleep(self.config.tick_ms / 1000.0)
            async with self._lock:
                now = self.now_ms()
                new = watchdog_tick(self.session, now)
                if new.robot_state == HALTED and self.session.robot_state != HALTED:
                    was_homing = self.session.robot_state == HOMING
                    self.session = new
                    self._running.clear()
                    stale = now - self.session.last_client_contact
                    halt_ev = MissionEvent(self.sim_t, "halt",
                                           {"stale_ms": round(stale, 1),
                                            "wall_ms": round(now, 1)})
                    self.log.events.append(halt_ev)
                    if was_homing:
                        self.log.events.append(MissionEvent(
                            self.sim_t, "home_end", {"aborted": True}))
                        self.mission_iter = None
                        self.phase = "sweep"
                    self.publish_status(halt_ev)
                else:
                    self.session = new

    async def _heartbeat_loop(self) -> None:
        while True:
            await asyncio.sleep(self.config.heartbeat_ms / 1000.0)
            self.publish_status()

    def start_tasks(self) -> None:
        self._tasks = [
            asyncio.create_task(self._mission_loop()),
            asyncio.create_task(self._watchdog_loop()),
            asyncio.create_task(self._heartbeat_loop()),
        ]

    async def stop_tasks(self) -> None:
        for t in self._tasks:
            t.cancel()
        for t in self._tasks:
            try:
                await t
            except asyncio.CancelledError:
                pass
        self._tasks = []


def create_app(config: ServeConfig) -> FastAPI:
    service = TelemetryService(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        service.start_tasks()
        yield
        await service.stop_tasks()

    app = FastAPI(lifespan=lifespan)
    app.state.service = service

    async def _writer(websocket: WebSocket, q: asyncio.Queue):
        while True:
            data = await q.get()
            await websocket.send_text(data.decode("utf-8"))

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        q: asyncio.Queue = asyncio.Queue()
        service.subscribers.append(q)
        service.session = touch(service.session, service.now_ms())
        service.publish_status()
        writer = asyncio.create_task(_writer(websocket, q))
        try:
            while True:
                text = await websocket.receive_text()
                service.session = touch(service.session, service.now_ms())
                try:
                    cmd = decode_command(text)
                except SchemaError as e:
                    service.publish("error", {"code": "bad_command", "detail": str(e)})
                    continue
                ack = await service.execute(cmd)
                if ack.get("ok"):
                    service.publish("ack", {"command": cmd.kind, **ack})
                else:
                    service.publish("error", {
                        "code": ack.get("code", "bad_command"),
                        "command": cmd.kind,
                        "detail": ack.get("detail", ""),
                    })
        except WebSocketDisconnect:
            pass
        finally:
            writer.cancel()
            if q in service.subscribers:
                service.subscribers.remove(q)

    @app.post("/api/command")
    async def post_command(request: Request):
        service.session = touch(service.session, service.now_ms())
        try:
            body = await request.body()
            cmd = decode_command(body)
        except SchemaError as e:
            return Response(
                content=f'{{"v":1,"ok":false,"code":"bad_command","detail":"{e.field}"}}',
                media_type="application/json", status_code=400,
            )
        if cmd.kind not in COMMAND_KINDS:
            return Response(
                content='{"v":1,"ok":false,"code":"bad_command","detail":"unknown kind"}',
                media_type="application/json", status_code=400,
            )
        ack = await service.execute(cmd)
        return {"v": 1, **ack}

    @app.get("/api/state")
    async def get_state():
        return {
            "v": 1,
            "state": {
                "robot_state": service.session.robot_state,
                "last_client_contact": service.session.last_client_contact,
                "watchdog_timeout": service.session.watchdog_timeout,
            },
            "pose": {"x": service.pose.x, "y": service.pose.y,
                     "heading": service.pose.heading},
            "sim_t": service.sim_t,
            "latest": service.latest,
        }

    @app.get("/api/log")
    async def get_log():
        stamp = int(time.time() * 1000)
        return Response(
            content=mission_log_to_bytes(service.log),
            media_type="application/json",
            headers={
                "Content-Disposition":
                    f'attachment; filename="mission-{stamp}.json"',
            },
        )

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True),
                  name="console")

    return app
