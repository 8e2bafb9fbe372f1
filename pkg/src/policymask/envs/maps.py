"""Map registry for the lane world.

Maps are defined in a flat key=value text file (blocks separated by blank
lines). Documented keys:

    map_id        unique name
    waypoints     semicolon-separated "x,y" pairs in meters
    background    plain | cluttered
    intended_use  train | eval
    closed        true | false  (loop route vs open route)

The shipped registry lives in maps.txt next to this module. Waypoint
polylines are corner-cut (Chaikin, 3 rounds) into drivable routes.
"""

import zlib
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..errors import ConfigError, FormatError

BACKGROUNDS = ("plain", "cluttered")
USES = ("train", "eval")


@dataclass(frozen=True)
class MapSpec:
    map_id: str
    waypoints: tuple  # ((x, y), ...) raw corner points, meters
    background: str = "plain"
    intended_use: str = "eval"
    closed: bool = True

    def __post_init__(self):
        if self.background not in BACKGROUNDS:
            raise ConfigError(f"map {self.map_id!r}: bad background {self.background!r}")
        if self.intended_use not in USES:
            raise ConfigError(f"map {self.map_id!r}: bad intended_use {self.intended_use!r}")
        if len(self.waypoints) < 2:
            raise ConfigError(f"map {self.map_id!r}: needs at least 2 waypoints")

    @property
    def seed_salt(self) -> int:
        return zlib.crc32(self.map_id.encode("utf-8"))


def _chaikin(points: np.ndarray, closed: bool, rounds: int = 3) -> np.ndarray:
    pts = points.astype(np.float64)
    for _ in range(rounds):
        if closed:
            nxt = np.roll(pts, -1, axis=0)
            q = 0.75 * pts + 0.25 * nxt
            r = 0.25 * pts + 0.75 * nxt
            pts = np.empty((2 * len(pts), 2))
            pts[0::2] = q
            pts[1::2] = r
        else:
            q = 0.75 * pts[:-1] + 0.25 * pts[1:]
            r = 0.25 * pts[:-1] + 0.75 * pts[1:]
            mid = np.empty((2 * (len(pts) - 1), 2))
            mid[0::2] = q
            mid[1::2] = r
            pts = np.vstack([pts[:1], mid, pts[-1:]])
    return pts


class Route:
    """Smoothed centerline polyline with arclength bookkeeping."""

    def __init__(self, spec: MapSpec):
        self.spec = spec
        pts = _chaikin(np.asarray(spec.waypoints, dtype=np.float64), spec.closed)
        if spec.closed:
            segs_a = pts
            segs_b = np.roll(pts, -1, axis=0)
        else:
            segs_a = pts[:-1]
            segs_b = pts[1:]
        self.points = pts
        self.a = segs_a
        self.b = segs_b
        d = segs_b - segs_a
        self.seg_len = np.hypot(d[:, 0], d[:, 1])
        keep = self.seg_len > 1e-9
        self.a, self.b, d, self.seg_len = self.a[keep], self.b[keep], d[keep], self.seg_len[keep]
        self.dir = d / self.seg_len[:, None]
        self.cum_s = np.concatenate([[0.0], np.cumsum(self.seg_len)])
        self.length = float(self.cum_s[-1])
        self.mid = 0.5 * (self.a + self.b)

    def locate(self, pts: np.ndarray, seg_mask=None):
        """Nearest-centerline frame for points (N,2).

        Returns (d_signed, s, seg_idx): lateral offset (positive to the
        right of travel), arclength of the projection, segment index.
        """
        pts = np.atleast_2d(pts)
        idx = np.arange(len(self.a)) if seg_mask is None else np.flatnonzero(seg_mask)
        if len(idx) == 0:
            n = len(pts)
            return (np.full(n, np.inf), np.zeros(n), np.zeros(n, dtype=int))
        a = self.a[idx][None, :, :]  # (1,S,2)
        dirs = self.dir[idx][None, :, :]
        rel = pts[:, None, :] - a  # (N,S,2)
        t = np.clip(np.einsum("nsk,nsk->ns", rel, np.broadcast_to(dirs, rel.shape)), 0.0,
                    self.seg_len[idx][None, :])
        proj = a + dirs * t[:, :, None]
        off = pts[:, None, :] - proj
        dist2 = np.einsum("nsk,nsk->ns", off, off)
        best = np.argmin(dist2, axis=1)
        rows = np.arange(len(pts))
        seg = idx[best]
        bt = t[rows, best]
        boff = off[rows, best]
        cross = self.dir[seg, 0] * boff[:, 1] - self.dir[seg, 1] * boff[:, 0]
        dist = np.sqrt(dist2[rows, best])
        d_signed = np.where(cross <= 0, dist, -dist)
        s = self.cum_s[seg] + bt
        return d_signed, s, seg

    def point_at(self, s: float):
        """Centerline point, tangent heading at arclength s (wraps if closed)."""
        if self.spec.closed:
            s = s % self.length
        else:
            s = min(max(s, 0.0), self.length)
        i = int(np.searchsorted(self.cum_s, s, side="right") - 1)
        i = min(max(i, 0), len(self.a) - 1)
        t = s - self.cum_s[i]
        p = self.a[i] + self.dir[i] * t
        heading = float(np.arctan2(self.dir[i, 1], self.dir[i, 0]))
        return p, heading


def parse_maps(text: str) -> list:
    """Parse the registry text format into MapSpecs."""
    specs = []
    block = {}
    lineno = 0

    def flush():
        if not block:
            return
        try:
            raw = block["waypoints"]
            wps = tuple(
                tuple(float(v) for v in pair.split(","))
                for pair in raw.split(";")
                if pair.strip()
            )
            specs.append(
                MapSpec(
                    map_id=block["map_id"],
                    waypoints=wps,
                    background=block.get("background", "plain"),
                    intended_use=block.get("intended_use", "eval"),
                    closed=block.get("closed", "true").lower() == "true",
                )
            )
        except KeyError as e:
            raise FormatError(f"map block before line {lineno} missing key {e}")
        block.clear()

    for line in text.splitlines():
        lineno += 1
        line = line.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        if "=" not in line:
            raise FormatError(f"maps file line {lineno}: expected key = value")
        k, v = line.split("=", 1)
        block[k.strip()] = v.strip()
    flush()
    ids = [s.map_id for s in specs]
    if len(set(ids)) != len(ids):
        raise FormatError("duplicate map_id in maps file")
    return specs


def format_maps(specs) -> str:
    out = []
    for s in specs:
        wp = "; ".join(f"{x:g},{y:g}" for x, y in s.waypoints)
        out.append(
            f"map_id = {s.map_id}\nwaypoints = {wp}\n"
            f"background = {s.background}\nintended_use = {s.intended_use}\n"
            f"closed = {str(s.closed).lower()}\n"
        )
    return "\n".join(out)


_REGISTRY = None


def load_registry(path=None) -> dict:
    """map_id -> MapSpec. Default: the registry shipped with the package."""
    global _REGISTRY
    if path is None:
        if _REGISTRY is None:
            text = resources.files("policymask.envs").joinpath("maps.txt").read_text()
            _REGISTRY = {s.map_id: s for s in parse_maps(text)}
        return _REGISTRY
    with open(path, "r", encoding="utf-8") as f:
        return {s.map_id: s for s in parse_maps(f.read())}


def list_maps(path=None) -> list:
    return list(load_registry(path).values())


def get_map(map_id: str, path=None) -> MapSpec:
    reg = load_registry(path)
    if map_id not in reg:
        raise ConfigError(f"unknown map_id {map_id!r}; known: {sorted(reg)}")
    return reg[map_id]
