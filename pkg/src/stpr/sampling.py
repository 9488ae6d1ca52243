"""Rejection-sampled point clouds and the nearest-neighbor collision index."""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import AcceptanceTooLow, EmptyIndex
from .geometry import Aabb, ConstraintExpr, Point3, evaluate_many, forbidden_region_bbox


class CloudSource(enum.Enum):
    STATIC_OBJECT = "static_object"
    CONSTRAINT = "constraint"


@dataclass(frozen=True)
class PointCloud:
    label: str
    points: np.ndarray  # (k, 3) float64
    source: CloudSource

    def __len__(self) -> int:
        return self.points.shape[0]


def derive_rng(seed: int, label: str) -> np.random.Generator:
    """Independent generator for one cloud, stable across platforms."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    words = struct.unpack("<4Q", digest[:32])
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), *words]))


def sample_box(
    box: Aabb,
    k: int,
    rng: np.random.Generator,
    label: str = "",
    source: CloudSource = CloudSource.STATIC_OBJECT,
) -> PointCloud:
    """Exactly k i.i.d. uniform points inside the box.

    Degenerate axes collapse to their single coordinate.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lo = box.min.to_array()
    hi = box.max.to_array()
    pts = rng.uniform(size=(k, 3)) * (hi - lo) + lo
    return PointCloud(label=label, points=pts, source=source)


def sample_constraint(
    expr: ConstraintExpr,
    k: int,
    rng: np.random.Generator,
    bounds: Aabb,
    max_attempts: Optional[int] = None,
    label: str = "",
) -> PointCloud:
    """Exactly k forbidden points, drawn by rejection from the region's bbox."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_attempts is None:
        max_attempts = 1000 * k
    if max_attempts < k:
        raise ValueError("max_attempts must be >= k")
    box = forbidden_region_bbox(expr, bounds).box
    lo = box.min.to_array()
    hi = box.max.to_array()
    span = hi - lo
    accepted: list[np.ndarray] = []
    total = 0
    drawn = 0
    while total < k:
        batch = min(max(4 * k, 4096), max_attempts - drawn)
        if batch <= 0:
            raise AcceptanceTooLow(
                f"{label or 'constraint'}: {total}/{k} accepted after {drawn} draws; "
                "region is near-empty or mis-bounded"
            )
        cand = rng.uniform(size=(batch, 3)) * span + lo
        drawn += batch
        mask = evaluate_many(expr, cand)
        hits = cand[mask]
        if hits.shape[0]:
            accepted.append(hits)
            total += hits.shape[0]
    pts = np.concatenate(accepted, axis=0)[:k]
    return PointCloud(label=label, points=pts, source=CloudSource.CONSTRAINT)


class PointCloudIndex:
    """kd-tree over the union of clouds, answering exact nearest neighbors.

    A single tree over all clouds gives the same collision semantics as one
    tree per cloud: only the global minimum distance matters. Per-point
    provenance is kept for diagnostics.
    """

    def __init__(self, clouds: Sequence[PointCloud]):
        pts = [c.points for c in clouds if len(c)]
        if not pts:
            raise EmptyIndex("no points to index")
        self.points = np.concatenate(pts, axis=0)
        self.labels: list[str] = []
        for c in clouds:
            self.labels.extend([c.label] * len(c))
        self._tree = cKDTree(self.points)

    def __len__(self) -> int:
        return self.points.shape[0]

    def nearest(self, q: Union[Point3, Sequence[float]]) -> tuple[float, np.ndarray, str]:
        """(distance, point, cloud label) of the nearest indexed point."""
        arr = q.to_array() if isinstance(q, Point3) else np.asarray(q, dtype=np.float64)
        dist, idx = self._tree.query(arr)
        return float(dist), self.points[idx], self.labels[idx]

    def nearest_distances(self, qs: np.ndarray) -> np.ndarray:
        dist, _ = self._tree.query(np.asarray(qs, dtype=np.float64))
        return dist

    def collides(self, q: Union[Point3, Sequence[float]], r: float) -> bool:
        """True iff the nearest indexed point lies strictly within r."""
        if r <= 0:
            raise ValueError("robot radius must be > 0")
        return self.nearest(q)[0] < r

    def collides_many(self, qs: np.ndarray, r: float) -> np.ndarray:
        if r <= 0:
            raise ValueError("robot radius must be > 0")
        return self.nearest_distances(qs) < r


def build_index(clouds: Sequence[PointCloud]) -> PointCloudIndex:
    return PointCloudIndex(clouds)


def collides(index: PointCloudIndex, q: Union[Point3, Sequence[float]], r: float) -> bool:
    return index.collides(q, r)


# --------------------------------------------------------------------------
# Cloud export
# --------------------------------------------------------------------------


def save_xyz(cloud: PointCloud, path: Union[str, Path]) -> None:
    """Plain text, one `x y z` triple per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for x, y, z in cloud.points:
            fh.write(f"{float(x)!r} {float(y)!r} {float(z)!r}\n")


def save_binary(cloud: PointCloud, path: Union[str, Path]) -> None:
    """8-byte little-endian count header, then float64 LE triples."""
    pts = np.ascontiguousarray(cloud.points, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", pts.shape[0]))
        fh.write(pts.tobytes())


def load_binary(path: Union[str, Path]) -> np.ndarray:
    with open(path, "rb") as fh:
        (count,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(count * 24), dtype="<f8")
    return data.reshape(count, 3)
