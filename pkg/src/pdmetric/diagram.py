"""Persistence diagram value type, diagonal geometry, sampling and CSV I/O."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

__all__ = [
    "InvalidDiagramError",
    "DiagramFormatError",
    "PersistenceDiagram",
    "DiagramClassParams",
    "diagonal_distance",
    "diagonal_projection",
    "sample_uniform_diagram",
    "read_diagram",
    "write_diagram",
]


class InvalidDiagramError(ValueError):
    """Raised when points do not form a valid persistence diagram."""


class DiagramFormatError(InvalidDiagramError):
    """Raised when a diagram file cannot be parsed; carries the line number."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class PersistenceDiagram:
    """Finite multiset of points strictly above the diagonal.

    Points are stored sorted lexicographically by (birth, death) with
    duplicates merged into integer multiplicities, so two diagrams holding the
    same multiset compare equal regardless of input order.

    Parameters
    ----------
    points : array-like of shape (n, 2)
        Rows of ``(birth, death)``.
    multiplicities : array-like of int, optional
        Positive multiplicity per row, default 1.
    """

    __slots__ = ("_points", "_mult")

    def __init__(self, points=(), multiplicities=None):
        pts = np.asarray(points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidDiagramError(f"expected an (n, 2) array of points, got shape {pts.shape}")
        if multiplicities is None:
            mult = np.ones(len(pts), dtype=np.int64)
        else:
            raw = np.asarray(multiplicities)
            if raw.shape != (len(pts),):
                raise InvalidDiagramError("multiplicities must have one entry per point")
            if raw.size and not np.all(np.equal(np.mod(raw, 1), 0)):
                raise InvalidDiagramError("multiplicities must be integers")
            mult = raw.astype(np.int64)
        if not np.all(np.isfinite(pts)):
            raise InvalidDiagramError("coordinates must be finite")
        if np.any(mult < 1):
            raise InvalidDiagramError("multiplicities must be positive")
        if np.any(pts[:, 1] < pts[:, 0]):
            raise InvalidDiagramError("death must not precede birth")
        if np.any(pts[:, 1] == pts[:, 0]):
            raise InvalidDiagramError("points on the diagonal are not allowed")

        if len(pts):
            uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
            merged = np.zeros(len(uniq), dtype=np.int64)
            np.add.at(merged, inverse.reshape(-1), mult)
            pts, mult = uniq, merged
        pts.setflags(write=False)
        mult.setflags(write=False)
        self._points = pts
        self._mult = mult

    @classmethod
    def empty(cls) -> "PersistenceDiagram":
        return cls()

    @property
    def points(self) -> np.ndarray:
        """Distinct points, shape (k, 2), read-only."""
        return self._points

    @property
    def multiplicities(self) -> np.ndarray:
        return self._mult

    @property
    def total_mass(self) -> int:
        return int(self._mult.sum())

    def __len__(self) -> int:
        return self.total_mass

    def expanded(self) -> np.ndarray:
        """Points repeated by multiplicity, shape (total_mass, 2)."""
        return np.repeat(self._points, self._mult, axis=0)

    def in_class(self, params: "DiagramClassParams") -> bool:
        """Membership in the class of diagrams with fewer than N points inside [-L, L]^2."""
        return params.contains(self)

    def scaled(self, factor: float) -> "PersistenceDiagram":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return PersistenceDiagram(self._points * factor, self._mult)

    def translated(self, shift: float) -> "PersistenceDiagram":
        """Shift every point by ``(shift, shift)`` along the diagonal."""
        return PersistenceDiagram(self._points + shift, self._mult)

    def union(self, other: "PersistenceDiagram") -> "PersistenceDiagram":
        return PersistenceDiagram(
            np.vstack([self._points, other._points]),
            np.concatenate([self._mult, other._mult]),
        )

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return np.array_equal(self._points, other._points) and np.array_equal(self._mult, other._mult)

    __hash__ = None

    def __repr__(self):
        if self.total_mass <= 6:
            body = ", ".join(
                f"({b!r}, {d!r})" + (f"x{m}" if m > 1 else "")
                for (b, d), m in zip(self._points.tolist(), self._mult.tolist())
            )
            return f"PersistenceDiagram([{body}])"
        return f"PersistenceDiagram(<{self.total_mass} points>)"


@dataclass(frozen=True)
class DiagramClassParams:
    """Bounds N (point count, exclusive) and L (box half-width); ``None`` is unbounded."""

    max_points: Optional[int] = None
    box_half_width: Optional[float] = None

    def __post_init__(self):
        if self.max_points is not None and self.max_points < 1:
            raise ValueError("max_points must be >= 1")
        if self.box_half_width is not None and not self.box_half_width > 0:
            raise ValueError("box_half_width must be > 0")

    def contains(self, diagram: PersistenceDiagram) -> bool:
        if self.max_points is not None and diagram.total_mass >= self.max_points:
            return False
        if self.box_half_width is not None and diagram.points.size:
            if np.abs(diagram.points).max() > self.box_half_width:
                return False
        return True


def diagonal_distance(q) -> float:
    """l-infinity distance from ``(birth, death)`` to the diagonal."""
    birth, death = q
    return (death - birth) / 2.0


def diagonal_projection(q) -> tuple:
    """Nearest diagonal point to ``q`` under the l-infinity norm."""
    birth, death = q
    mid = (birth + death) / 2.0
    return (mid, mid)


def sample_uniform_diagram(n: int, rng_seed) -> PersistenceDiagram:
    """Draw ``n`` i.i.d. points uniformly on the triangle 0 <= birth < death <= 1.

    Rejection sampling from the unit square. ``rng_seed`` is anything accepted
    by :func:`numpy.random.default_rng`.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    rng = np.random.default_rng(rng_seed)
    kept = []
    have = 0
    while have < n:
        batch = rng.random((2 * (n - have) + 8, 2))
        batch = batch[batch[:, 0] < batch[:, 1]]
        kept.append(batch)
        have += len(batch)
    pts = np.vstack(kept)[:n]
    return PersistenceDiagram(pts)


PathLike = Union[str, Path]


def _parse_rows(lines: Iterable[str]) -> PersistenceDiagram:
    births, deaths, mults = [], [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) not in (2, 3):
            raise DiagramFormatError(f"expected 2 or 3 fields, got {len(fields)}", lineno)
        try:
            b, d = float(fields[0]), float(fields[1])
        except ValueError:
            raise DiagramFormatError(f"non-numeric coordinate in {line!r}", lineno) from None
        m = 1
        if len(fields) == 3:
            try:
                m = int(fields[2])
            except ValueError:
                raise DiagramFormatError(f"non-integer multiplicity {fields[2]!r}", lineno) from None
        if not (math.isfinite(b) and math.isfinite(d)):
            raise DiagramFormatError("coordinates must be finite", lineno)
        if d < b:
            raise DiagramFormatError(f"death {d!r} precedes birth {b!r}", lineno)
        if d == b:
            raise DiagramFormatError("point lies on the diagonal", lineno)
        if m < 1:
            raise DiagramFormatError(f"multiplicity must be positive, got {m}", lineno)
        births.append(b)
        deaths.append(d)
        mults.append(m)
    return PersistenceDiagram(np.column_stack([births, deaths]) if births else (), mults or None)


def read_diagram(path: PathLike) -> PersistenceDiagram:
    """Read ``birth,death[,multiplicity]`` rows; ``#`` lines are comments."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    return _parse_rows(io.StringIO(text, newline=None))


def write_diagram(diagram: PersistenceDiagram, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for (b, d), m in zip(diagram.points.tolist(), diagram.multiplicities.tolist()):
            fh.write(f"{b!r},{d!r},{m}\n")
