"""Synthetic manifold datasets and image pose-regression data.

Every synthetic surface is parametrized by two angles ``u, v in [0, 2 pi)``
and carries the response ``y = sin(u) + sin(u)^2 + cos(v)^2``, evaluated at
the noise-free angles.  Noise, when requested, only perturbs the ambient
coordinates.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AngleOutOfRange, NotPerfectSquare, ParseError

TWO_PI = 2.0 * np.pi
MANIFOLDS = ("torus", "mobius", "figure8", "klein")

# Per-coordinate noise variances used for the noisy variant of each surface.
DEFAULT_NOISE_VAR = {"torus": 0.03, "mobius": 0.05, "figure8": 0.2, "klein": 0.06}
# Pool sizes of the reference experiments.
DEFAULT_N = {"torus": 400, "mobius": 400, "figure8": 400, "klein": 1600}

TORUS_R, TORUS_r = 2.0, 1.0
FIGURE8_R = 2.0
IMAGE_SIDE = 32
IMAGE_PIXELS = IMAGE_SIDE * IMAGE_SIDE


def response(u, v):
    """``sin(u) + sin(u)^2 + cos(v)^2``; takes values in ``[-0.25, 3]``."""
    su = np.sin(u)
    return su + su * su + np.cos(v) ** 2


def torus(u, v, R=TORUS_R, r=TORUS_r):
    w = R + r * np.cos(v)
    return np.stack([w * np.cos(u), w * np.sin(u), r * np.sin(v)], axis=-1)


def mobius(u, v):
    """Unit-radius Moebius strip; ``v`` is mapped linearly onto a width in ``[-1, 1)``."""
    half = (v / np.pi - 1.0) / 2.0
    w = 1.0 + half * np.cos(u / 2.0)
    return np.stack([w * np.cos(u), w * np.sin(u), half * np.sin(u / 2.0)], axis=-1)


def figure8(u, v, r=FIGURE8_R):
    """Figure-8 immersion of the Klein bottle.

    ``x = (r + cos(u/2) sin v - sin(u/2) sin 2v) cos u``,
    ``y = (r + cos(u/2) sin v - sin(u/2) sin 2v) sin u``,
    ``z = sin(u/2) sin v + cos(u/2) sin 2v``.
    """
    c, s = np.cos(u / 2.0), np.sin(u / 2.0)
    w = r + c * np.sin(v) - s * np.sin(2.0 * v)
    return np.stack([w * np.cos(u), w * np.sin(u), s * np.sin(v) + c * np.sin(2.0 * v)], axis=-1)


def klein(u, v):
    """Classic bottle-shaped Klein bottle immersion.

    The textbook form uses ``t in [0, pi)`` for the long direction; here
    ``t = u / 2``::

        x = -2/15 cos t (3 cos v - 30 sin t + 90 cos^4 t sin t - 60 cos^6 t sin t + 5 cos t cos v sin t)
        y = -1/15 sin t (3 cos v - 3 cos^2 t cos v - 48 cos^4 t cos v + 48 cos^6 t cos v - 60 sin t
                         + 5 cos t cos v sin t - 5 cos^3 t cos v sin t - 80 cos^5 t cos v sin t
                         + 80 cos^7 t cos v sin t)
        z = 2/15 (3 + 5 cos t sin t) sin v
    """
    t = u / 2.0
    c, s = np.cos(t), np.sin(t)
    cv, sv = np.cos(v), np.sin(v)
    x = -2.0 / 15.0 * c * (3 * cv - 30 * s + 90 * c**4 * s - 60 * c**6 * s + 5 * c * cv * s)
    y = -1.0 / 15.0 * s * (
        3 * cv - 3 * c**2 * cv - 48 * c**4 * cv + 48 * c**6 * cv - 60 * s
        + 5 * c * cv * s - 5 * c**3 * cv * s - 80 * c**5 * cv * s + 80 * c**7 * cv * s
    )
    z = 2.0 / 15.0 * (3 + 5 * c * s) * sv
    return np.stack([x, y, z], axis=-1)


SURFACES = {"torus": torus, "mobius": mobius, "figure8": figure8, "klein": klein}


@dataclass
class ManifoldDataset:
    points: np.ndarray
    params: np.ndarray
    labels: np.ndarray
    kind: str
    noise_var: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_csv(self, path, comments: dict | None = None):
        d = self.points.shape[1]
        header = [f"x{i + 1}" for i in range(d)] + ["u", "v", "y"]
        table = np.column_stack([self.points, self.params, self.labels])
        info = {"kind": self.kind, "noise_var": self.noise_var, **self.meta, **(comments or {})}
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for key, val in info.items():
                fh.write(f"# {key} = {val}\n")
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows([[repr(float(v)) for v in row] for row in table])

    @classmethod
    def from_csv(cls, path) -> "ManifoldDataset":
        comments, header, rows = _read_csv(path)
        if not header or header[-3:] != ["u", "v", "y"] or not header[0].startswith("x"):
            raise ParseError(f"{path}: expected a header 'x1,...,xd,u,v,y'")
        try:
            table = np.array(rows, dtype=float)
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
        if table.ndim != 2 or table.shape[1] != len(header):
            raise ParseError(f"{path}: every row needs {len(header)} fields")
        kind = comments.pop("kind", "unknown")
        noise = float(comments.pop("noise_var", 0.0))
        return cls(table[:, :-3], table[:, -3:-1], table[:, -1], kind, noise, comments)


def generate(kind: str, n: int = 400, noise_var: float = 0.0, seed: int = 0,
             sampling: str = "grid") -> ManifoldDataset:
    """Sample ``n`` points of a synthetic surface.

    Parameters
    ----------
    kind : {"torus", "mobius", "figure8", "klein"}
    n : int
        Number of points.  With ``sampling="grid"`` it must be a perfect
        square and ``(u, v)`` run over a ``sqrt(n) x sqrt(n)`` grid starting
        at ``(0, 0)``; ``"random"`` draws them uniformly.
    noise_var : float
        Variance of the i.i.d. Gaussian noise added to each coordinate.
    """
    if kind not in SURFACES:
        raise ValueError(f"unknown manifold {kind!r}; expected one of {MANIFOLDS}")
    if noise_var < 0:
        raise ValueError("noise variance must be nonnegative")
    rng = np.random.default_rng(seed)
    if sampling == "grid":
        m = math.isqrt(n)
        if m * m != n or n <= 0:
            raise NotPerfectSquare(f"n={n} is not a perfect square; the (u, v) grid needs n = m*m")
        grid = TWO_PI * np.arange(m) / m
        uu, vv = np.meshgrid(grid, grid, indexing="ij")
        u, v = uu.ravel(), vv.ravel()
    elif sampling == "random":
        u = rng.uniform(0.0, TWO_PI, n)
        v = rng.uniform(0.0, TWO_PI, n)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    points = SURFACES[kind](u, v)
    if noise_var > 0:
        points = points + rng.normal(0.0, math.sqrt(noise_var), points.shape)
    meta = {"n": n, "seed": seed, "sampling": sampling}
    return ManifoldDataset(points, np.column_stack([u, v]), response(u, v), kind, float(noise_var), meta)


@dataclass
class ImageDataset:
    vectors: np.ndarray
    angles: np.ndarray
    object_id: str = ""

    @property
    def n(self) -> int:
        return len(self.angles)

    @property
    def points(self) -> np.ndarray:
        return self.vectors

    @property
    def labels(self) -> np.ndarray:
        return self.angles

    def to_csv(self, path, comments: dict | None = None):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for key, val in {"object_id": self.object_id, **(comments or {})}.items():
                fh.write(f"# {key} = {val}\n")
            writer = csv.writer(fh)
            writer.writerow([f"p{i}" for i in range(IMAGE_PIXELS)] + ["angle_degrees"])
            for vec, ang in zip(self.vectors, self.angles):
                writer.writerow([f"{v:.6g}" for v in vec] + [f"{ang:.6g}"])


def _read_csv(path):
    """Split a CSV file into ``# key = value`` comments, header and rows."""
    comments, rows, header = {}, [], None
    with open(path, encoding="utf-8", newline="") as fh:
        lines = []
        for raw in fh:
            if raw.startswith("#"):
                key, sep, val = raw[1:].partition("=")
                if sep:
                    comments[key.strip()] = val.strip()
                continue
            if raw.strip():
                lines.append(raw)
    for i, row in enumerate(csv.reader(lines)):
        if i == 0 and row and not _is_number(row[0]):
            header = [c.strip() for c in row]
        else:
            rows.append(row)
    return comments, header, rows


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_images(path) -> ImageDataset:
    """Read an image CSV: 1024 pixel columns in ``[0, 1]`` then the angle.

    ``#`` lines are comments; an optional ``p0,...`` header is skipped.
    Rows are returned sorted by angle.
    """
    path = Path(path)
    data_rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].startswith("#"):
                continue
            if row[0].strip() == "p0":
                continue
            if len(row) != IMAGE_PIXELS + 1:
                raise ParseError(f"{path}: row at line {lineno} has {len(row)} fields, expected {IMAGE_PIXELS + 1}")
            try:
                data_rows.append((lineno, [float(v) for v in row]))
            except ValueError:
                raise ParseError(f"{path}: non-numeric field in row at line {lineno}") from None
    if not data_rows:
        raise ParseError(f"{path}: no image rows")
    table = np.array([r for _, r in data_rows])
    pixels, angles = table[:, :-1], table[:, -1]
    bad = np.flatnonzero((pixels < -1e-9).any(axis=1) | (pixels > 1 + 1e-9).any(axis=1))
    if bad.size:
        raise ParseError(f"{path}: pixel values outside [0, 1] in row at line {data_rows[bad[0]][0]}")
    bad = np.flatnonzero((angles < 0) | (angles >= 360))
    if bad.size:
        raise AngleOutOfRange(f"{path}: angle {angles[bad[0]]} at line {data_rows[bad[0]][0]} not in [0, 360)")
    order = np.argsort(angles, kind="stable")
    comments, _, _ = _read_csv(path)
    return ImageDataset(np.clip(pixels[order], 0.0, 1.0), angles[order], comments.get("object_id", path.stem))


def rotating_pattern_images(n_angles: int = 72, seed: int = 0, n_blobs: int = 3) -> ImageDataset:
    """A synthetic object photographed at ``n_angles`` evenly spaced poses.

    The object is a random set of Gaussian blobs placed off-center; each
    image renders it rotated about the image center, evaluated analytically
    at the 32 x 32 pixel centers.  Labels are the rotation in degrees.
    """
    rng = np.random.default_rng(seed)
    radius = rng.uniform(4.0, 11.0, n_blobs)
    phase = rng.uniform(0.0, TWO_PI, n_blobs)
    width = rng.uniform(1.5, 3.5, n_blobs)
    amp = rng.uniform(0.5, 1.0, n_blobs)
    centre = (IMAGE_SIDE - 1) / 2.0
    rows, cols = np.mgrid[0:IMAGE_SIDE, 0:IMAGE_SIDE]
    angles = 360.0 * np.arange(n_angles) / n_angles
    images = np.zeros((n_angles, IMAGE_PIXELS))
    for i, deg in enumerate(angles):
        theta = np.deg2rad(deg)
        img = np.zeros((IMAGE_SIDE, IMAGE_SIDE))
        for r, ph, w, a in zip(radius, phase, width, amp):
            bx = centre + r * np.cos(ph + theta)
            by = centre + r * np.sin(ph + theta)
            img += a * np.exp(-((cols - bx) ** 2 + (rows - by) ** 2) / (2.0 * w * w))
        images[i] = img.ravel()
    images = np.clip(images / max(images.max(), 1e-12), 0.0, 1.0)
    return ImageDataset(images, angles, f"rotating-pattern-{seed}")
