"""Airfoil corpus ingestion: coordinate-file parsing, normalization,
resampling onto canonical stations, and the persisted catalog.

Coordinate files follow the UIUC conventions: a name line followed by
whitespace-separated x/y pairs, either in Selig traversal (upper TE ->
LE -> lower TE) or Lednicer layout (a point-count line, then upper and
lower surfaces each listed LE -> TE).
"""

from __future__ import annotations

import hashlib
import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import AmbiguousTopology, MalformedFile, MissingBaseline
from .geometry import DEFAULT_F, station_x

_FLOAT_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eEdD][-+]?\d+)?")
_DUPLICATE_X_TOL = 1e-7


@dataclass
class RawAirfoilRecord:
    """Parsed but not yet normalized coordinate data."""

    name: str
    points: np.ndarray  # (k, 2) in file order, counts line excluded
    source_format: str  # "selig" | "lednicer" | "unknown"
    surface_counts: tuple[int, int] | None = None  # lednicer only


def parse_coordinate_file(text: str) -> RawAirfoilRecord:
    """Parse a coordinate file body into a raw record.

    The first line is the airfoil name. Every following non-blank line must
    contain exactly two numeric tokens. A Lednicer counts line (two values
    >= 2 whose integer parts sum to the remaining pair count) switches the
    interpretation to two LE->TE surface runs.

    Raises:
        MalformedFile: fewer than 6 numeric pairs, or a non-numeric line
            (the message carries the 1-based line number).
    """
    lines = text.splitlines()
    if not lines:
        raise MalformedFile("empty file")
    name = lines[0].strip()
    pairs: list[tuple[float, float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tokens = _FLOAT_RE.findall(line)
        stripped = _FLOAT_RE.sub("", line).strip(" \t,;")
        if len(tokens) != 2 or stripped:
            raise MalformedFile(f"line {lineno}: expected two numbers, got {line!r}")
        x, y = (float(t.replace("D", "e").replace("d", "e")) for t in tokens)
        pairs.append((x, y))
    if len(pairs) < 6:
        raise MalformedFile(f"only {len(pairs)} coordinate pairs (need >= 6)")

    counts = None
    fmt = "unknown"
    first = pairs[0]
    if (
        first[0] >= 2.0
        and first[1] >= 2.0
        and int(first[0]) + int(first[1]) == len(pairs) - 1
    ):
        fmt = "lednicer"
        counts = (int(first[0]), int(first[1]))
        pairs = pairs[1:]
    else:
        xs = np.array([p[0] for p in pairs])
        i_min = int(np.argmin(xs))
        starts_at_te = xs[0] >= 0.9 * xs.max()
        descends = 0 < i_min < len(xs) - 1
        if starts_at_te and descends and xs[-1] >= 0.9 * xs.max():
            fmt = "selig"
    return RawAirfoilRecord(
        name=name,
        points=np.asarray(pairs, dtype=np.float64),
        source_format=fmt,
        surface_counts=counts,
    )


def _selig_traversal(record: RawAirfoilRecord) -> np.ndarray:
    """Points in upper-TE -> LE -> lower-TE order, whatever the source."""
    pts = record.points
    if record.source_format != "lednicer":
        return pts
    nu, nl = record.surface_counts
    upper = pts[:nu][::-1]  # LE->TE flipped to TE->LE
    lower = pts[nu : nu + nl]
    if np.allclose(upper[-1], lower[0]):
        lower = lower[1:]
    return np.vstack([upper, lower])


def _clean_surface(x: np.ndarray, y: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    """Collapse duplicate/backtracking x so the run is strictly increasing."""
    keep_x = [x[0]]
    keep_y = [y[0]]
    dropped = 0
    for xi, yi in zip(x[1:], y[1:]):
        if xi <= keep_x[-1] + _DUPLICATE_X_TOL:
            if abs(xi - keep_x[-1]) <= _DUPLICATE_X_TOL:
                keep_y[-1] = 0.5 * (keep_y[-1] + yi)
            dropped += 1
            continue
        keep_x.append(xi)
        keep_y.append(yi)
    if dropped:
        warnings.warn(
            f"{name}: collapsed {dropped} duplicate/backtracking x values",
            stacklevel=3,
        )
    return np.asarray(keep_x), np.asarray(keep_y)


def normalize_and_resample(record: RawAirfoilRecord, F: int = DEFAULT_F) -> np.ndarray:
    """Chord-normalize a raw record and sample it at the canonical stations.

    Coordinates are rescaled so x spans exactly [0, 1] (y scaled by the
    same factor), translated so the leading-edge y is 0, split into upper
    and lower surfaces at the minimum-x point, and each surface is sampled
    by monotone piecewise-cubic (PCHIP) interpolation in x.

    Raises:
        ValueError: F odd or < 10.
        AmbiguousTopology: the minimum-x point is not unique enough to
            split the surfaces.
    """
    if F % 2 != 0 or F < 10:
        raise ValueError(f"F must be even and >= 10, got {F}")
    pts = _selig_traversal(record).copy()
    x, y = pts[:, 0], pts[:, 1]

    span = x.max() - x.min()
    if span <= 0:
        raise AmbiguousTopology(f"{record.name}: zero chord extent")
    y = y / span
    x = (x - x.min()) / span

    minima = np.flatnonzero(np.isclose(x, 0.0, atol=_DUPLICATE_X_TOL))
    if minima.size == 0:
        raise AmbiguousTopology(f"{record.name}: no leading-edge point found")
    if minima.max() - minima.min() >= minima.size:
        raise AmbiguousTopology(
            f"{record.name}: multiple disjoint minimum-x points"
        )
    i_le = int(minima[0])
    if i_le == 0 or i_le == len(x) - 1:
        raise AmbiguousTopology(f"{record.name}: leading edge at traversal end")
    y = y - y[i_le]

    up_x, up_y = _clean_surface(x[: i_le + 1][::-1], y[: i_le + 1][::-1], record.name)
    lo_x, lo_y = _clean_surface(x[i_le:], y[i_le:], record.name)
    if len(up_x) < 2 or len(lo_x) < 2:
        raise AmbiguousTopology(f"{record.name}: degenerate surface after cleanup")
    upper = PchipInterpolator(up_x, up_y, extrapolate=True)
    lower = PchipInterpolator(lo_x, lo_y, extrapolate=True)

    xs = station_x(F)
    out = np.empty(F + 1)
    half = F // 2
    out[: half + 1] = upper(xs[: half + 1])
    out[half:] = lower(xs[half:])
    out[half] = 0.0
    return out


@dataclass
class AirfoilCatalog:
    """Immutable, ordered collection of normalized shape vectors."""

    names: list[str]
    vectors: np.ndarray  # (m, F+1)
    F: int
    provenance: str = ""
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.names) != len(set(self.names)):
            raise ValueError("catalog names must be unique")
        if self.vectors.shape != (len(self.names), self.F + 1):
            raise ValueError(
                f"vector block {self.vectors.shape} does not match "
                f"{len(self.names)} names at F={self.F}"
            )
        self._index = {n: i for i, n in enumerate(self.names)}
        self.vectors.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def get(self, name: str) -> np.ndarray:
        try:
            return self.vectors[self._index[name]]
        except KeyError:
            raise MissingBaseline(name) from None

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.F).encode())
        for n in self.names:
            h.update(n.encode("utf-8", "replace"))
            h.update(b"\x00")
        h.update(np.ascontiguousarray(self.vectors).tobytes())
        return h.hexdigest()

    def save(self, path) -> None:
        path = Path(path)
        np.savez_compressed(
            path,
            version=np.array([1]),
            F=np.array([self.F]),
            names=np.array(self.names, dtype=object),
            vectors=self.vectors,
        )
        manifest = {
            "version": 1,
            "F": self.F,
            "m": self.m,
            "provenance": self.provenance,
            "content_hash": self.content_hash(),
        }
        path.with_suffix(path.suffix + ".manifest.json").write_text(
            json.dumps(manifest, indent=2)
        )

    @classmethod
    def load(cls, path) -> "AirfoilCatalog":
        with np.load(path, allow_pickle=True) as data:
            if int(data["version"][0]) != 1:
                raise ValueError(f"unsupported catalog version in {path}")
            return cls(
                names=[str(n) for n in data["names"]],
                vectors=np.array(data["vectors"], dtype=np.float64),
                F=int(data["F"][0]),
                provenance=str(path),
            )


def build_catalog(
    src_dir, F: int = DEFAULT_F, provenance: str | None = None
) -> tuple[AirfoilCatalog, dict[str, str]]:
    """Parse every .dat file under ``src_dir`` into a catalog.

    Files that fail to parse or normalize are skipped and reported in the
    returned error map (filename -> message). Files are visited in sorted
    order so the same directory always yields the same catalog hash.
    """
    src = Path(src_dir)
    names: list[str] = []
    rows: list[np.ndarray] = []
    errors: dict[str, str] = {}
    seen: set[str] = set()
    for path in sorted(src.glob("*.dat")):
        try:
            record = parse_coordinate_file(path.read_text(errors="replace"))
            vec = normalize_and_resample(record, F)
        except Exception as exc:  # noqa: BLE001 - per-file isolation
            errors[path.name] = f"{type(exc).__name__}: {exc}"
            continue
        name = record.name or path.stem
        if name in seen:
            name = f"{name} [{path.stem}]"
        seen.add(name)
        names.append(name)
        rows.append(vec)
    catalog = AirfoilCatalog(
        names=names,
        vectors=np.array(rows) if rows else np.empty((0, F + 1)),
        F=F,
        provenance=provenance or str(src),
    )
    return catalog, errors


@dataclass
class FetchReport:
    retrieved: int
    skipped: int
    failed: dict[str, str]

    @property
    def ok(self) -> bool:
        return not self.failed


def fetch_database(base_url: str, dest_dir, timeout: float = 30.0) -> FetchReport:
    """Mirror every .dat file linked from an index page into ``dest_dir``.

    Already-present files are skipped, so re-runs are idempotent. Per-file
    HTTP errors are recorded in the report rather than raised; an
    unreachable index raises the underlying requests error.
    """
    import requests

    dest = Path(dest_dir)
    dest.mkdir(parents=True, exist_ok=True)
    index = requests.get(base_url, timeout=timeout)
    index.raise_for_status()
    hrefs = re.findall(r'href="([^"]+\.dat)"', index.text, flags=re.IGNORECASE)
    base = base_url if base_url.endswith("/") else base_url.rsplit("/", 1)[0] + "/"

    retrieved, skipped = 0, 0
    failed: dict[str, str] = {}
    checksums: dict[str, str] = {}
    for href in hrefs:
        fname = href.rsplit("/", 1)[-1]
        target = dest / fname
        if target.exists():
            skipped += 1
        else:
            try:
                resp = requests.get(base + href, timeout=timeout)
                resp.raise_for_status()
                target.write_bytes(resp.content)
                retrieved += 1
            except Exception as exc:  # noqa: BLE001 - per-file isolation
                failed[fname] = str(exc)
                continue
        checksums[fname] = hashlib.sha256(target.read_bytes()).hexdigest()
    (dest / "manifest.json").write_text(
        json.dumps({"source": base_url, "files": checksums}, indent=2, sort_keys=True)
    )
    return FetchReport(retrieved=retrieved, skipped=skipped, failed=failed)
