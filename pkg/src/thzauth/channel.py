"""THz path loss: free-space spreading plus molecular absorption.

Units at the API boundary are Hz, metres, kelvin and atm. Pressure is
converted to pascal only inside :func:`molecular_density`.

Absorption enters through one of two inputs:

* :class:`AbsorptionTable` - precomputed ``k(f)`` samples, linearly
  interpolated, never extrapolated.
* :class:`LineCatalog` - a short list of spectral lines. Each line adds
  ``(p/p0) (T0/T) Q S G(f)`` where ``Q`` is the ideal-gas number density of
  the species and ``G`` is an area-normalised Lorentzian. ``S`` is the
  frequency-integrated cross-section in m^2 Hz per molecule, so ``S G`` is a
  cross-section in m^2 and ``k`` comes out in 1/m.

The absorption loss is ``10 log10(1/tau)`` because the transmittance is a
power ratio.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
GAS_CONSTANT = 8.314462618  # J/(mol K)
AVOGADRO = 6.02214076e23  # 1/mol
ATM_PA = 101_325.0
LOG10_E = math.log10(math.e)

TABLE_HEADER = ("frequency_hz", "k_per_m")
CATALOG_HEADER = ("gas", "isotopologue", "center_hz", "intensity", "width_hz", "mixing_ratio")


@dataclass(frozen=True)
class Medium:
    """Ambient gas state. ``t0``/``p0`` are the line-intensity reference."""

    temperature_k: float = 285.0
    pressure_atm: float = 1.0
    t0_k: float = 296.0
    p0_atm: float = 1.0

    def __post_init__(self):
        for name in ("temperature_k", "pressure_atm", "t0_k", "p0_atm"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"Medium.{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class AbsorptionTable:
    frequency_hz: np.ndarray
    k_per_m: np.ndarray
    temperature_k: float | None = None
    pressure_atm: float | None = None
    label: str = ""

    def __post_init__(self):
        f = np.asarray(self.frequency_hz, dtype=float)
        k = np.asarray(self.k_per_m, dtype=float)
        if f.ndim != 1 or f.shape != k.shape or f.size < 2:
            raise ValueError("table needs two equal-length 1-D columns with at least two rows")
        if not np.all(np.isfinite(f)) or not np.all(np.isfinite(k)):
            raise ValueError("table entries must be finite")
        if np.any(np.diff(f) <= 0):
            raise ValueError("table frequencies must be strictly increasing")
        if np.any(k < 0):
            raise ValueError("absorption coefficients must be non-negative")
        f.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "frequency_hz", f)
        object.__setattr__(self, "k_per_m", k)

    def k_at(self, f_hz):
        """Linearly interpolated k(f); raises outside the tabulated band."""
        f = np.asarray(f_hz, dtype=float)
        if np.any(f < self.frequency_hz[0]) or np.any(f > self.frequency_hz[-1]):
            raise ValueError(
                f"frequency {f_hz!r} outside table coverage "
                f"[{self.frequency_hz[0]:g}, {self.frequency_hz[-1]:g}] Hz"
            )
        out = np.interp(f, self.frequency_hz, self.k_per_m)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpectralLine:
    gas: str
    isotopologue: str
    center_hz: float
    intensity: float  # m^2 Hz per molecule
    width_hz: float  # full width at half maximum
    mixing_ratio: float

    def __post_init__(self):
        if not self.intensity >= 0:
            raise ValueError(f"line intensity must be >= 0, got {self.intensity!r}")
        if not self.width_hz > 0:
            raise ValueError(f"line width must be > 0, got {self.width_hz!r}")
        if not 0.0 <= self.mixing_ratio <= 1.0:
            raise ValueError(f"mixing ratio must lie in [0, 1], got {self.mixing_ratio!r}")
        if not self.center_hz > 0:
            raise ValueError("line centre must be positive")


@dataclass(frozen=True)
class LineCatalog:
    lines: tuple[SpectralLine, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    def __len__(self) -> int:
        return len(self.lines)


AbsorptionModel = Union[AbsorptionTable, LineCatalog]


def spreading_loss_db(f_hz, d_m):
    """Free-space spreading loss 20 log10(4 pi f d / c)."""
    f = np.asarray(f_hz, dtype=float)
    d = np.asarray(d_m, dtype=float)
    if np.any(~(f > 0)) or np.any(~(d > 0)):
        raise ValueError("frequency and distance must be positive")
    out = 20.0 * np.log10(4.0 * math.pi * f * d / SPEED_OF_LIGHT)
    return float(out) if out.ndim == 0 else out


def molecular_density(medium: Medium, mixing_ratio: float) -> float:
    """Number density (molecules per m^3) of a species with the given mixing ratio."""
    if not 0.0 <= mixing_ratio <= 1.0:
        raise ValueError(f"mixing ratio must lie in [0, 1], got {mixing_ratio!r}")
    p_pa = medium.pressure_atm * ATM_PA
    return p_pa / (GAS_CONSTANT * medium.temperature_k) * mixing_ratio * AVOGADRO


def lorentzian(f_hz, center_hz: float, width_hz: float):
    """Area-normalised Lorentzian with full width at half maximum ``width_hz``."""
    gamma = 0.5 * width_hz
    f = np.asarray(f_hz, dtype=float)
    return (gamma / math.pi) / ((f - center_hz) ** 2 + gamma**2)


def absorption_coefficient(catalog: LineCatalog, medium: Medium, f_hz):
    """Medium absorption coefficient k(f) in 1/m summed over catalog lines."""
    if len(catalog) == 0:
        raise ValueError("line catalog is empty")
    f = np.asarray(f_hz, dtype=float)
    if np.any(~(f > 0)):
        raise ValueError("frequency must be positive")
    scale = (medium.pressure_atm / medium.p0_atm) * (medium.t0_k / medium.temperature_k)
    k = np.zeros_like(f)
    for line in catalog.lines:
        density = molecular_density(medium, line.mixing_ratio)
        k = k + scale * density * line.intensity * lorentzian(f, line.center_hz, line.width_hz)
    return float(k) if k.ndim == 0 else k


def transmittance(k_per_m, d_m):
    """Beer-Lambert transmittance exp(-k d)."""
    k = np.asarray(k_per_m, dtype=float)
    d = np.asarray(d_m, dtype=float)
    if np.any(~(k >= 0)) or np.any(~(d >= 0)):
        raise ValueError("k and d must be non-negative")
    out = np.exp(-k * d)
    return float(out) if out.ndim == 0 else out


def absorption_loss_db(k_per_m, d_m):
    """Absorption loss 10 log10(1/tau) = 10 k d log10(e), in dB."""
    k = np.asarray(k_per_m, dtype=float)
    d = np.asarray(d_m, dtype=float)
    if np.any(~(k >= 0)) or np.any(~(d >= 0)):
        raise ValueError("k and d must be non-negative")
    out = 10.0 * LOG10_E * k * d
    return float(out) if out.ndim == 0 else out


def k_for(model: AbsorptionModel, medium: Medium, f_hz):
    """k(f) from either absorption input."""
    if isinstance(model, AbsorptionTable):
        return model.k_at(f_hz)
    if isinstance(model, LineCatalog):
        return absorption_coefficient(model, medium, f_hz)
    raise TypeError(f"unsupported absorption model {type(model).__name__}")


def path_loss_db(model: AbsorptionModel, medium: Medium, f_hz, d_m):
    """Total path loss in dB: spreading plus absorption."""
    k = k_for(model, medium, f_hz)
    out = np.asarray(spreading_loss_db(f_hz, d_m)) + np.asarray(absorption_loss_db(k, d_m))
    return float(out) if out.ndim == 0 else out


def tabulate(catalog: LineCatalog, medium: Medium, f_hz, label: str = "") -> AbsorptionTable:
    """Sample a catalog onto a frequency grid."""
    f = np.asarray(f_hz, dtype=float)
    return AbsorptionTable(
        f,
        absorption_coefficient(catalog, medium, f),
        temperature_k=medium.temperature_k,
        pressure_atm=medium.pressure_atm,
        label=label,
    )


# ---------------------------------------------------------------- CSV I/O


def _data_rows(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{path}: no header row")
    header = tuple(c.strip() for c in rows[0])
    return header, [[c.strip() for c in r] for r in rows[1:]]


def load_table_csv(path, label: str | None = None) -> AbsorptionTable:
    """Read a ``frequency_hz,k_per_m`` table; ``#`` lines are comments."""
    path = Path(path)
    header, rows = _data_rows(path)
    if header != TABLE_HEADER:
        raise ValueError(f"{path}: expected header {','.join(TABLE_HEADER)}, got {','.join(header)}")
    try:
        data = np.array([[float(a), float(b)] for a, b in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: malformed row ({exc})") from None
    return AbsorptionTable(data[:, 0], data[:, 1], label=label if label is not None else path.stem)


def save_table_csv(table: AbsorptionTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if table.label:
            fh.write(f"# {table.label}\n")
        fh.write(",".join(TABLE_HEADER) + "\n")
        for f, k in zip(table.frequency_hz, table.k_per_m):
            fh.write(f"{f:.12g},{k:.12g}\n")


def load_catalog_csv(path) -> LineCatalog:
    """Read a line catalog CSV (header ``gas,isotopologue,center_hz,intensity,width_hz,mixing_ratio``)."""
    path = Path(path)
    header, rows = _data_rows(path)
    if header != CATALOG_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CATALOG_HEADER)}, got {','.join(header)}")
    lines = []
    for r in rows:
        if len(r) != len(CATALOG_HEADER):
            raise ValueError(f"{path}: expected {len(CATALOG_HEADER)} columns, got {len(r)}")
        lines.append(SpectralLine(r[0], r[1], float(r[2]), float(r[3]), float(r[4]), float(r[5])))
    return LineCatalog(tuple(lines))


def load_absorption(path) -> AbsorptionModel:
    """Load either CSV kind, dispatching on the header row."""
    header, _ = _data_rows(Path(path))
    if header == TABLE_HEADER:
        return load_table_csv(path)
    if header == CATALOG_HEADER:
        return load_catalog_csv(path)
    raise ValueError(f"{path}: unrecognised absorption CSV header {','.join(header)}")


def default_catalog() -> LineCatalog:
    """Bundled illustrative water-vapour-like catalog (not physical ground truth)."""
    ref = resources.files("thzauth") / "data" / "h2o_like_catalog.csv"
    with resources.as_file(ref) as p:
        return load_catalog_csv(p)


def default_table() -> AbsorptionTable:
    """Bundled k(f) table sampled from :func:`default_catalog` at 285 K, 1 atm."""
    ref = resources.files("thzauth") / "data" / "k_table_285K_1atm.csv"
    with resources.as_file(ref) as p:
        return load_table_csv(p, label="k_table_285K_1atm")
