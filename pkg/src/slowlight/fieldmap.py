"""Rectangular (tau, zeta) maps of dressed fields and populations."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError

COLUMNS = [
    ("tau", "t_p"),
    ("zeta", "scaled"),
    ("t", "t_p"),
    ("z", "scaled"),
    ("re_omega_a", "1/t_p"),
    ("im_omega_a", "1/t_p"),
    ("re_omega_b", "1/t_p"),
    ("im_omega_b", "1/t_p"),
    ("abs2_omega_a", "1/t_p^2"),
    ("abs2_omega_b", "1/t_p^2"),
    ("P1", "1"),
    ("P2", "1"),
    ("P3", "1"),
]


def thread_count() -> int:
    try:
        n = int(os.environ.get("SLOWLIGHT_THREADS", "1"))
    except ValueError:
        raise ValidationError("SLOWLIGHT_THREADS must be an integer") from None
    return max(n, 1)


@dataclass
class FieldMap:
    """Fields and populations on a tau x zeta grid; arrays are (n_tau, n_zeta)."""

    tau: np.ndarray
    zeta: np.ndarray
    omega_a: np.ndarray
    omega_b: np.ndarray
    populations: np.ndarray  # (n_tau, n_zeta, 3)

    def __post_init__(self):
        shape = (self.tau.size, self.zeta.size)
        for name in ("omega_a", "omega_b"):
            if getattr(self, name).shape != shape:
                raise ValidationError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if self.populations.shape != shape + (3,):
            raise ValidationError("populations must have shape (n_tau, n_zeta, 3)")

    @property
    def shape(self):
        return self.tau.size, self.zeta.size

    def channel(self, name: str) -> np.ndarray:
        """Real-valued map by name: abs2_omega_a, abs_omega_a, P1, P2, P3, ..."""
        table = {
            "abs2_omega_a": lambda: np.abs(self.omega_a) ** 2,
            "abs2_omega_b": lambda: np.abs(self.omega_b) ** 2,
            "abs_omega_a": lambda: np.abs(self.omega_a),
            "abs_omega_b": lambda: np.abs(self.omega_b),
            "omega_a": lambda: np.abs(self.omega_a),
            "omega_b": lambda: np.abs(self.omega_b),
            "P1": lambda: self.populations[..., 0],
            "P2": lambda: self.populations[..., 1],
            "P3": lambda: self.populations[..., 2],
        }
        if name not in table:
            raise ValidationError(f"unknown channel '{name}'")
        return table[name]()

    def population_defect(self) -> float:
        return float(np.max(np.abs(self.populations.sum(axis=-1) - 1)))

    def columns(self) -> dict:
        T, Z = np.meshgrid(self.tau, self.zeta, indexing="ij")
        p = self.populations
        return {
            "tau": T.ravel(),
            "zeta": Z.ravel(),
            "t": (T + Z).ravel(),
            "z": Z.ravel(),
            "re_omega_a": self.omega_a.real.ravel(),
            "im_omega_a": self.omega_a.imag.ravel(),
            "re_omega_b": self.omega_b.real.ravel(),
            "im_omega_b": self.omega_b.imag.ravel(),
            "abs2_omega_a": (np.abs(self.omega_a) ** 2).ravel(),
            "abs2_omega_b": (np.abs(self.omega_b) ** 2).ravel(),
            "P1": p[..., 0].ravel(),
            "P2": p[..., 1].ravel(),
            "P3": p[..., 2].ravel(),
        }

    def to_csv(self, path) -> None:
        cols = self.columns()
        header = [f"{name} [{unit}]" for name, unit in COLUMNS]
        data = np.column_stack([cols[name] for name, _ in COLUMNS])
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in data:
                w.writerow([format(v, ".17g") for v in row])

    @classmethod
    def from_csv(cls, path) -> "FieldMap":
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            names = [h.split(" [", 1)[0] for h in header]
            rows = np.array([[float(v) for v in row] for row in r])
        col = {n: rows[:, i] for i, n in enumerate(names)}
        tau = np.unique(col["tau"])
        zeta = np.unique(col["zeta"])
        shape = (tau.size, zeta.size)
        if rows.shape[0] != tau.size * zeta.size:
            raise ValidationError("CSV is not a full rectangular grid")
        oa = (col["re_omega_a"] + 1j * col["im_omega_a"]).reshape(shape)
        ob = (col["re_omega_b"] + 1j * col["im_omega_b"]).reshape(shape)
        pops = np.stack([col["P1"], col["P2"], col["P3"]], axis=-1).reshape(shape + (3,))
        return cls(col["tau"].reshape(shape)[:, 0], col["zeta"].reshape(shape)[0], oa, ob, pops)


def build_fieldmap(solution, tau, zeta, threads: int | None = None) -> FieldMap:
    """Evaluate ``solution`` on the grid, rows of constant tau in parallel."""
    tau = np.asarray(tau, float)
    zeta = np.asarray(zeta, float)
    if tau.size == 0 or zeta.size == 0:
        raise ValidationError("empty grid")
    threads = threads or thread_count()

    def row_block(idx):
        T, Z = np.meshgrid(tau[idx], zeta, indexing="ij")
        oa, ob = solution.fields(T, Z)
        p = np.stack(solution.populations(T, Z), axis=-1)
        return idx, oa, ob, p

    oa = np.empty((tau.size, zeta.size), complex)
    ob = np.empty_like(oa)
    pops = np.empty((tau.size, zeta.size, 3))
    blocks = np.array_split(np.arange(tau.size), max(1, min(tau.size, 4 * threads)))
    blocks = [b for b in blocks if b.size]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(row_block, blocks))
    else:
        results = [row_block(b) for b in blocks]
    for idx, a, b, p in results:
        oa[idx], ob[idx], pops[idx] = a, b, p
    return FieldMap(tau, zeta, oa, ob, pops)


def ensure_writable(directory) -> Path:
    """Create ``directory`` if needed and fail early when it is not writable."""
    d = Path(directory)
    try:
        d.mkdir(parents=True, exist_ok=True)
        probe = d / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise PermissionError(f"output directory {d} is not writable: {exc}") from exc
    return d
