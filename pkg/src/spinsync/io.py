"""File formats shared with external consumers (plot frontend, notebooks).

Floats are written with 17 significant digits so values round-trip exactly
and repeated runs of the same configuration produce byte-identical files.
All CSVs use a single header line and "\n" line endings.
"""

from __future__ import annotations

import json

import numpy as np

__all__ = [
    "write_qfield_csv",
    "write_phase_csv",
    "write_sweep_csv",
    "write_trajectory_csv",
    "write_spin_table_csv",
    "density_to_json",
    "density_from_json",
    "write_json",
]


def _fmt(x):
    return f"{float(x):.17g}"


def write_qfield_csv(path, qfield):
    """Write a Q field as rows theta,phi,q; theta outer, grid order."""
    grid = qfield.grid
    lines = ["theta,phi,q"]
    for i, theta in enumerate(grid.theta_nodes):
        ts = _fmt(theta)
        row = qfield.values[i]
        for j, phi in enumerate(grid.phi_nodes):
            lines.append(f"{ts},{_fmt(phi)},{_fmt(row[j])}")
    _write_text(path, lines)


def write_phase_csv(path, dist):
    """Write a phase distribution as rows phi,s."""
    lines = ["phi,s"]
    for phi, s in zip(dist.phi_nodes, dist.values):
        lines.append(f"{_fmt(phi)},{_fmt(s)}")
    _write_text(path, lines)


def write_sweep_csv(path, result):
    """Write sweep rows; columns delta,epsilon,s_max,phi_star,mean_sz.

    Rows carrying an equator weight (breakdown scans) get a sixth
    equator_weight column. Failed points appear with nan observables; their
    error messages travel in the run's JSON sidecar, not in the CSV.
    """
    rows = result.rows
    with_band = any(r.equator_weight is not None for r in rows)
    header = "delta,epsilon,s_max,phi_star,mean_sz"
    if with_band:
        header += ",equator_weight"
    lines = [header]
    for r in rows:
        cells = [_fmt(r.delta), _fmt(r.epsilon), _fmt(r.s_max),
                 _fmt(r.phi_star), _fmt(r.mean_sz)]
        if with_band:
            cells.append(_fmt(r.equator_weight if r.equator_weight is not None else np.nan))
        lines.append(",".join(cells))
    _write_text(path, lines)


def write_trajectory_csv(path, times, phi_nodes, svalues):
    """Write S(phi, t) samples as rows t,phi,s; time outer."""
    svalues = np.asarray(svalues)
    lines = ["t,phi,s"]
    for k, t in enumerate(times):
        ts = _fmt(t)
        row = svalues[k]
        for j, phi in enumerate(phi_nodes):
            lines.append(f"{ts},{_fmt(phi)},{_fmt(row[j])}")
    _write_text(path, lines)


def write_spin_table_csv(path, pairs):
    """Write (spin, s_max) pairs as rows spin,s_max."""
    lines = ["spin,s_max"]
    for spin, s_max in pairs:
        lines.append(f"{_fmt(spin)},{_fmt(s_max)}")
    _write_text(path, lines)


def density_to_json(rho):
    """Represent a density matrix as {"dim": d, "re": [[...]], "im": [[...]]}.

    Row-major nested lists; exact float values (json keeps full precision).
    """
    rho = np.asarray(rho, dtype=complex)
    return {
        "dim": int(rho.shape[0]),
        "re": rho.real.tolist(),
        "im": rho.imag.tolist(),
    }


def density_from_json(obj):
    """Rebuild a complex matrix from density_to_json output."""
    dim = int(obj["dim"])
    rho = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    if rho.shape != (dim, dim):
        raise ValueError(f"JSON dim {dim} does not match matrix shape {rho.shape}")
    return rho


def write_json(path, obj):
    """Canonical JSON dump: sorted keys, 2-space indent, trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_text(path, lines):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")
