"""CSV and binary artifact writers.

Floats are written with 17 significant digits and every file ends lines with
a bare '\\n', so identical runs produce byte-identical files.
"""
import csv
import logging
import os
from typing import Iterable, List, Sequence, TextIO

import numpy as np
import scipy.fft

from src.algebra.singularity import SweepRow
from src.comb.grid import CouplingProfile, RingGrid
from src.comb.lle import Trajectory
from src.comb.scans import EPSurface, FidelityCurve, StabilityMap
from src.comb.spectra import BeatNote, CombTooth, PinningReport, Spectrum
from src.errors import InvalidParameterError

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = np.dtype('<u8')
TRAJECTORY_DATA = np.dtype('<c16')


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    return str(value)


def write_rows(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    with open(path, 'w', newline='', encoding='utf-8') as f:
        write_rows(f, header, rows)
    logger.debug('wrote %s', path)
    return path


# --- algebra -------------------------------------------------------------------------

SWEEP_HEADER = ('a_num', 'a_den', 'mu', 'tau', 'gap', 'status')


def sweep_rows(rows: Sequence[SweepRow]) -> List[list]:
    out = []
    for row in rows:
        out.append([row.a.numerator, row.a.denominator,
                    '' if row.mu is None else row.mu,
                    '' if row.tau is None else row.tau,
                    '' if row.gap is None else row.gap,
                    row.status])
    return out


# --- comb artifacts ------------------------------------------------------------------

def write_stability_map(path: str, result: StabilityMap) -> str:
    return write_csv(path, ('detuning', 'modulus', 'class'),
                     ((d, a, c.value) for d, a, c in result.rows()))


def write_eps_surface(path: str, result: EPSurface) -> str:
    return write_csv(path, ('detuning', 'modulus', 'p_star', 'bracket_width', 'status'),
                     ((d, a, t.value, t.width, t.status.value) for d, a, t in result.rows()))


def write_fidelity_curve(path: str, curve: FidelityCurve) -> str:
    return write_csv(path, ('eta', 'mean', 'std', 'blowup_count'),
                     ((p.eta, p.mean, p.std, p.blowup_count) for p in curve.points))


def write_pinning(path: str, report: PinningReport) -> str:
    return write_csv(path, ('tooth_k', 'drift_max', 'drift_rms', 'amp_var'),
                     ((t.mode_k, t.drift_max, t.drift_rms, t.amp_var) for t in report.teeth))


def write_psd(path: str, note: BeatNote) -> str:
    return write_csv(path, ('freq', 'power'), zip(note.freqs, note.psd))


def write_spectrum(path: str, spectrum: Spectrum) -> str:
    return write_csv(path, ('mode_k', 'power', 'power_db'),
                     zip(spectrum.modes, spectrum.power, spectrum.in_db()))


def write_profile(path: str, profile: CouplingProfile, grid: RingGrid) -> str:
    return write_csv(path, ('mode_k', 'a_k'), zip(grid.centered_modes, profile.centered_values(grid)))


def write_teeth(path: str, teeth: Sequence[CombTooth]) -> str:
    rows = []
    for tooth in teeth:
        if tooth.degenerate:
            rows.append([tooth.level, '', '', True])
        for k, phase in zip(tooth.positions, tooth.phases):
            rows.append([tooth.level, k, phase, False])
    return write_csv(path, ('level', 'k_star', 'phase', 'degenerate'), rows)


# --- trajectories --------------------------------------------------------------------

def write_trajectory_csv(path: str, trajectory: Trajectory) -> str:
    """Centered mode amplitudes (forward-normalized FFT) of both fields per snapshot."""
    grid = trajectory.grid
    modes = grid.centered(scipy.fft.fft(trajectory.snapshots, axis=-1, norm='forward'))
    ks = grid.centered_modes

    def rows():
        for index in range(modes.shape[0]):
            for f, name in enumerate(('A', 'B')):
                for k, amp in zip(ks, modes[index, f]):
                    yield index, name, k, amp.real, amp.imag

    return write_csv(path, ('snapshot_index', 'field', 'mode_k', 're', 'im'), rows())


def write_trajectory_binary(path: str, trajectory: Trajectory) -> str:
    """Header (M, count) as little-endian uint64, then snapshots (count, 2, M) as complex128."""
    snaps = np.ascontiguousarray(trajectory.snapshots, dtype=TRAJECTORY_DATA)
    count, _, m = snaps.shape
    with open(path, 'wb') as f:
        f.write(np.asarray([m, count], dtype=TRAJECTORY_HEADER).tobytes())
        f.write(snaps.tobytes())
    return path


def load_trajectory_binary(path: str) -> np.ndarray:
    with open(path, 'rb') as f:
        raw = f.read()
    head = TRAJECTORY_HEADER.itemsize * 2
    if len(raw) < head:
        raise InvalidParameterError(f'{os.path.basename(path)}: truncated header')
    m, count = (int(v) for v in np.frombuffer(raw[:head], dtype=TRAJECTORY_HEADER))
    data = np.frombuffer(raw[head:], dtype=TRAJECTORY_DATA)
    if data.size != count * 2 * m:
        raise InvalidParameterError(f'{os.path.basename(path)}: expected {count * 2 * m} values, found {data.size}')
    return data.reshape(count, 2, m).copy()
