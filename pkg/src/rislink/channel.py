"""Line-of-sight MIMO channel matrices between planar arrays.

Entry (m, n) of the channel from a transmit array to a receive array is

    sqrt(pi^2 * cos_rx * cos_tx / beta) * exp(-1j * kappa * d_mn)

where d_mn is the element pairwise distance, kappa = 2*pi/wavelength,
cos_rx / cos_tx are the aperture cosines at each end (clamped at 0), and
beta = (d_centers / d0)^alpha is the per-link path loss evaluated once at
the center-to-center distance. No NLoS component and no direct tx-rx link
are modeled.
"""

import json
import struct
from dataclasses import dataclass

import numpy as np

from .geometry import PlanarArray, element_positions

SPEED_OF_LIGHT = 299_792_458.0  # m/s


@dataclass(frozen=True)
class PathLossModel:
    exponent: float = 4.0
    reference_distance: float = 1.0

    def __post_init__(self):
        if self.exponent < 2.0:
            raise ValueError("path loss exponent must be >= 2")
        if not self.reference_distance > 0:
            raise ValueError("reference distance must be positive")

    def beta(self, distance: float) -> float:
        return (distance / self.reference_distance) ** self.exponent


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex per-element channel coefficients, n_rx_elements x
    n_tx_elements, together with the carrier wavelength used to build it."""

    entries: np.ndarray
    wavelength: float

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2:
            raise ValueError("channel entries must be a 2D matrix")
        if not np.all(np.isfinite(e)):
            raise ValueError("channel entries must be finite")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def wavelength(frequency: float) -> float:
    """Carrier wavelength in meters for a frequency in Hz."""
    if not frequency > 0:
        raise ValueError("frequency must be positive")
    return SPEED_OF_LIGHT / frequency


def los_channel(
    tx: PlanarArray, rx: PlanarArray, wavelength: float, pl: PathLossModel
) -> ChannelMatrix:
    """LoS channel from every tx element to every rx element.

    Amplitudes use the per-link path loss at the center-to-center distance;
    per-element distances enter only the phase and the aperture cosines.
    """
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    d_centers = float(np.linalg.norm(rx.center - tx.center))
    if d_centers == 0.0:
        raise ValueError("overlapping arrays: zero center distance")

    p_tx = element_positions(tx)  # (N, 3)
    p_rx = element_positions(rx)  # (M, 3)
    diff = p_tx[None, :, :] - p_rx[:, None, :]  # rx -> tx, shape (M, N, 3)
    d = np.linalg.norm(diff, axis=-1)
    if np.any(d == 0.0):
        raise ValueError("overlapping arrays: coincident elements")

    u = diff / d[..., None]  # unit vectors from rx elements toward tx elements
    cos_rx = np.clip(u @ rx.normal, 0.0, None)
    cos_tx = np.clip(-(u @ tx.normal), 0.0, None)
    beta = pl.beta(d_centers)
    amplitude = np.sqrt(np.pi**2 * cos_rx * cos_tx / beta)
    kappa = 2.0 * np.pi / wavelength
    return ChannelMatrix(amplitude * np.exp(-1j * kappa * d), wavelength)


_DUMP_MAGIC = b"RLCM"


def store_channel(h: ChannelMatrix, path) -> None:
    """Binary dump: magic, little-endian uint64 shape, float64 wavelength,
    then interleaved real/imag little-endian float64 entries, row-major."""
    m, n = h.shape
    with open(path, "wb") as f:
        f.write(_DUMP_MAGIC)
        f.write(struct.pack("<QQd", m, n, h.wavelength))
        f.write(np.ascontiguousarray(h.entries, dtype="<c16").tobytes())


def load_channel(path) -> ChannelMatrix:
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:4] != _DUMP_MAGIC:
        raise ValueError(f"{path}: not a channel dump")
    m, n, lam = struct.unpack_from("<QQd", blob, 4)
    data = np.frombuffer(blob, dtype="<c16", offset=4 + 24)
    if data.size != m * n:
        raise ValueError(f"{path}: truncated channel dump")
    return ChannelMatrix(data.reshape(m, n).astype(complex), lam)


def store_channel_json(h: ChannelMatrix, path) -> None:
    m, n = h.shape
    flat = np.ascontiguousarray(h.entries).ravel()
    payload = {
        "n_rows": int(m),
        "n_cols": int(n),
        "wavelength": h.wavelength,
        "data": [x for z in flat for x in (z.real, z.imag)],
    }
    with open(path, "w") as f:
        json.dump(payload, f)


def load_channel_json(path) -> ChannelMatrix:
    with open(path) as f:
        payload = json.load(f)
    m, n = int(payload["n_rows"]), int(payload["n_cols"])
    raw = np.asarray(payload["data"], dtype=float)
    if raw.size != 2 * m * n:
        raise ValueError(f"{path}: data length does not match shape")
    entries = (raw[0::2] + 1j * raw[1::2]).reshape(m, n)
    return ChannelMatrix(entries, float(payload["wavelength"]))
