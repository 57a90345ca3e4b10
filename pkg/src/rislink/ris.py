"""RIS phase configurations: phase-gradient codebooks, uniform phase
quantization, active-element masks, and codeword selection.

Conventions, frozen for reproducibility:
  - quantization levels are anchored at 0, i.e. {2*pi*k / 2^B};
  - nearest level under circular distance, ties broken toward the lower level;
  - active masks are centered square blocks (row-major flattening);
  - ties in codeword selection go to the lowest index.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelMatrix
from .geometry import PlanarArray, element_positions, unit

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class RisConfiguration:
    """Per-element phase shifts in [0, 2*pi), an active mask, and the
    quantization precision applied (None = continuous)."""

    phases: np.ndarray
    active_mask: np.ndarray
    quantization_bits: int | None = None

    def __post_init__(self):
        phases = np.mod(np.asarray(self.phases, dtype=float), TWO_PI)
        mask = np.asarray(self.active_mask, dtype=bool)
        if phases.ndim != 1 or mask.shape != phases.shape:
            raise ValueError("phases and active_mask must be 1D with equal length")
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        if self.quantization_bits is not None and self.quantization_bits < 1:
            raise ValueError("quantization_bits must be >= 1")
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "active_mask", mask)

    @property
    def num_elements(self) -> int:
        return self.phases.size

    def reflection_coefficients(self) -> np.ndarray:
        """Diagonal of the reflection matrix; inactive elements absorb (0)."""
        return np.where(self.active_mask, np.exp(1j * self.phases), 0.0)


@dataclass(frozen=True)
class CodebookEntry:
    direction: np.ndarray
    configuration: RisConfiguration


@dataclass(frozen=True)
class Codebook:
    entries: list
    incident_direction: np.ndarray

    def __post_init__(self):
        if not self.entries:
            raise ValueError("codebook must be non-empty")
        object.__setattr__(self, "incident_direction", unit(self.incident_direction))

    def __len__(self) -> int:
        return len(self.entries)


def build_codebook(
    ris: PlanarArray,
    incident,
    grid: tuple[int, int],
    wavelength: float,
) -> Codebook:
    """Phase-gradient reflectarray codebook over a uniform azimuth x
    elevation grid of outgoing directions covering the RIS front half-space.

    `incident` is the unit direction from the RIS toward the source. The
    codeword for outgoing direction u phases element i (relative position
    p_i) as theta_i = mod(-kappa * p_i . (u_inc + u), 2*pi), steering the
    incident plane wave toward u.
    """
    n_az, n_el = grid
    if n_az < 1 or n_el < 1:
        raise ValueError("codebook grid dimensions must be >= 1")
    u_inc = unit(incident)
    if np.dot(u_inc, ris.normal) <= 0:
        raise ValueError("incident direction must be in the RIS front half-space")

    rel = element_positions(ris) - ris.center  # (N, 3)
    kappa = TWO_PI / wavelength
    mask = np.ones(ris.num_elements, dtype=bool)

    # Elevation measured from the normal, offset half a step to avoid
    # grazing directions; azimuth spans [0, 2*pi). Elevation-major order.
    entries = []
    for k in range(n_el):
        el = (k + 0.5) * (np.pi / 2.0) / n_el
        for j in range(n_az):
            az = TWO_PI * j / n_az
            u = (
                np.sin(el) * (np.cos(az) * ris.axis_row + np.sin(az) * ris.axis_col)
                + np.cos(el) * ris.normal
            )
            phases = np.mod(-kappa * (rel @ (u_inc + u)), TWO_PI)
            entries.append(CodebookEntry(u, RisConfiguration(phases, mask)))
    return Codebook(entries, u_inc)


def quantize_phases(cfg: RisConfiguration, bits: int) -> RisConfiguration:
    """Map every active phase to the nearest of the 2^bits uniform levels
    under circular distance; ties go to the lower level. Inactive phases are
    left untouched."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    step = TWO_PI / (1 << bits)
    # ceil(x - 0.5) rounds to nearest with ties toward the lower level
    k = np.mod(np.ceil(cfg.phases / step - 0.5), 1 << bits)
    quantized = np.where(cfg.active_mask, k * step, cfg.phases)
    return replace(cfg, phases=quantized, quantization_bits=bits)


def active_mask(ris: PlanarArray, ratio: float) -> np.ndarray:
    """Centered square block of active elements covering approximately
    `ratio` of the surface; row-major flattened boolean mask."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must be in (0, 1]")
    side = int(np.floor(np.sqrt(ratio * ris.rows * ris.cols) + 0.5))
    if side == 0:
        raise ValueError("ratio too small for this array: zero active elements")
    s_r = min(side, ris.rows)
    s_c = min(side, ris.cols)
    r0 = (ris.rows - s_r) // 2
    c0 = (ris.cols - s_c) // 2
    mask = np.zeros((ris.rows, ris.cols), dtype=bool)
    mask[r0 : r0 + s_r, c0 : c0 + s_c] = True
    return mask.ravel()


def random_mask(ris: PlanarArray, ratio: float, seed: int) -> np.ndarray:
    """Seeded uniform-random mask; sensitivity-study alternative to the
    centered-block default."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must be in (0, 1]")
    count = int(np.floor(ratio * ris.num_elements + 0.5))
    if count == 0:
        raise ValueError("ratio too small for this array: zero active elements")
    rng = np.random.default_rng(seed)
    idx = rng.choice(ris.num_elements, size=count, replace=False)
    mask = np.zeros(ris.num_elements, dtype=bool)
    mask[idx] = True
    return mask


def cascaded_coefficients(
    h_ris_tx: ChannelMatrix,
    h_rx_ris: ChannelMatrix,
    w_tx: np.ndarray,
    w_rx: np.ndarray,
) -> np.ndarray:
    """Per-RIS-element complex coefficient c_i such that the end-to-end gain
    for any configuration is sum_i mask_i * exp(1j*theta_i) * c_i."""
    return (np.conj(w_rx) @ h_rx_ris.entries) * (h_ris_tx.entries @ w_tx)


def conjugate_phases(
    h_ris_tx: ChannelMatrix,
    h_rx_ris: ChannelMatrix,
    w_tx: np.ndarray,
    w_rx: np.ndarray,
    mask: np.ndarray,
) -> RisConfiguration:
    """Continuous-phase upper bound: cancels the cascaded channel phase per
    active element, so the aligned gain equals sum_i |c_i| over the mask.
    Elements with zero cascaded coefficient get phase 0 by convention."""
    c = cascaded_coefficients(h_ris_tx, h_rx_ris, w_tx, w_rx)
    phases = np.where(np.abs(c) > 0.0, np.mod(-np.angle(c), TWO_PI), 0.0)
    return RisConfiguration(phases, np.asarray(mask, dtype=bool))


def select_codeword(
    cb: Codebook,
    h_ris_tx: ChannelMatrix,
    h_rx_ris: ChannelMatrix,
    budget,
    mask: np.ndarray,
    bits: int | None = None,
) -> tuple[int, RisConfiguration, float]:
    """Evaluate every codeword (masked, quantized when `bits` is given) and
    return (index, applied configuration, linear SNR) of the best one.
    Ties go to the lowest index."""
    from .link import snr_linear  # local import to avoid a cycle

    c = cascaded_coefficients(h_ris_tx, h_rx_ris, budget.w_tx, budget.w_rx)
    mask = np.asarray(mask, dtype=bool)
    best_idx, best_cfg, best_snr = 0, None, -1.0
    for idx, entry in enumerate(cb.entries):
        cfg = replace(entry.configuration, active_mask=mask)
        if bits is not None:
            cfg = quantize_phases(cfg, bits)
        gain = np.sum(cfg.reflection_coefficients() * c)
        value = snr_linear(gain, budget)
        if value > best_snr:
            best_idx, best_cfg, best_snr = idx, cfg, value
    return best_idx, best_cfg, best_snr


def store_codebook(cb: Codebook, path) -> None:
    payload = {
        "incident_direction": cb.incident_direction.tolist(),
        "entries": [
            {
                "direction": e.direction.tolist(),
                "phases": e.configuration.phases.tolist(),
            }
            for e in cb.entries
        ],
    }
    with open(path, "w") as f:
        json.dump(payload, f)


def load_codebook(path) -> Codebook:
    with open(path) as f:
        payload = json.load(f)
    entries = []
    for e in payload["entries"]:
        phases = np.asarray(e["phases"], dtype=float)
        mask = np.ones(phases.size, dtype=bool)
        entries.append(
            CodebookEntry(np.asarray(e["direction"], float), RisConfiguration(phases, mask))
        )
    return Codebook(entries, np.asarray(payload["incident_direction"], float))
