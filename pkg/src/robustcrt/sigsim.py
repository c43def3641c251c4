"""Two-tone waveform synthesis, undersampling, and DFT residue extraction.

One second of signal sampled at rate M*m_k yields exactly M*m_k samples, so
DFT bins sit on integer frequencies and an integer tone at f lands exactly on
bin f mod rate.  No windowing or zero padding is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gcrt2 import ResidueFamily
from .modmath import ModulusSet

__all__ = ["ToneSpec", "DetectionResult", "synthesize_samples", "detect_residues", "extract_family"]


@dataclass(frozen=True)
class ToneSpec:
    """Two integer-frequency complex tones observed for one second.

    `snr_db` of None disables noise; otherwise the complex white Gaussian
    noise has per-sample variance 10**(-snr_db/10), split evenly between the
    real and imaginary parts.
    """

    f1: int
    f2: int
    amplitude1: complex = 1.0
    amplitude2: complex = 1.0
    snr_db: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.f1 < 0 or self.f2 < 0:
            raise ValueError("frequencies must be nonnegative integers")
        if self.f1 == self.f2:
            raise ValueError("the two tone frequencies must differ")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def synthesize_samples(
    spec: ToneSpec, rate: int, rng: np.random.Generator | None = None
) -> np.ndarray:
    """One second of the two-tone signal sampled at `rate` Hz.

    Deterministic: without an explicit generator the noise stream is seeded
    from `spec.seed`.
    """
    if rate <= 0:
        raise ValueError("rate must be a positive integer")
    n = np.arange(rate)
    x = spec.amplitude1 * np.exp(2j * np.pi * spec.f1 * n / rate)
    x = x + spec.amplitude2 * np.exp(2j * np.pi * spec.f2 * n / rate)
    if spec.snr_db is not None:
        if rng is None:
            rng = np.random.default_rng(spec.seed)
        sigma = math.sqrt(10.0 ** (-spec.snr_db / 10.0) / 2.0)
        x = x + sigma * (rng.standard_normal(rate) + 1j * rng.standard_normal(rate))
    return x


@dataclass(frozen=True)
class DetectionResult:
    """Residue pair read off the two dominant DFT bins, with magnitudes."""

    bins: tuple[int, int]
    magnitudes: tuple[float, float]


def detect_residues(
    samples: np.ndarray, rate: int, detect_collision: bool = False
) -> DetectionResult:
    """Residue pair from the two largest-magnitude DFT bins, bins ascending.

    With `detect_collision`, a single line whose magnitude exceeds twice the
    runner-up is reported as a repeated pair (two tones sharing one bin).
    """
    if len(samples) != rate:
        raise ValueError("sample count must equal the rate (1 s observation)")
    magnitudes = np.abs(np.fft.fft(samples))
    top = int(np.argmax(magnitudes))
    remaining = magnitudes.copy()
    remaining[top] = -np.inf
    second = int(np.argmax(remaining))
    if detect_collision and magnitudes[top] > 2.0 * magnitudes[second]:
        peak = float(magnitudes[top])
        return DetectionResult((top, top), (peak, peak))
    found = sorted(
        ((top, float(magnitudes[top])), (second, float(magnitudes[second])))
    )
    return DetectionResult(
        (found[0][0], found[1][0]), (found[0][1], found[1][1])
    )


def extract_family(
    spec: ToneSpec, ms: ModulusSet, detect_collision: bool = True
) -> ResidueFamily:
    """Synthesize, undersample, and detect the residue pair at every modulus.

    Each modulus gets its own noise substream derived from (seed, k), so the
    whole family is reproducible from the spec alone.
    """
    pairs = []
    for k, rate in enumerate(ms.moduli):
        rng = None
        if spec.snr_db is not None:
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=spec.seed, spawn_key=(k,))
            )
        samples = synthesize_samples(spec, rate, rng)
        detection = detect_residues(samples, rate, detect_collision=detect_collision)
        pairs.append(detection.bins)
    return ResidueFamily(ms, tuple(pairs))
