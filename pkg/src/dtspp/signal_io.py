"""WAV ingestion/emission and SNR-controlled noisy-mixture synthesis."""

from __future__ import annotations

import wave
from dataclasses import dataclass

import numpy as np
from scipy.signal import firwin

from .errors import DegenerateInputError, FormatError

PIPELINE_RATE_HZ = 8000

# Anti-alias FIR for the only supported resampling (16 kHz -> 8 kHz):
# half-band cutoff with a Kaiser window sized for >= 60 dB stopband.
_DECIMATION_TAPS = 127
_DECIMATION_BETA = 6.5


@dataclass
class MonoSignal:
    """Single-channel waveform, nominal amplitude range [-1, 1]."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)

    @property
    def duration_s(self):
        return len(self.samples) / self.sample_rate_hz

    def rms(self):
        if len(self.samples) == 0:
            return 0.0
        return float(np.sqrt(np.mean(self.samples ** 2)))


def _halfband_lowpass():
    return firwin(_DECIMATION_TAPS, 0.5, window=("kaiser", _DECIMATION_BETA))


def read_wav(path):
    """Read a PCM WAV as a MonoSignal at 8 kHz.

    Accepts 16-bit PCM at 8 or 16 kHz, mono or multichannel (first channel
    taken).  16 kHz input is lowpass filtered and decimated by 2.
    """
    try:
        with wave.open(str(path), "rb") as w:
            nch = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            comp = w.getcomptype()
            nframes = w.getnframes()
            raw = w.readframes(nframes)
    except (wave.Error, EOFError) as exc:
        raise FormatError(f"{path}: not a readable PCM WAV ({exc})") from exc
    if comp != "NONE":
        raise FormatError(f"{path}: compressed WAV ({comp}) unsupported, need PCM")
    if width != 2:
        raise FormatError(f"{path}: sample width {8 * width} bit unsupported, need 16-bit PCM")
    if rate not in (8000, 16000):
        raise FormatError(f"{path}: sample rate {rate} Hz unsupported, need 8000 or 16000")
    data = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    if nch > 1:
        data = data[::nch]
    if rate == 16000:
        taps = _halfband_lowpass()
        delay = (len(taps) - 1) // 2
        smoothed = np.convolve(data, taps)[delay:delay + len(data)]
        data = smoothed[::2]
    return MonoSignal(data, PIPELINE_RATE_HZ)


def write_wav(signal, path):
    """Write a MonoSignal as 16-bit PCM mono WAV, clipping to [-1, 1]."""
    x = np.asarray(signal.samples, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise DegenerateInputError("cannot write non-finite samples")
    q = np.clip(np.round(x * 32768.0), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(signal.sample_rate_hz)
        w.writeframes(q.tobytes())


def mix_at_snr(clean, noise, snr_db):
    """Return clean + g*noise with the gain set so the mixture SNR is snr_db.

    SNR is defined on full-utterance RMS.  Noise shorter than the clean
    signal is tiled (no crossfade), longer noise is truncated.
    """
    if clean.sample_rate_hz != PIPELINE_RATE_HZ or noise.sample_rate_hz != PIPELINE_RATE_HZ:
        raise DegenerateInputError("mix_at_snr requires both signals at 8 kHz")
    c = clean.samples
    n = noise.samples
    if len(c) == 0:
        raise DegenerateInputError("clean signal is empty")
    if len(n) == 0:
        raise DegenerateInputError("noise signal is empty")
    if len(n) < len(c):
        reps = int(np.ceil(len(c) / len(n)))
        n = np.tile(n, reps)
    n = n[:len(c)]
    rms_c = np.sqrt(np.mean(c ** 2))
    rms_n = np.sqrt(np.mean(n ** 2))
    if rms_c == 0.0:
        raise DegenerateInputError("clean signal has zero RMS")
    if rms_n == 0.0:
        raise DegenerateInputError("noise signal has zero RMS")
    gain = rms_c / (rms_n * 10.0 ** (snr_db / 20.0))
    return MonoSignal(c + gain * n, PIPELINE_RATE_HZ)
