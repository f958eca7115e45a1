"""Shared helpers: WAV writers independent of the package's reader."""

import struct
import wave

import numpy as np
import pytest


def write_pcm_wav(path, frames, sampwidth, rate=16000, channels=1):
    """Write integer PCM frames with the stdlib wave module.

    frames is a list of ints (mono) or tuples (one int per channel).
    8-bit samples are unsigned 0..255, wider ones signed little-endian.
    """
    packed = bytearray()
    for frame in frames:
        if isinstance(frame, int):
            frame = (frame,)
        for value in frame:
            if sampwidth == 1:
                packed += struct.pack("<B", value)
            elif sampwidth == 2:
                packed += struct.pack("<h", value)
            elif sampwidth == 3:
                packed += int(value).to_bytes(3, "little", signed=True)
            elif sampwidth == 4:
                packed += struct.pack("<i", value)
            else:
                raise ValueError(sampwidth)
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(channels)
        fh.setsampwidth(sampwidth)
        fh.setframerate(rate)
        fh.writeframes(bytes(packed))


def write_float32_wav(path, samples, rate=16000, channels=1):
    """Handcraft an IEEE-float (format 3) RIFF/WAVE file."""
    data = np.asarray(samples, dtype="<f4").reshape(-1).tobytes()
    block = 4 * channels
    header = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    header += struct.pack("<4sIHHIIHH", b"fmt ", 16, 3, channels, rate, rate * block, block, 32)
    header += b"data" + struct.pack("<I", len(data))
    with open(path, "wb") as fh:
        fh.write(header + data)


def write_mulaw_wav(path, rate=8000):
    """An unsupported (mu-law, format 7) file for error-path tests."""
    data = b"\x00\x01\x02\x03"
    header = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    header += struct.pack("<4sIHHIIHH", b"fmt ", 16, 7, 1, rate, rate, 1, 8)
    header += b"data" + struct.pack("<I", len(data))
    with open(path, "wb") as fh:
        fh.write(header + data)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))
