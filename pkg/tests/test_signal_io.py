import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurstlab.errors import DataError
from hurstlab.signal_io import SignalSeries, read_text, read_wav, write_text, write_wav

from conftest import write_float32_wav, write_mulaw_wav, write_pcm_wav


class TestSignalSeries:
    def test_rejects_empty(self):
        with pytest.raises(DataError, match="no samples"):
            SignalSeries(np.array([]))

    def test_rejects_non_finite(self):
        with pytest.raises(DataError, match="non-finite"):
            SignalSeries(np.array([0.0, np.nan, 1.0]))
        with pytest.raises(DataError, match="non-finite"):
            SignalSeries(np.array([np.inf]))

    def test_rejects_2d(self):
        with pytest.raises(DataError, match="one-dimensional"):
            SignalSeries(np.zeros((4, 2)))

    def test_rejects_negative_rate(self):
        with pytest.raises(DataError, match="sample_rate"):
            SignalSeries(np.array([1.0]), sample_rate=-1)


class TestReadWav:
    def test_16bit_normalization(self, tmp_path):
        path = tmp_path / "s16.wav"
        write_pcm_wav(path, [0, 16384, -16384], sampwidth=2)
        series = read_wav(path)
        assert series.samples.tolist() == [0.0, 0.5, -0.5]

    def test_rate_and_length(self, tmp_path):
        path = tmp_path / "rate.wav"
        write_pcm_wav(path, list(range(-50, 50)), sampwidth=2, rate=16000)
        series = read_wav(path)
        assert series.sample_rate == 16000
        assert len(series) == 100

    def test_stereo_averages_to_mono(self, tmp_path):
        path = tmp_path / "stereo.wav"
        write_float32_wav(path, [(0.2, 0.4)], channels=2)
        series = read_wav(path)
        assert len(series) == 1
        assert series.samples[0] == pytest.approx(0.3, abs=1e-6)

    def test_stereo_int_exact(self, tmp_path):
        path = tmp_path / "stereo16.wav"
        write_pcm_wav(path, [(16384, -16384), (8192, 8192)], sampwidth=2, channels=2)
        assert read_wav(path).samples.tolist() == [0.0, 0.25]

    def test_8bit_unsigned(self, tmp_path):
        path = tmp_path / "u8.wav"
        write_pcm_wav(path, [0, 128, 255], sampwidth=1)
        assert read_wav(path).samples.tolist() == [-1.0, 0.0, 127 / 128]

    def test_24bit(self, tmp_path):
        path = tmp_path / "s24.wav"
        write_pcm_wav(path, [-(2**23), 2**23 - 1, 0], sampwidth=3)
        series = read_wav(path)
        assert series.samples[0] == -1.0
        assert series.samples[1] == pytest.approx((2**23 - 1) / 2**23, abs=1e-12)
        assert series.samples[2] == 0.0

    def test_32bit(self, tmp_path):
        path = tmp_path / "s32.wav"
        write_pcm_wav(path, [-(2**31), 2**30], sampwidth=4)
        assert read_wav(path).samples.tolist() == [-1.0, 0.5]

    def test_float32_passthrough_and_clip(self, tmp_path):
        path = tmp_path / "f32.wav"
        write_float32_wav(path, [0.25, -0.5, 1.5])
        series = read_wav(path)
        assert series.samples[0] == pytest.approx(0.25, abs=1e-7)
        assert series.samples[1] == pytest.approx(-0.5, abs=1e-7)
        assert series.samples[2] == 1.0  # clipped into range

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_wav(tmp_path / "nope.wav")

    def test_unsupported_encoding(self, tmp_path):
        path = tmp_path / "mulaw.wav"
        write_mulaw_wav(path)
        with pytest.raises(DataError, match="unsupported wav encoding"):
            read_wav(path)

    def test_zero_length_data(self, tmp_path):
        path = tmp_path / "empty.wav"
        write_float32_wav(path, [])
        with pytest.raises(DataError, match="zero-length"):
            read_wav(path)

    def test_normalization_preserves_ordering(self, tmp_path, rng):
        raw = rng.integers(-32768, 32768, size=200).tolist()
        path = tmp_path / "ord.wav"
        write_pcm_wav(path, raw, sampwidth=2)
        normalized = read_wav(path).samples
        order_raw = np.argsort(np.asarray(raw), kind="stable")
        order_norm = np.argsort(normalized, kind="stable")
        assert np.array_equal(order_raw, order_norm)


class TestReadText:
    def test_basic(self, tmp_path):
        path = tmp_path / "a.txt"
        path.write_text("1.0\n-0.5\n0.25\n")
        series = read_text(path)
        assert series.samples.tolist() == [1.0, -0.5, 0.25]
        assert series.sample_rate == 0

    def test_blank_lines_ignored(self, tmp_path):
        with_blank = tmp_path / "b.txt"
        with_blank.write_text("1.0\n\n-0.5\n\n")
        without = tmp_path / "c.txt"
        without.write_text("1.0\n-0.5\n")
        assert read_text(with_blank).samples.tolist() == read_text(without).samples.tolist()

    def test_crlf(self, tmp_path):
        path = tmp_path / "crlf.txt"
        path.write_bytes(b"1.0\r\n2.0\r\n")
        assert read_text(path).samples.tolist() == [1.0, 2.0]

    def test_parse_error_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("abc\n")
        with pytest.raises(DataError, match="line 1"):
            read_text(path)
        path.write_text("0.5\n1.5\nxyz\n")
        with pytest.raises(DataError, match="line 3"):
            read_text(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "nan.txt"
        path.write_text("0.5\nnan\n")
        with pytest.raises(DataError, match="line 2"):
            read_text(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("")
        with pytest.raises(DataError, match="no amplitudes"):
            read_text(path)

    def test_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_text(tmp_path / "nope.txt")


class TestWriteText:
    def test_example_values(self, tmp_path):
        path = tmp_path / "out.txt"
        write_text(SignalSeries(np.array([0.0, 0.5])), path)
        assert read_text(path).samples.tolist() == [0.0, 0.5]

    def test_tiny_value_roundtrip(self, tmp_path):
        path = tmp_path / "tiny.txt"
        write_text(SignalSeries(np.array([1e-7])), path)
        assert read_text(path).samples.tolist() == [1e-7]

    def test_unwritable_path(self, tmp_path):
        series = SignalSeries(np.array([1.0]))
        with pytest.raises(OSError):
            write_text(series, tmp_path / "no" / "dir" / "out.txt")

    def test_lf_endings(self, tmp_path):
        path = tmp_path / "lf.txt"
        write_text(SignalSeries(np.array([1.0, 2.0])), path)
        assert b"\r" not in path.read_bytes()

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64),
                    min_size=1, max_size=30))
    def test_roundtrip_exact(self, tmp_path_factory, values):
        path = tmp_path_factory.mktemp("rt") / "v.txt"
        write_text(SignalSeries(np.asarray(values)), path)
        back = read_text(path).samples
        assert np.array_equal(back, np.asarray(values))


class TestWriteWav:
    def test_roundtrip_16bit(self, tmp_path):
        path = tmp_path / "rt.wav"
        series = SignalSeries(np.array([0.0, 0.5, -0.5, 1.0, -1.0]), sample_rate=8000)
        write_wav(series, path)
        back = read_wav(path)
        assert back.sample_rate == 8000
        assert np.allclose(back.samples, series.samples, atol=1.0 / 32767)

    def test_requires_rate(self):
        with pytest.raises(DataError, match="sample rate"):
            write_wav(SignalSeries(np.array([0.1])), "x.wav")
