"""
RIFF/WAVE 코덱 (PCM 16-bit, IEEE float 32-bit)
"""

import struct
from typing import Tuple

import numpy as np

from .errors import TruncatedDataError, UnsupportedCodecError, WavHeaderError


WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE

MIN_SAMPLE_RATE_HZ = 8000
PCM16_SCALE = 32768.0


def decode_wav(blob: bytes) -> Tuple[np.ndarray, int]:
    """
    WAV 바이트열을 모노 float64 샘플로 디코딩

    Args:
        blob: WAV 파일 전체 바이트

    Returns:
        (samples, sample_rate_hz). 다채널은 평균으로 모노 변환
    """
    if len(blob) < 12:
        raise WavHeaderError(f"RIFF 헤더가 너무 짧습니다 ({len(blob)} bytes)")
    riff_id, _riff_size, wave_id = struct.unpack("<4sI4s", blob[:12])
    if riff_id != b"RIFF" or wave_id != b"WAVE":
        raise WavHeaderError(f"RIFF/WAVE 시그니처가 아닙니다: {riff_id!r}/{wave_id!r}")

    fmt = None
    data = None
    offset = 12
    while offset + 8 <= len(blob):
        chunk_id, chunk_size = struct.unpack("<4sI", blob[offset:offset + 8])
        body_start = offset + 8
        body_end = body_start + chunk_size

        if chunk_id == b"fmt ":
            if chunk_size < 16 or body_end > len(blob):
                raise WavHeaderError(f"fmt 청크 크기 오류: {chunk_size}")
            fmt = _parse_fmt(blob[body_start:body_end])
        elif chunk_id == b"data":
            if fmt is None:
                raise WavHeaderError("fmt 청크보다 data 청크가 먼저 나옵니다")
            if body_end > len(blob):
                raise TruncatedDataError(
                    f"data 청크가 잘렸습니다: 선언 {chunk_size} bytes, 실제 {len(blob) - body_start} bytes"
                )
            data = blob[body_start:body_end]
            break

        # 청크는 2바이트 정렬
        offset = body_end + (chunk_size & 1)

    if fmt is None:
        raise WavHeaderError("fmt 청크가 없습니다")
    if data is None:
        raise WavHeaderError("data 청크가 없습니다")

    codec, n_channels, sample_rate, bits = fmt
    block_align = n_channels * bits // 8
    if len(data) % block_align != 0:
        raise TruncatedDataError(
            f"data 청크 크기({len(data)})가 블록 크기({block_align})의 배수가 아닙니다"
        )
    if len(data) == 0:
        raise TruncatedDataError("data 청크에 샘플이 없습니다")

    if codec == WAVE_FORMAT_PCM:
        frames = np.frombuffer(data, dtype="<i2").astype(np.float64) / PCM16_SCALE
    else:
        frames = np.frombuffer(data, dtype="<f4").astype(np.float64)
        if not np.all(np.isfinite(frames)):
            raise UnsupportedCodecError("float 샘플에 유한하지 않은 값이 있습니다")
        frames = np.clip(frames, -1.0, 1.0)

    frames = frames.reshape(-1, n_channels)
    samples = frames.mean(axis=1) if n_channels > 1 else frames[:, 0].copy()
    return samples, sample_rate


def _parse_fmt(body: bytes) -> Tuple[int, int, int, int]:
    """fmt 청크 파싱 → (codec, channels, sample_rate, bits)"""
    codec, n_channels, sample_rate, _byte_rate, _block_align, bits = struct.unpack(
        "<HHIIHH", body[:16]
    )
    if codec == WAVE_FORMAT_EXTENSIBLE:
        if len(body) < 26:
            raise WavHeaderError("WAVE_FORMAT_EXTENSIBLE fmt 청크가 너무 짧습니다")
        # SubFormat GUID 앞 2바이트가 실제 코덱 태그
        codec = struct.unpack("<H", body[24:26])[0]

    if n_channels < 1:
        raise WavHeaderError(f"채널 수 오류: {n_channels}")
    if codec == WAVE_FORMAT_PCM and bits != 16:
        raise UnsupportedCodecError(f"PCM 은 16-bit 만 지원합니다 (bits={bits})")
    if codec == WAVE_FORMAT_IEEE_FLOAT and bits != 32:
        raise UnsupportedCodecError(f"IEEE float 는 32-bit 만 지원합니다 (bits={bits})")
    if codec not in (WAVE_FORMAT_PCM, WAVE_FORMAT_IEEE_FLOAT):
        raise UnsupportedCodecError(f"지원하지 않는 코덱 태그: 0x{codec:04X}")
    if sample_rate < MIN_SAMPLE_RATE_HZ:
        raise UnsupportedCodecError(f"샘플링 레이트가 너무 낮습니다: {sample_rate} Hz")
    return codec, n_channels, sample_rate, bits


def quantize_pcm16(samples: np.ndarray) -> np.ndarray:
    """[-1, 1] 실수 샘플을 int16 으로 양자화"""
    scaled = np.round(np.asarray(samples, dtype=np.float64) * PCM16_SCALE)
    return np.clip(scaled, -32768, 32767).astype("<i2")


def encode_wav(samples: np.ndarray, sample_rate_hz: int, codec: str = "pcm16") -> bytes:
    """
    모노/다채널 샘플을 WAV 바이트열로 인코딩

    Args:
        samples: (n,) 또는 (n, channels) 배열
        sample_rate_hz: 샘플링 레이트
        codec: "pcm16" 또는 "float32"

    Returns:
        WAV 바이트
    """
    frames = np.asarray(samples, dtype=np.float64)
    if frames.ndim == 1:
        frames = frames[:, None]
    n_channels = frames.shape[1]

    if codec == "pcm16":
        tag, bits = WAVE_FORMAT_PCM, 16
        payload = quantize_pcm16(frames).tobytes()
    elif codec == "float32":
        tag, bits = WAVE_FORMAT_IEEE_FLOAT, 32
        payload = frames.astype("<f4").tobytes()
    else:
        raise UnsupportedCodecError(f"지원하지 않는 출력 코덱: {codec}")

    block_align = n_channels * bits // 8
    fmt_body = struct.pack(
        "<HHIIHH", tag, n_channels, sample_rate_hz, sample_rate_hz * block_align, block_align, bits
    )
    chunks = b"fmt " + struct.pack("<I", len(fmt_body)) + fmt_body
    chunks += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        chunks += b"\x00"
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks
