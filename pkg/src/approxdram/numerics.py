"""Typed tensors, symmetric linear quantization, and a bit-exact codec.

Tensors carry either fp32 payloads or integer codes produced by symmetric
linear quantization into [-2^(b-1), 2^(b-1)-1].  Bit images are the flat
little-endian-per-element bit arrays that flips act on: integers as two's
complement, fp32 as IEEE-754, int4 packed one per nibble with no padding.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Dtype", "INT4", "INT8", "INT16", "FP32", "DTYPES",
    "Tensor", "BitImage",
    "quantize", "dequantize", "encode_bits", "decode_bits",
    "tensor_to_bytes", "tensor_from_bytes", "save_tensor", "load_tensor",
]


@dataclass(frozen=True)
class Dtype:
    kind: str
    bits: int

    def __post_init__(self):
        expected = {"int4": 4, "int8": 8, "int16": 16, "fp32": 32}
        if self.kind not in expected:
            raise ValueError(f"unknown dtype kind {self.kind!r}")
        if self.bits != expected[self.kind]:
            raise ValueError(f"{self.kind} must have {expected[self.kind]} bits, got {self.bits}")

    @property
    def is_integer(self) -> bool:
        return self.kind != "fp32"

    @property
    def code_min(self) -> int:
        return -(1 << (self.bits - 1))

    @property
    def code_max(self) -> int:
        return (1 << (self.bits - 1)) - 1

    def __str__(self) -> str:
        return self.kind


INT4 = Dtype("int4", 4)
INT8 = Dtype("int8", 8)
INT16 = Dtype("int16", 16)
FP32 = Dtype("fp32", 32)
DTYPES = {"int4": INT4, "int8": INT8, "int16": INT16, "fp32": FP32}

# on-disk dtype codes, fixed by the tensor file format
_DTYPE_CODE = {"int4": 0, "int8": 1, "int16": 2, "fp32": 3}
_CODE_DTYPE = {v: DTYPES[k] for k, v in _DTYPE_CODE.items()}

_MAGIC = b"EDNT"
_VERSION = 1


@dataclass
class Tensor:
    """A shaped numeric array plus its quantization scale.

    Integer tensors hold int32 codes; fp32 tensors hold float32 values.
    Data is row-major; scale is 1.0 and unused for fp32.
    """

    dtype: Dtype
    shape: tuple
    data: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        self.shape = tuple(int(d) for d in self.shape)
        if any(d <= 0 for d in self.shape):
            raise ValueError(f"shape dims must be positive, got {self.shape}")
        want = np.float32 if not self.dtype.is_integer else np.int32
        self.data = np.ascontiguousarray(self.data, dtype=want).reshape(self.shape)
        if self.dtype.is_integer:
            lo, hi = self.dtype.code_min, self.dtype.code_max
            if self.data.size and (self.data.min() < lo or self.data.max() > hi):
                raise ValueError(f"codes out of {self.dtype} range [{lo}, {hi}]")

    @property
    def size(self) -> int:
        return int(np.prod(self.shape)) if self.shape else 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Tensor)
            and self.dtype == other.dtype
            and self.shape == other.shape
            and self.scale == other.scale
            and np.array_equal(self.data, other.data)
        )


@dataclass
class BitImage:
    """Flat bit array: element_count elements of element_width bits each."""

    bits: np.ndarray
    element_width: int
    element_count: int

    def __post_init__(self):
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8).ravel()
        if self.bits.size != self.element_width * self.element_count:
            raise ValueError(
                f"bit image has {self.bits.size} bits, expected "
                f"{self.element_width} x {self.element_count}"
            )

    @property
    def nbits(self) -> int:
        return self.bits.size

    def copy(self) -> "BitImage":
        return BitImage(self.bits.copy(), self.element_width, self.element_count)


def quantize(t: Tensor, target: Dtype) -> Tensor:
    """Symmetric linear quantization of an fp32 tensor to integer codes.

    scale = max(|t|) / (2^(b-1) - 1), falling back to 1.0 for an all-zero
    tensor; codes are round-half-away-from-zero then clamped (saturation,
    never wraparound).
    """
    if not target.is_integer:
        raise ValueError("quantization target must be an integer dtype")
    if t.dtype.is_integer:
        raise ValueError("quantize expects an fp32 tensor")
    x = t.data.astype(np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot quantize non-finite values (NaN/Inf present)")
    peak = float(np.max(np.abs(x))) if x.size else 0.0
    scale = peak / target.code_max if peak > 0.0 else 1.0
    v = x / scale
    codes = np.sign(v) * np.floor(np.abs(v) + 0.5)
    codes = np.clip(codes, target.code_min, target.code_max).astype(np.int32)
    return Tensor(target, t.shape, codes, scale)


def dequantize(t: Tensor) -> Tensor:
    """Map integer codes back to fp32 values: element x scale."""
    if not t.dtype.is_integer:
        raise ValueError("dequantize expects an integer tensor")
    values = (t.data.astype(np.float64) * t.scale).astype(np.float32)
    return Tensor(FP32, t.shape, values, 1.0)


def encode_bits(t: Tensor) -> BitImage:
    """Serialize a tensor to its exact memory bit image.

    Bit 0 of an element is its least significant bit; elements are packed
    consecutively in row-major order.  Integers use two's complement, fp32
    the IEEE-754 single-precision pattern.
    """
    b = t.dtype.bits
    if t.dtype.is_integer:
        u = (t.data.ravel().astype(np.int64) & ((1 << b) - 1)).astype(np.uint32)
    else:
        u = t.data.ravel().view(np.uint32)
    shifts = np.arange(b, dtype=np.uint32)
    bits = ((u[:, None] >> shifts[None, :]) & np.uint32(1)).astype(np.uint8)
    return BitImage(bits.ravel(), b, u.size)


def decode_bits(img: BitImage, dtype: Dtype, shape) -> Tensor:
    """Exact inverse of encode_bits; carries no scale (caller restores it)."""
    b = dtype.bits
    if img.element_width != b:
        raise ValueError(f"element width {img.element_width} does not match {dtype}")
    count = int(np.prod([int(d) for d in shape]))
    if img.element_count != count:
        raise ValueError(f"bit image holds {img.element_count} elements, shape wants {count}")
    groups = img.bits.reshape(count, b).astype(np.uint64)
    weights = np.uint64(1) << np.arange(b, dtype=np.uint64)
    u = (groups * weights[None, :]).sum(axis=1)
    if dtype.is_integer:
        vals = u.astype(np.int64)
        vals[vals >= (1 << (b - 1))] -= 1 << b
        return Tensor(dtype, tuple(shape), vals.astype(np.int32))
    return Tensor(dtype, tuple(shape), u.astype(np.uint32).view(np.float32))


def tensor_to_bytes(t: Tensor) -> bytes:
    """Tensor file format v1: bit-exact across platforms."""
    img = encode_bits(t)
    header = _MAGIC + struct.pack(
        "<BBBQ", _VERSION, _DTYPE_CODE[t.dtype.kind], len(t.shape), t.size
    )
    dims = struct.pack(f"<{len(t.shape)}I", *t.shape)
    scale = struct.pack("<d", float(t.scale))
    payload = np.packbits(img.bits, bitorder="little").tobytes()
    return header + dims + scale + payload


def tensor_from_bytes(blob: bytes) -> Tensor:
    if blob[:4] != _MAGIC:
        raise ValueError("not a tensor file (bad magic)")
    version, dcode, rank, count = struct.unpack("<BBBQ", blob[4:15])
    if version != _VERSION:
        raise ValueError(f"unsupported tensor file version {version}")
    if dcode not in _CODE_DTYPE:
        raise ValueError(f"unknown dtype code {dcode}")
    dtype = _CODE_DTYPE[dcode]
    off = 15
    dims = struct.unpack(f"<{rank}I", blob[off : off + 4 * rank])
    off += 4 * rank
    (scale,) = struct.unpack("<d", blob[off : off + 8])
    off += 8
    if int(np.prod(dims)) != count:
        raise ValueError("dimension product does not match element count")
    nbits = count * dtype.bits
    packed = np.frombuffer(blob, dtype=np.uint8, offset=off, count=(nbits + 7) // 8)
    bits = np.unpackbits(packed, bitorder="little")[:nbits]
    t = decode_bits(BitImage(bits, dtype.bits, count), dtype, dims)
    t.scale = float(scale)
    return t


def save_tensor(t: Tensor, path) -> None:
    with open(path, "wb") as f:
        f.write(tensor_to_bytes(t))


def load_tensor(path) -> Tensor:
    with open(path, "rb") as f:
        return tensor_from_bytes(f.read())
