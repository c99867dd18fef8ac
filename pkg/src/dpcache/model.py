"""Core data types: parameters, file libraries, caches and broadcasts.

Every b-bit block (a subfile, a cached piece, an XOR payload symbol) is a
Python int in ``[0, 2**b)``. Pseudorandom sampling uses the stdlib
``random.Random`` (MT19937) seeded with an int, whose ``getrandbits`` and
``randrange`` streams are fixed across platforms.

Library wire format: all ``N * P`` blocks concatenated MSB-first, file-major
then subfile-colex order, zero-padded at the end to a whole byte.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .combinatorics import binomial

DEFAULT_ENUM_BUDGET = 24
BUDGET_ENV_VAR = "DPCACHE_ENUM_BUDGET"


class BudgetExceeded(ValueError):
    """Exhaustive enumeration would exceed the configured bit budget."""


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV_VAR)
    return int(value) if value else DEFAULT_ENUM_BUDGET


@dataclass(frozen=True)
class SchemeParams:
    """(N files, K users, t = K*M) plus the subfile width b in bits."""

    n_files: int
    n_users: int
    cache_index: int
    subfile_bits: int = 1

    def __post_init__(self):
        for name in ("n_files", "n_users", "subfile_bits"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not 0 <= self.cache_index <= self.n_virtual:
            raise ValueError(
                f"cache index t={self.cache_index} outside [0, N*K={self.n_virtual}]"
            )

    @property
    def n_virtual(self) -> int:
        return self.n_files * self.n_users

    @property
    def subpacketization(self) -> int:
        return binomial(self.n_virtual, self.cache_index)

    @property
    def file_bits(self) -> int:
        return self.subpacketization * self.subfile_bits

    @property
    def memory(self) -> Fraction:
        return Fraction(self.cache_index, self.n_users)

    @property
    def cache_subfiles(self) -> int:
        if self.cache_index == 0:
            return 0
        return self.n_files * binomial(self.n_virtual - 1, self.cache_index - 1)

    @property
    def cache_bits(self) -> int:
        return self.cache_subfiles * self.subfile_bits

    @property
    def library_bits(self) -> int:
        return self.n_files * self.file_bits


def validate_params(n_files: int, n_users: int, cache_index: int, subfile_bits: int = 1) -> SchemeParams:
    return SchemeParams(n_files, n_users, cache_index, subfile_bits)


def check_vector(values: Sequence[int], length: int, n: int, what: str = "vector") -> tuple[int, ...]:
    """Validate a demand or key vector: ``length`` entries, each in [1, n]."""
    values = tuple(values)
    if len(values) != length:
        raise ValueError(f"{what} must have {length} entries, got {len(values)}")
    for v in values:
        if not 1 <= v <= n:
            raise ValueError(f"{what} entry {v} outside [1, {n}]")
    return values


@dataclass(frozen=True)
class FileLibrary:
    """N files, each split into C(universe, t) subfiles of ``subfile_bits`` bits.

    ``files[i][r]`` is the subfile of file i+1 indexed by the t-subset of
    colex rank r over the (virtual) user universe.
    """

    n_files: int
    universe: int
    cardinality: int
    subfile_bits: int
    files: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n_sub = binomial(self.universe, self.cardinality)
        if len(self.files) != self.n_files:
            raise ValueError(f"expected {self.n_files} files, got {len(self.files)}")
        limit = 1 << self.subfile_bits
        for f in self.files:
            if len(f) != n_sub:
                raise ValueError(f"expected {n_sub} subfiles per file, got {len(f)}")
            if any(not 0 <= block < limit for block in f):
                raise ValueError(f"subfile does not fit in {self.subfile_bits} bits")

    @property
    def n_subfiles(self) -> int:
        return binomial(self.universe, self.cardinality)

    @property
    def total_bits(self) -> int:
        return self.n_files * self.n_subfiles * self.subfile_bits

    def file(self, i: int) -> tuple[int, ...]:
        """File i (1-based)."""
        return self.files[i - 1]

    def to_int(self) -> int:
        value = 0
        b = self.subfile_bits
        for f in self.files:
            for block in f:
                value = (value << b) | block
        return value

    def to_bytes(self) -> bytes:
        nbits = self.total_bits
        nbytes = (nbits + 7) // 8
        return (self.to_int() << (8 * nbytes - nbits)).to_bytes(nbytes, "big")

    @classmethod
    def from_int(cls, value: int, n_files: int, universe: int, cardinality: int, subfile_bits: int) -> "FileLibrary":
        n_sub = binomial(universe, cardinality)
        mask = (1 << subfile_bits) - 1
        total = n_files * n_sub
        blocks = [(value >> (subfile_bits * (total - 1 - j))) & mask for j in range(total)]
        files = tuple(tuple(blocks[i * n_sub:(i + 1) * n_sub]) for i in range(n_files))
        return cls(n_files, universe, cardinality, subfile_bits, files)

    @classmethod
    def from_bytes(cls, data: bytes, n_files: int, universe: int, cardinality: int, subfile_bits: int) -> "FileLibrary":
        nbits = n_files * binomial(universe, cardinality) * subfile_bits
        nbytes = (nbits + 7) // 8
        if len(data) != nbytes:
            raise ValueError(f"expected {nbytes} bytes, got {len(data)}")
        return cls.from_int(int.from_bytes(data, "big") >> (8 * nbytes - nbits),
                            n_files, universe, cardinality, subfile_bits)

    @classmethod
    def for_params(cls, params: SchemeParams, files) -> "FileLibrary":
        return cls(params.n_files, params.n_virtual, params.cache_index, params.subfile_bits,
                   tuple(tuple(f) for f in files))


def sample_library(params: SchemeParams, seed: int) -> FileLibrary:
    rng = random.Random(seed)
    b = params.subfile_bits
    files = [[rng.getrandbits(b) for _ in range(params.subpacketization)]
             for _ in range(params.n_files)]
    return FileLibrary.for_params(params, files)


def enumerate_worlds(params: SchemeParams, budget: int | None = None) -> Iterator[FileLibrary]:
    """Yield every possible library exactly once (2**(N*P*b) of them)."""
    budget = default_budget() if budget is None else budget
    nbits = params.library_bits
    if nbits > budget:
        raise BudgetExceeded(f"{nbits} library bits exceed the enumeration budget of {budget}")
    args = (params.n_files, params.n_virtual, params.cache_index, params.subfile_bits)
    for value in range(1 << nbits):
        yield FileLibrary.from_int(value, *args)


@dataclass(frozen=True)
class CacheContent:
    """What one user stores: its key plus cached (file, subfile rank) blocks.

    ``key`` is None for the caches of the building-block scheme, which carry
    no shared randomness.
    """

    owner: int
    key: int | None
    store: tuple[tuple[tuple[int, int], int], ...]
    subfile_bits: int = 1

    @property
    def bits(self) -> int:
        return len(self.store) * self.subfile_bits

    def keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(k for k, _ in self.store)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.store)

    def digest(self) -> tuple:
        return (self.key, self.store)


def header_field_bits(n: int) -> int:
    """Bits per header value when values live in [0, n-1]."""
    return (n - 1).bit_length()


def encode_header(values: Sequence[int], n: int) -> int:
    """Pack header values user-major, ceil(log2 n) bits each."""
    w = header_field_bits(n)
    out = 0
    for v in values:
        if not 0 <= v < n:
            raise ValueError(f"header value {v} outside [0, {n - 1}]")
        out = (out << w) | v
    return out


def decode_header(word: int, count: int, n: int) -> tuple[int, ...]:
    w = header_field_bits(n)
    mask = (1 << w) - 1
    return tuple((word >> (w * (count - 1 - i))) & mask for i in range(count))


@dataclass(frozen=True)
class BroadcastMessage:
    """Header (sent in the clear) and ordered payload blocks.

    ``labels`` names what each payload block is the XOR of. It is derivable
    from the header, so it is not part of what a user observes beyond it.
    """

    header: tuple[int, ...]
    payload: tuple[int, ...]
    labels: tuple = field(default=(), compare=False)

    def payload_bits(self, subfile_bits: int) -> int:
        return len(self.payload) * subfile_bits

    def digest(self) -> tuple:
        return (self.header, self.payload)
