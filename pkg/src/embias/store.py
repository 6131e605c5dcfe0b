"""Word-vector storage: streaming text parsers, a binary cache, and the
cosine/centroid primitives everything else is built on.

Vectors are stored as float32 rows of one contiguous matrix (halves memory
for multi-million-token models); every reduction that feeds a statistic is
carried out in float64. Stores are immutable after construction and safe to
share across threads.
"""
from __future__ import annotations

import io
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError, ResolutionError, UsageError

CACHE_MAGIC = b"EMB1"

_FALLBACK_FORMS = ("exact", "lowercase", "capitalized")


@dataclass(frozen=True)
class EmbeddingStats:
    """Bookkeeping from a parse or cache load."""

    vocab_size: int
    dimension: int
    bytes_resident: int
    zero_vectors_dropped: int = 0
    duplicate_tokens_dropped: int = 0


@dataclass(frozen=True)
class Lookup:
    """Outcome of a vocabulary lookup. A miss is a value, not an error."""

    token: str
    vector: np.ndarray | None
    matched: str | None
    tried: tuple[str, ...]

    @property
    def hit(self) -> bool:
        return self.vector is not None


class EmbeddingStore:
    """Immutable token -> vector table with a fixed dimension and cached norms.

    Construct via :func:`parse_embedding_text`, :func:`load_cache`, or
    :meth:`from_arrays`. All vectors share one dimension and have strictly
    positive Euclidean norm; zero-norm rows are rejected.
    """

    __slots__ = ("_index", "_tokens", "_matrix", "_norms", "provenance", "_stats")

    def __init__(
        self,
        tokens: Sequence[str],
        matrix: np.ndarray,
        provenance: str = "",
        zero_vectors_dropped: int = 0,
        duplicate_tokens_dropped: int = 0,
    ):
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        if matrix.ndim != 2:
            raise UsageError("matrix must be 2-dimensional (vocab x dimension)")
        if matrix.shape[0] != len(tokens):
            raise UsageError(
                f"{len(tokens)} tokens but {matrix.shape[0]} vector rows"
            )
        if matrix.shape[1] == 0:
            raise UsageError("dimension must be positive")
        if len(tokens) == 0:
            raise UsageError("store must contain at least one vector")
        index: dict[str, int] = {}
        for i, tok in enumerate(tokens):
            if tok in index:
                raise UsageError(f"duplicate token {tok!r}")
            index[tok] = i
        norms = np.linalg.norm(matrix.astype(np.float64), axis=1)
        if np.any(norms == 0.0):
            bad = [tokens[i] for i in np.nonzero(norms == 0.0)[0][:5]]
            raise UsageError(f"zero-norm vectors not allowed (e.g. {bad})")
        matrix.setflags(write=False)
        norms.setflags(write=False)
        self._index = index
        self._tokens = tuple(tokens)
        self._matrix = matrix
        self._norms = norms
        self.provenance = provenance
        token_bytes = sum(len(t.encode("utf-8")) for t in self._tokens)
        self._stats = EmbeddingStats(
            vocab_size=len(tokens),
            dimension=matrix.shape[1],
            bytes_resident=matrix.nbytes + norms.nbytes + token_bytes,
            zero_vectors_dropped=zero_vectors_dropped,
            duplicate_tokens_dropped=duplicate_tokens_dropped,
        )

    @classmethod
    def from_arrays(
        cls, tokens: Sequence[str], matrix: np.ndarray, provenance: str = ""
    ) -> "EmbeddingStore":
        return cls(tokens, matrix, provenance)

    @property
    def dimension(self) -> int:
        return self._matrix.shape[1]

    @property
    def stats(self) -> EmbeddingStats:
        return self._stats

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def tokens(self) -> Iterator[str]:
        """Tokens in insertion (file) order."""
        return iter(self._tokens)

    def vector(self, token: str) -> np.ndarray:
        """Read-only float32 view of the stored vector. KeyError on miss."""
        return self._matrix[self._index[token]]

    def get(self, token: str) -> np.ndarray | None:
        i = self._index.get(token)
        return None if i is None else self._matrix[i]

    def norm(self, token: str) -> float:
        return float(self._norms[self._index[token]])

    def lookup(
        self, token: str, fallback_chain: Sequence[str] = ("exact",)
    ) -> Lookup:
        """Try the token under each form of ``fallback_chain`` in order.

        Forms are drawn from {"exact", "lowercase", "capitalized"}. The
        result records every form that was tried, hit or miss.
        """
        tried: list[str] = []
        for form in fallback_chain:
            if form not in _FALLBACK_FORMS:
                raise UsageError(
                    f"unknown fallback {form!r}; valid: {_FALLBACK_FORMS}"
                )
            candidate = {
                "exact": token,
                "lowercase": token.lower(),
                "capitalized": token.capitalize(),
            }[form]
            tried.append(form)
            i = self._index.get(candidate)
            if i is not None:
                return Lookup(token, self._matrix[i], candidate, tuple(tried))
        return Lookup(token, None, None, tuple(tried))

    def vectors(self, tokens: Iterable[str]) -> np.ndarray:
        """Gather vectors for ``tokens`` as a float64 matrix.

        Raises ResolutionError listing every token not in the vocabulary.
        """
        tokens = list(tokens)
        missing = [t for t in tokens if t not in self._index]
        if missing:
            raise ResolutionError(f"tokens not in vocabulary: {missing}")
        rows = [self._index[t] for t in tokens]
        return self._matrix[rows].astype(np.float64)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity of two vectors, accumulated in float64."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise UsageError(f"dimension mismatch: {u.shape} vs {v.shape}")
    u64 = u.astype(np.float64, copy=False)
    v64 = v.astype(np.float64, copy=False)
    nu = np.linalg.norm(u64)
    nv = np.linalg.norm(v64)
    if nu == 0.0 or nv == 0.0:
        raise UsageError("cosine undefined for zero-norm vectors")
    return float(np.dot(u64, v64) / (nu * nv))


def centroid(store: EmbeddingStore, tokens: Iterable[str]) -> np.ndarray:
    """Component-wise mean (float64) of the resolved vectors."""
    tokens = list(tokens)
    if not tokens:
        raise UsageError("centroid of an empty token list")
    return store.vectors(tokens).mean(axis=0)


# ---------------------------------------------------------------------------
# Text parsing
# ---------------------------------------------------------------------------


class _RowBuffer:
    """Growable float32 row matrix with geometric reallocation."""

    def __init__(self, dimension: int, initial: int = 1024):
        self.dimension = dimension
        self._buf = np.empty((initial, dimension), dtype=np.float32)
        self.count = 0

    def append(self, row: np.ndarray) -> None:
        if self.count == self._buf.shape[0]:
            grown = np.empty(
                (max(1024, self._buf.shape[0] * 2), self.dimension), dtype=np.float32
            )
            grown[: self.count] = self._buf[: self.count]
            self._buf = grown
        self._buf[self.count] = row
        self.count += 1

    def replace(self, i: int, row: np.ndarray) -> None:
        self._buf[i] = row

    def freeze(self) -> np.ndarray:
        out = self._buf[: self.count]
        # Copy only when the capacity overshoot is worth reclaiming.
        if self._buf.shape[0] > self.count * 1.1 + 16:
            out = out.copy()
        self._buf = out
        return out


def _parse_record(line: bytes, lineno: int, dimension: int) -> tuple[str, np.ndarray]:
    parts = line.split(b" ")
    if len(parts) != dimension + 1:
        raise ParseError(
            f"line {lineno}: expected {dimension + 1} fields "
            f"(token + {dimension} components), found {len(parts)}"
        )
    try:
        row = np.array(parts[1:], dtype=np.float32)
    except ValueError:
        for j, fld in enumerate(parts[1:], start=1):
            try:
                float(fld.decode("utf-8", "replace"))
            except ValueError:
                raise ParseError(
                    f"line {lineno}: field {j + 1} is not numeric: "
                    f"{fld.decode('utf-8', 'replace')!r}"
                ) from None
        raise ParseError(f"line {lineno}: non-numeric component") from None
    if not np.isfinite(row).all():
        j = int(np.nonzero(~np.isfinite(row))[0][0]) + 1
        raise ParseError(f"line {lineno}: field {j + 1} is not finite")
    try:
        token = parts[0].decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError(f"line {lineno}: token is not valid UTF-8") from None
    return token, row


def parse_embedding_text(
    source,
    format: str = "glove",
    duplicate_policy: str = "first",
    max_vocab: int | None = None,
    provenance: str | None = None,
) -> tuple[EmbeddingStore, EmbeddingStats]:
    """Parse a text-format word-vector file in one streaming pass.

    ``format="glove"``: one record per line, single-space separated, token
    followed by d numeric components; d is fixed by the first record.
    ``format="word2vec-text"``: identical records preceded by a header line
    ``"vocab_count dimension"``.

    ``duplicate_policy`` is one of "first" (keep the first occurrence and
    count the drop, the default), "last" (overwrite in place), or "error".
    Zero-norm vectors are dropped and counted. Memory is proportional to the
    retained vectors only. Lines are handled as bytes internally; tokens are
    decoded as UTF-8.
    """
    if format not in ("glove", "word2vec-text"):
        raise UsageError(f"unknown format {format!r}")
    if duplicate_policy not in ("first", "last", "error"):
        raise UsageError(f"unknown duplicate_policy {duplicate_policy!r}")
    if max_vocab is not None and max_vocab < 1:
        raise UsageError("max_vocab must be positive")

    close_after = False
    if isinstance(source, (str, Path)):
        if provenance is None:
            provenance = str(source)
        fh = open(source, "rb")
        close_after = True
    elif isinstance(source, (bytes, bytearray)):
        fh = io.BytesIO(source)
    elif isinstance(source, io.TextIOBase):
        # Small in-memory streams only; real files should come in as paths.
        fh = io.BytesIO(source.read().encode("utf-8"))
    else:
        fh = source
    if provenance is None:
        provenance = str(getattr(fh, "name", "<stream>"))

    try:
        lines = iter(enumerate(fh, start=1))
        dimension: int | None = None
        if format == "word2vec-text":
            try:
                _, header = next(lines)
            except StopIteration:
                raise ParseError("empty stream") from None
            fields = header.rstrip(b"\r\n").split(b" ")
            if len(fields) != 2:
                raise ParseError(
                    "line 1: word2vec-text header must be 'vocab_count dimension'"
                )
            try:
                _declared, dimension = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError("line 1: non-integer header field") from None
            if dimension < 1:
                raise ParseError("line 1: header dimension must be positive")

        index: dict[str, int] = {}
        tokens: list[str] = []
        rows: _RowBuffer | None = None
        zero_dropped = 0
        dup_dropped = 0

        for lineno, raw in lines:
            line = raw.rstrip(b"\r\n")
            if not line:
                continue
            if dimension is None:
                # First glove record fixes the dimension.
                dimension = line.count(b" ")
                if dimension < 1:
                    raise ParseError(f"line {lineno}: record has no components")
            token, row = _parse_record(line, lineno, dimension)
            if not row.any():
                zero_dropped += 1
                continue
            if rows is None:
                rows = _RowBuffer(dimension)
            if token in index:
                if duplicate_policy == "error":
                    raise ParseError(f"line {lineno}: duplicate token {token!r}")
                dup_dropped += 1
                if duplicate_policy == "last":
                    rows.replace(index[token], row)
                continue
            index[token] = rows.count
            tokens.append(token)
            rows.append(row)
            if max_vocab is not None and rows.count >= max_vocab:
                break

        if rows is None or rows.count == 0:
            raise ParseError("empty stream (no well-formed records retained)")
        store = EmbeddingStore(
            tokens,
            rows.freeze(),
            provenance=provenance,
            zero_vectors_dropped=zero_dropped,
            duplicate_tokens_dropped=dup_dropped,
        )
        return store, store.stats
    finally:
        if close_after:
            fh.close()


# ---------------------------------------------------------------------------
# Binary cache ("EMB1")
# ---------------------------------------------------------------------------
#
# Layout, all little-endian:
#   magic "EMB1" (4 bytes)
#   dimension   u32
#   vocab count u64
#   per record: token byte-length u32, token bytes (UTF-8), d float32
#
# Components round-trip bit-identically; they are cached exactly as stored
# (as distributed in the source file, not renormalized).


def save_cache(store: EmbeddingStore, dest) -> None:
    """Serialize the store to the EMB1 binary format."""
    if len(store) == 0:
        raise UsageError("refusing to cache an empty store")
    close_after = False
    if isinstance(dest, (str, Path)):
        fh = open(dest, "wb")
        close_after = True
    else:
        fh = dest
    try:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<IQ", store.dimension, len(store)))
        for token in store.tokens():
            encoded = token.encode("utf-8")
            fh.write(struct.pack("<I", len(encoded)))
            fh.write(encoded)
            fh.write(store.vector(token).astype("<f4", copy=False).tobytes())
    finally:
        if close_after:
            fh.close()


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ParseError(f"truncated cache stream while reading {what}")
    return data


def load_cache(source, provenance: str | None = None) -> EmbeddingStore:
    """Deserialize an EMB1 cache into a store."""
    close_after = False
    if isinstance(source, (str, Path)):
        if provenance is None:
            provenance = str(source)
        fh = open(source, "rb")
        close_after = True
    else:
        fh = source
        if provenance is None:
            provenance = getattr(fh, "name", "<cache>")
    try:
        magic = _read_exact(fh, 4, "magic")
        if magic != CACHE_MAGIC:
            raise ParseError(f"bad cache magic {magic!r}, expected {CACHE_MAGIC!r}")
        dimension, count = struct.unpack("<IQ", _read_exact(fh, 12, "header"))
        if dimension == 0:
            raise ParseError("cache header declares dimension 0")
        if count == 0:
            raise ParseError("cache header declares empty vocabulary")
        tokens: list[str] = []
        matrix = np.empty((count, dimension), dtype=np.float32)
        row_bytes = dimension * 4
        for i in range(count):
            (tlen,) = struct.unpack("<I", _read_exact(fh, 4, "token length"))
            tokens.append(_read_exact(fh, tlen, "token").decode("utf-8"))
            matrix[i] = np.frombuffer(
                _read_exact(fh, row_bytes, "components"), dtype="<f4"
            )
        return EmbeddingStore(tokens, matrix, provenance=provenance)
    finally:
        if close_after:
            fh.close()
