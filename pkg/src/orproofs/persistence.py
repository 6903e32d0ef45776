"""Binary formats for trees, proofs, and transcripts.

All integers are big-endian. Every loader validates lengths before slicing
and refuses to build a value that breaks its invariants.

    tree        "MTRE" 0x01 u8 depth u32 original_count  levels[0..d] digests
    proof       "OAGP" 0x01 u8 backend u8 kind  descriptor  authenticator  u32 aux_len aux
    transcript  "OTRS" 0x01 u32 count  (descriptor u32 len encoding)*
"""
from __future__ import annotations

import os
import struct
import tempfile
from hashlib import sha256
from pathlib import Path

from orproofs.errors import BadMagic, DuplicateDescriptor, IntegrityError, Truncated, UnsupportedVersion
from orproofs import kernels
from orproofs.merkle import PAD_DIGEST, MerkleTree
from orproofs.proofs import BackendId, Proof, ProofKind, Transcript, decode_node

VERSION = 1
TREE_MAGIC = b"MTRE"
PROOF_MAGIC = b"OAGP"
TRANSCRIPT_MAGIC = b"OTRS"


class _Reader:
    def __init__(self, data: bytes, what: str):
        self.data = memoryview(bytes(data))
        self.pos = 0
        self.what = what

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise Truncated(f"{self.what}: need {n} bytes at offset {self.pos}, {len(self.data) - self.pos} left")
        out = bytes(self.data[self.pos:self.pos + n])
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def header(self, magic: bytes) -> None:
        if len(self.data) < len(magic) or bytes(self.data[:len(magic)]) != magic:
            raise BadMagic(f"{self.what}: expected magic {magic!r}")
        self.pos = len(magic)
        version = self.u8()
        if version != VERSION:
            raise UnsupportedVersion(f"{self.what}: version {version} not supported")

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise IntegrityError(f"{self.what}: {len(self.data) - self.pos} trailing bytes")


# -- proofs -------------------------------------------------------------------

def save_proof(proof: Proof) -> bytes:
    return b"".join([
        PROOF_MAGIC,
        bytes([VERSION, int(proof.backend_id), int(proof.kind)]),
        proof.descriptor,
        proof.authenticator,
        struct.pack(">I", len(proof.aux)),
        proof.aux,
    ])


def load_proof(data: bytes) -> Proof:
    r = _Reader(data, "proof")
    r.header(PROOF_MAGIC)
    backend, kind = r.u8(), r.u8()
    desc = r.take(32)
    auth = r.take(32)
    aux = r.take(r.u32())
    r.finish()
    try:
        backend_id, proof_kind = BackendId(backend), ProofKind(kind)
    except ValueError as exc:
        raise IntegrityError(f"proof: {exc}") from None
    if backend_id == BackendId.IDEAL_TRANSCRIPT and aux:
        raise IntegrityError("proof: transcript-backed proofs carry no aux bytes")
    return Proof(backend_id, proof_kind, desc, auth, aux)


# -- trees --------------------------------------------------------------------

def save_tree(tree: MerkleTree) -> bytes:
    head = TREE_MAGIC + bytes([VERSION, tree.depth]) + struct.pack(">I", tree.original_leaf_count)
    return head + b"".join(d for level in tree.levels for d in level)


def load_tree(data: bytes) -> MerkleTree:
    r = _Reader(data, "tree")
    r.header(TREE_MAGIC)
    depth = r.u8()
    original = r.u32()
    n = 1 << depth
    if not 1 <= original <= n:
        raise IntegrityError(f"tree: original leaf count {original} invalid for depth {depth}")
    levels = []
    for k in range(depth + 1):
        width = n >> k
        raw = r.take(32 * width)
        levels.append(tuple(raw[32 * j:32 * j + 32] for j in range(width)))
    r.finish()
    leaves = levels[0]
    for i in range(original, n):
        if leaves[i] != PAD_DIGEST:
            raise IntegrityError(f"tree: padding leaf {i} is not the PAD digest")
    for k in range(depth):
        expected = kernels.parent_level(list(levels[k]))
        if tuple(expected) != levels[k + 1]:
            j = next(j for j, (a, b) in enumerate(zip(expected, levels[k + 1])) if a != b)
            raise IntegrityError(f"tree: node {j} at level {k + 1} does not hash its children")
    return MerkleTree(tuple(levels), original)


# -- transcripts --------------------------------------------------------------

def save_transcript(transcript: Transcript) -> bytes:
    items = transcript.items()
    parts = [TRANSCRIPT_MAGIC, bytes([VERSION]), struct.pack(">I", len(items))]
    for desc, enc in items:
        parts += [desc, struct.pack(">I", len(enc)), enc]
    return b"".join(parts)


def load_transcript(data: bytes) -> Transcript:
    r = _Reader(data, "transcript")
    r.header(TRANSCRIPT_MAGIC)
    count = r.u32()
    transcript = Transcript()
    for i in range(count):
        desc = r.take(32)
        enc = r.take(r.u32())
        if desc in transcript:
            raise DuplicateDescriptor(f"transcript: entry {i} repeats descriptor {desc.hex()}")
        try:
            decode_node(enc)
        except ValueError as exc:
            raise IntegrityError(f"transcript: entry {i}: {exc}") from None
        if sha256(enc).digest() != desc:
            raise IntegrityError(f"transcript: entry {i} descriptor does not match its encoding")
        transcript.add(enc)
    r.finish()
    return transcript


# -- files --------------------------------------------------------------------

def write_atomic(path, data: bytes) -> None:
    """Write ``data`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
