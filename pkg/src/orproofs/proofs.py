"""Statements, proofs, and the designated-verifier transcript backend.

A proof certifies a *statement*, a predicate tree over digests. The ideal
backend keys every statement node by its descriptor (SHA-256 of its
canonical encoding) in an append-only transcript shared with the verifier,
and authenticates proofs with HMAC-SHA-256 under a key derived from a seed.
The verifier therefore accepts a proof only if the proving context issued
it, and only for inputs that satisfy the registered statement.

This is a simulation of a recursive proof system with the same acceptance
semantics. It is sound and complete against its own key but is neither
zero-knowledge nor publicly verifiable.
"""
from __future__ import annotations

import hmac
import struct
import threading
from dataclasses import dataclass, field
from enum import IntEnum
from hashlib import sha256
from typing import NamedTuple, Union

from orproofs.errors import BackendMismatch
from orproofs.merkle import DIGEST_SIZE, Digest, is_digest, leaf_hash

KEY_LABEL = b"or-agg/key/v1"
CORE_SIZE = 2 + 32 + 32

TAG_ATOM = 0x01
TAG_ALL = 0x02
TAG_ANY = 0x03


class BackendId(IntEnum):
    IDEAL_TRANSCRIPT = 1
    PATH_EMBEDDED = 2


class ProofKind(IntEnum):
    LEAF = 1
    OR = 2
    AND = 3
    EXPR = 4
    EMBEDDED = 5


KIND_LABELS = {
    ProofKind.LEAF: b"leaf",
    ProofKind.OR: b"or",
    ProofKind.AND: b"and",
    ProofKind.EXPR: b"expr",
    ProofKind.EMBEDDED: b"embedded",
}


# -- statements ---------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    expected: Digest
    descriptor: Digest = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_digest(self.expected):
            raise ValueError("Atom expects a 32-byte digest")
        object.__setattr__(self, "descriptor", sha256(encode_statement(self)).digest())


@dataclass(frozen=True)
class AllOf:
    children: tuple
    descriptor: Digest = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("AllOf needs at least one child")
        object.__setattr__(self, "descriptor", sha256(encode_statement(self)).digest())


@dataclass(frozen=True)
class AnyOf:
    children: tuple
    descriptor: Digest = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("AnyOf needs at least one child")
        object.__setattr__(self, "descriptor", sha256(encode_statement(self)).digest())


Statement = Union[Atom, AllOf, AnyOf]


def compound_encoding(tag: int, child_descriptors) -> bytes:
    child_descriptors = list(child_descriptors)
    return bytes([tag]) + struct.pack(">I", len(child_descriptors)) + b"".join(child_descriptors)


def encode_statement(s: Statement) -> bytes:
    """Canonical encoding; compound nodes reference children by descriptor."""
    if isinstance(s, Atom):
        return bytes([TAG_ATOM]) + s.expected
    if isinstance(s, AllOf):
        return compound_encoding(TAG_ALL, (c.descriptor for c in s.children))
    if isinstance(s, AnyOf):
        return compound_encoding(TAG_ANY, (c.descriptor for c in s.children))
    raise TypeError(f"not a statement: {s!r}")


def descriptor(s: Statement) -> Digest:
    return s.descriptor


class Node(NamedTuple):
    """Shallow statement node as stored in the transcript."""

    tag: int
    payload: object  # Digest for atoms, tuple of child descriptors otherwise


def decode_node(encoding: bytes) -> Node:
    if not encoding:
        raise ValueError("empty statement encoding")
    tag = encoding[0]
    if tag == TAG_ATOM:
        if len(encoding) != 1 + DIGEST_SIZE:
            raise ValueError("atom encoding must be 33 bytes")
        return Node(tag, bytes(encoding[1:]))
    if tag in (TAG_ALL, TAG_ANY):
        if len(encoding) < 5:
            raise ValueError("compound encoding too short")
        (count,) = struct.unpack(">I", encoding[1:5])
        if count == 0 or len(encoding) != 5 + 32 * count:
            raise ValueError("compound encoding length does not match child count")
        body = encoding[5:]
        return Node(tag, tuple(bytes(body[32 * i:32 * i + 32]) for i in range(count)))
    raise ValueError(f"unknown statement tag {tag:#04x}")


# -- witnesses ----------------------------------------------------------------

@dataclass(frozen=True)
class BlockWitness:
    block: bytes


@dataclass(frozen=True)
class BranchWitness:
    child_index: int
    inner: "Witness"


@dataclass(frozen=True)
class TupleWitness:
    children: tuple


Witness = Union[BlockWitness, BranchWitness, TupleWitness]


def satisfies(statement: Statement, witness: Witness) -> bool:
    """The prover-side relation: does ``witness`` establish ``statement``?"""
    if isinstance(statement, Atom):
        return isinstance(witness, BlockWitness) and leaf_hash(witness.block) == statement.expected
    if isinstance(statement, AnyOf):
        return (
            isinstance(witness, BranchWitness)
            and 0 <= witness.child_index < len(statement.children)
            and satisfies(statement.children[witness.child_index], witness.inner)
        )
    if isinstance(statement, AllOf):
        return (
            isinstance(witness, TupleWitness)
            and len(witness.children) == len(statement.children)
            and all(satisfies(s, w) for s, w in zip(statement.children, witness.children))
        )
    return False


# -- proofs and public inputs -------------------------------------------------

@dataclass(frozen=True)
class Proof:
    backend_id: BackendId
    kind: ProofKind
    descriptor: Digest
    authenticator: bytes
    aux: bytes = b""


def proof_core_size(proof: Proof) -> int:
    return CORE_SIZE


@dataclass(frozen=True)
class Single:
    h: Digest


@dataclass(frozen=True)
class Tuple:
    hs: tuple

    def __post_init__(self):
        object.__setattr__(self, "hs", tuple(self.hs))


@dataclass(frozen=True)
class Structured:
    """A verification input tree together with the expression it mirrors."""

    input: object
    expr: object


PublicInput = Union[Single, Tuple, Structured]


# -- transcript and contexts --------------------------------------------------

class Transcript:
    """Append-only map from descriptor to canonical statement encoding."""

    def __init__(self):
        self._entries: dict[Digest, bytes] = {}
        self._lock = threading.Lock()

    def add(self, encoding: bytes) -> Digest:
        desc = sha256(encoding).digest()
        with self._lock:
            self._entries.setdefault(desc, bytes(encoding))
        return desc

    def add_statement(self, s: Statement) -> Digest:
        stack = [s]
        while stack:
            node = stack.pop()
            if node.descriptor in self._entries:
                continue
            self.add(encode_statement(node))
            if not isinstance(node, Atom):
                stack.extend(node.children)
        return s.descriptor

    def merge(self, other: "Transcript") -> None:
        for encoding in other._entries.values():
            self.add(encoding)

    def __contains__(self, desc) -> bool:
        return desc in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def encoding(self, desc: Digest) -> bytes | None:
        return self._entries.get(desc)

    def node(self, desc: Digest) -> Node | None:
        enc = self._entries.get(desc)
        return None if enc is None else decode_node(enc)

    def statement(self, desc: Digest) -> Statement:
        """Rebuild the full statement tree under ``desc``; KeyError if any node is missing."""
        memo: dict[Digest, Statement] = {}

        def build(d):
            if d not in memo:
                node = self.node(d)
                if node is None:
                    raise KeyError(d.hex())
                if node.tag == TAG_ATOM:
                    memo[d] = Atom(node.payload)
                else:
                    kids = [build(c) for c in node.payload]
                    memo[d] = (AllOf if node.tag == TAG_ALL else AnyOf)(kids)
            return memo[d]

        return build(desc)

    def items(self):
        return list(self._entries.items())


def authenticator(key: bytes, kind: ProofKind, desc: Digest, aux: bytes = b"") -> bytes:
    return hmac.digest(key, KIND_LABELS[kind] + desc + aux, "sha256")


@dataclass
class ProvingContext:
    secret_key: bytes
    transcript: Transcript = field(default_factory=Transcript)

    def issue(self, kind: ProofKind, desc: Digest, backend: BackendId = BackendId.IDEAL_TRANSCRIPT,
              aux: bytes = b"") -> Proof:
        return Proof(backend, kind, desc, authenticator(self.secret_key, kind, desc, aux), aux)

    def is_authentic(self, proof: Proof) -> bool:
        try:
            expected = authenticator(self.secret_key, ProofKind(proof.kind), proof.descriptor, proof.aux)
        except (ValueError, KeyError, TypeError):
            return False
        return hmac.compare_digest(expected, proof.authenticator)


@dataclass
class VerifyingContext:
    backend_id: BackendId
    verification_key: bytes
    transcript: Transcript
    root: Digest | None = None
    _members: dict = field(default_factory=dict, repr=False, compare=False)

    def for_root(self, root: Digest) -> "VerifyingContext":
        """A path-embedded verifier sharing this key and trusting ``root``."""
        return VerifyingContext(BackendId.PATH_EMBEDDED, self.verification_key, self.transcript, root)

    def is_authentic(self, proof: Proof) -> bool:
        try:
            expected = authenticator(self.verification_key, ProofKind(proof.kind), proof.descriptor, proof.aux)
        except (ValueError, KeyError, TypeError):
            return False
        return hmac.compare_digest(expected, proof.authenticator)

    def members(self, desc: Digest) -> frozenset:
        """Digests ``h`` for which ``Single(h)`` satisfies the statement at ``desc``.

        Atoms contribute their digest, AnyOf the union of its children, AllOf
        nothing (a conjunction never accepts a single digest). Cached per
        descriptor once the whole subgraph resolved.
        """
        cached = self._members.get(desc)
        if cached is not None:
            return cached
        found = set()
        seen = set()
        complete = True
        stack = [desc]
        transcript = self.transcript
        while stack:
            d = stack.pop()
            if d in seen:
                continue
            seen.add(d)
            enc = transcript.encoding(d)
            if enc is None:
                complete = False
                continue
            tag = enc[0]
            if tag == TAG_ATOM:
                found.add(enc[1:])
            elif tag == TAG_ANY:
                stack.extend(decode_node(enc).payload)
        result = frozenset(found)
        if complete:
            self._members[desc] = result
        return result


def derive_key(seed: bytes) -> bytes:
    return hmac.digest(seed, KEY_LABEL, "sha256")


def setup(seed: bytes) -> tuple[ProvingContext, VerifyingContext]:
    seed = bytes(seed)
    if len(seed) != 32:
        raise ValueError(f"seed must be 32 bytes, got {len(seed)}")
    key = derive_key(seed)
    transcript = Transcript()
    return ProvingContext(key, transcript), VerifyingContext(BackendId.IDEAL_TRANSCRIPT, key, transcript)


# -- proving ------------------------------------------------------------------

_KIND_FOR = {Atom: ProofKind.LEAF, AnyOf: ProofKind.OR, AllOf: ProofKind.AND}


def prove(ctx: ProvingContext, statement: Statement, witness: Witness) -> Proof:
    """Prove an arbitrary statement from a witness establishing it."""
    if not satisfies(statement, witness):
        raise ValueError("witness does not satisfy the statement")
    ctx.transcript.add_statement(statement)
    return ctx.issue(_KIND_FOR[type(statement)], statement.descriptor)


def prove_leaf(ctx: ProvingContext, block: bytes) -> Proof:
    desc = ctx.transcript.add(bytes([TAG_ATOM]) + leaf_hash(block))
    return ctx.issue(ProofKind.LEAF, desc)


# -- verification -------------------------------------------------------------

def holds(vctx: VerifyingContext, desc: Digest, public_input: PublicInput) -> bool:
    if isinstance(public_input, Single):
        return public_input.h in vctx.members(desc)
    if isinstance(public_input, Tuple):
        node = vctx.transcript.node(desc)
        if node is None or node.tag != TAG_ALL or len(node.payload) != len(public_input.hs):
            return False
        return all(holds(vctx, c, Single(h)) for c, h in zip(node.payload, public_input.hs))
    if isinstance(public_input, Structured):
        from orproofs.dsl import holds_structured

        return holds_structured(vctx, desc, public_input.expr, public_input.input)
    return False


def verify(vctx: VerifyingContext, proof: Proof, public_input: PublicInput) -> bool:
    if proof.backend_id != vctx.backend_id:
        raise BackendMismatch(f"proof backend {proof.backend_id!r} does not match verifier {vctx.backend_id!r}")
    if proof.backend_id == BackendId.PATH_EMBEDDED:
        from orproofs.aggregation import verify_embedded

        if not isinstance(public_input, Single):
            return False
        return verify_embedded(vctx, proof, public_input.h)
    if proof.aux or not vctx.is_authentic(proof):
        return False
    if proof.descriptor not in vctx.transcript:
        return False
    return holds(vctx, proof.descriptor, public_input)
