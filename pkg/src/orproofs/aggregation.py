"""AND/OR aggregation, the universal root proof, and path-embedded proofs."""
from __future__ import annotations

from hashlib import sha256
from typing import Sequence

from orproofs.errors import (
    ArityMismatch,
    BackendMismatch,
    EmptyAggregation,
    IndexOutOfRange,
    InvalidConstituent,
    MalformedAux,
    TreeMismatch,
    UnknownConstituent,
)
from orproofs.merkle import (
    PAD_BLOCK,
    PAD_DIGEST,
    Digest,
    MerkleTree,
    build_tree_from_leaves,
    decode_path,
    encode_path,
    gen_path,
    is_digest,
    verify_path,
)
from orproofs import kernels
from orproofs.proofs import (
    TAG_ALL,
    TAG_ANY,
    TAG_ATOM,
    BackendId,
    Proof,
    ProofKind,
    ProvingContext,
    Tuple,
    VerifyingContext,
    compound_encoding,
    prove_leaf,
    verify,
)


def check_constituent(ctx: ProvingContext, proof: Proof) -> None:
    if proof.backend_id != BackendId.IDEAL_TRANSCRIPT:
        raise BackendMismatch("only transcript-backed proofs can be aggregated")
    if proof.descriptor not in ctx.transcript:
        raise UnknownConstituent(f"descriptor {proof.descriptor.hex()} is not in the transcript")
    if proof.aux or not ctx.is_authentic(proof):
        raise InvalidConstituent(f"proof {proof.descriptor.hex()} was not issued by this context")


def aggregate_and(ctx: ProvingContext, proofs: Sequence[Proof]) -> Proof:
    if not proofs:
        raise EmptyAggregation("AND aggregation needs at least one proof")
    for p in proofs:
        check_constituent(ctx, p)
    desc = ctx.transcript.add(compound_encoding(TAG_ALL, (p.descriptor for p in proofs)))
    return ctx.issue(ProofKind.AND, desc)


def aggregate_or(ctx: ProvingContext, left: Proof, right: Proof) -> Proof:
    check_constituent(ctx, left)
    check_constituent(ctx, right)
    return _or_unchecked(ctx, left, right)


def _or_unchecked(ctx: ProvingContext, left: Proof, right: Proof) -> Proof:
    desc = ctx.transcript.add(compound_encoding(TAG_ANY, (left.descriptor, right.descriptor)))
    return ctx.issue(ProofKind.OR, desc)


def split_point(k: int) -> int:
    """Left-heavy split used by every k-ary OR fold: the left half gets the extra child."""
    return (k + 1) // 2


def aggregate_or_many(ctx: ProvingContext, proofs: Sequence[Proof]) -> Proof:
    """OR over any number of proofs as a balanced binary fold; one proof is returned as is."""
    if not proofs:
        raise EmptyAggregation("OR aggregation needs at least one proof")
    for p in proofs:
        check_constituent(ctx, p)

    def fold(ps):
        if len(ps) == 1:
            return ps[0]
        mid = split_point(len(ps))
        return _or_unchecked(ctx, fold(ps[:mid]), fold(ps[mid:]))

    return fold(list(proofs))


def aggregate_or_left(ctx: ProvingContext, proofs: Sequence[Proof]) -> Proof:
    """Left-linear fold ``OR(OR(OR(p0, p1), p2), ...)``; same acceptance set as the balanced fold."""
    if not proofs:
        raise EmptyAggregation("OR aggregation needs at least one proof")
    acc = proofs[0]
    check_constituent(ctx, acc)
    for p in proofs[1:]:
        acc = aggregate_or(ctx, acc, p)
    return acc


def _check_blocks(tree: MerkleTree, blocks: Sequence[bytes]) -> list[Digest]:
    if len(blocks) != tree.original_leaf_count:
        raise TreeMismatch(f"{len(blocks)} blocks for a tree of {tree.original_leaf_count} original leaves")
    digests = kernels.leaf_digests(blocks)
    if tuple(digests) != tree.leaves[:len(digests)]:
        raise TreeMismatch("block digests disagree with the tree leaves")
    return digests


def build_universal_proof(ctx: ProvingContext, tree: MerkleTree, blocks: Sequence[bytes]) -> Proof:
    """OR-fold leaf proofs up the tree's sibling structure into one root proof.

    PAD positions carry no proof: a parent with one present child inherits
    that child's proof, and a parent with none stays absent.
    """
    _check_blocks(tree, blocks)
    level: list[Proof | None] = [prove_leaf(ctx, b) for b in blocks]
    level.extend([None] * (tree.leaf_count - len(level)))
    while len(level) > 1:
        nxt = []
        for j in range(0, len(level), 2):
            left, right = level[j], level[j + 1]
            if left is not None and right is not None:
                nxt.append(_or_unchecked(ctx, left, right))
            else:
                nxt.append(left if left is not None else right)
        level = nxt
    return level[0]


def build_and_proof(ctx: ProvingContext, tree: MerkleTree, blocks: Sequence[bytes]) -> Proof:
    """AND aggregate over every leaf position (PAD leaves included) of ``tree``."""
    _check_blocks(tree, blocks)
    padded = list(blocks) + [PAD_BLOCK] * (tree.leaf_count - len(blocks))
    return aggregate_and(ctx, [prove_leaf(ctx, b) for b in padded])


def build_embedded_proof(ctx: ProvingContext, tree: MerkleTree, index: int) -> Proof:
    if not 0 <= index < tree.original_leaf_count:
        raise IndexOutOfRange(f"leaf index {index} outside [0, {tree.original_leaf_count})")
    leaf = tree.leaves[index]
    desc = ctx.transcript.add(bytes([TAG_ATOM]) + leaf)
    aux = encode_path(gen_path(tree, index))
    return ctx.issue(ProofKind.EMBEDDED, desc, BackendId.PATH_EMBEDDED, aux)


def verify_embedded(vctx: VerifyingContext, proof: Proof, leaf: Digest) -> bool:
    if vctx.backend_id != BackendId.PATH_EMBEDDED or vctx.root is None:
        raise BackendMismatch("embedded verification needs a path-embedded context holding a root")
    if proof.backend_id != BackendId.PATH_EMBEDDED:
        raise BackendMismatch("not a path-embedded proof")
    try:
        path = decode_path(proof.aux)
    except ValueError as exc:
        raise MalformedAux(str(exc)) from None
    if proof.kind != ProofKind.EMBEDDED or not vctx.is_authentic(proof):
        return False
    if not is_digest(leaf):
        return False
    if sha256(bytes([TAG_ATOM]) + leaf).digest() != proof.descriptor:
        return False
    return verify_path(vctx.root, leaf, path)


def naive_and_inclusion_verify(tree_root: Digest, all_leaf_digests: Sequence[Digest], proof: Proof,
                               vctx: VerifyingContext) -> bool:
    """The AND-baseline verifier: rebuild the root from every leaf, then check the aggregate."""
    n = len(all_leaf_digests)
    if n == 0 or n & (n - 1):
        raise ArityMismatch(f"{n} leaf digests is not a power of two")
    node = vctx.transcript.node(proof.descriptor)
    if node is not None and node.tag == TAG_ALL and len(node.payload) != n:
        raise ArityMismatch(f"proof covers {len(node.payload)} leaves, {n} digests supplied")
    if not all(is_digest(h) for h in all_leaf_digests):
        return False
    if build_tree_from_leaves(all_leaf_digests).root != tree_root:
        return False
    return verify(vctx, proof, Tuple(all_leaf_digests))


__all__ = [
    "PAD_DIGEST",
    "aggregate_and",
    "aggregate_or",
    "aggregate_or_left",
    "aggregate_or_many",
    "build_and_proof",
    "build_embedded_proof",
    "build_universal_proof",
    "naive_and_inclusion_verify",
    "split_point",
    "verify_embedded",
]
