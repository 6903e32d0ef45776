"""Binary Merkle trees over SHA-256 with leaf/node domain separation.

Leaves hash as ``H(0x00 || block)`` and internal nodes as
``H(0x01 || left || right)``. Inputs whose length is not a power of two are
padded with the PAD leaf ``H(0x00 || b"PAD")``.
"""
from __future__ import annotations

from dataclasses import dataclass
from hashlib import sha256
from typing import Sequence

from orproofs import kernels
from orproofs.errors import EmptyInput, IndexOutOfRange

DIGEST_SIZE = 32
LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"
PAD_BLOCK = b"PAD"
PAD_DIGEST = sha256(LEAF_PREFIX + PAD_BLOCK).digest()

Digest = bytes


def is_digest(value) -> bool:
    return isinstance(value, bytes) and len(value) == DIGEST_SIZE


def leaf_hash(block: bytes) -> Digest:
    return sha256(LEAF_PREFIX + bytes(block)).digest()


def node_hash(left: Digest, right: Digest) -> Digest:
    return sha256(NODE_PREFIX + left + right).digest()


@dataclass(frozen=True)
class MerkleTree:
    """Complete tree; ``levels[0]`` holds the leaves, ``levels[-1]`` the root."""

    levels: tuple[tuple[Digest, ...], ...]
    original_leaf_count: int

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def leaf_count(self) -> int:
        return len(self.levels[0])

    @property
    def leaves(self) -> tuple[Digest, ...]:
        return self.levels[0]

    @property
    def root(self) -> Digest:
        return self.levels[-1][0]


@dataclass(frozen=True)
class MerklePath:
    leaf_index: int
    steps: tuple[tuple[Digest, bool], ...]  # (sibling, sibling_on_left), leaf level first

    @property
    def depth(self) -> int:
        return len(self.steps)


def _levels_from_leaves(leaves: list[Digest]) -> tuple[tuple[Digest, ...], ...]:
    levels = [leaves]
    while len(levels[-1]) > 1:
        levels.append(kernels.parent_level(levels[-1]))
    return tuple(tuple(level) for level in levels)


def build_tree(blocks: Sequence[bytes]) -> MerkleTree:
    if not blocks:
        raise EmptyInput("cannot build a Merkle tree from zero blocks")
    leaves = kernels.leaf_digests(blocks)
    n = 1 << (len(leaves) - 1).bit_length()
    leaves.extend([PAD_DIGEST] * (n - len(leaves)))
    return MerkleTree(_levels_from_leaves(leaves), len(blocks))


def build_tree_from_leaves(leaves: Sequence[Digest], original_leaf_count: int | None = None) -> MerkleTree:
    """Build from precomputed leaf digests; ``leaves`` must already be a power of two long."""
    n = len(leaves)
    if n == 0:
        raise EmptyInput("cannot build a Merkle tree from zero leaves")
    if n & (n - 1):
        raise ValueError(f"leaf count {n} is not a power of two")
    return MerkleTree(_levels_from_leaves(list(leaves)), n if original_leaf_count is None else original_leaf_count)


def root(tree: MerkleTree) -> Digest:
    return tree.root


def gen_path(tree: MerkleTree, index: int) -> MerklePath:
    if not 0 <= index < tree.leaf_count:
        raise IndexOutOfRange(f"leaf index {index} outside [0, {tree.leaf_count})")
    steps = []
    pos = index
    for level in tree.levels[:-1]:
        sibling_on_left = bool(pos & 1)
        steps.append((level[pos ^ 1], sibling_on_left))
        pos >>= 1
    return MerklePath(index, tuple(steps))


def verify_path(root: Digest, leaf: Digest, path: MerklePath) -> bool:
    """Recompute the root from ``leaf`` along ``path``; never raises on bad input."""
    try:
        if not (is_digest(root) and is_digest(leaf)):
            return False
        steps = path.steps
        if not 0 <= path.leaf_index < (1 << len(steps)):
            return False
        siblings = []
        lefts = []
        for k, (sibling, on_left) in enumerate(steps):
            if not is_digest(sibling) or not isinstance(on_left, bool):
                return False
            if on_left != bool((path.leaf_index >> k) & 1):
                return False
            siblings.append(sibling)
            lefts.append(on_left)
        return kernels.fold_path(leaf, siblings, lefts) == root
    except (AttributeError, TypeError, ValueError):
        return False


def encode_path(path: MerklePath) -> bytes:
    """u8 depth, then per step a u8 direction flag (1 = sibling left) and the sibling."""
    if path.depth > 255:
        raise ValueError("path depth exceeds 255")
    out = bytearray([path.depth])
    for sibling, on_left in path.steps:
        out.append(1 if on_left else 0)
        out += sibling
    return bytes(out)


def decode_path(data: bytes) -> MerklePath:
    """Inverse of :func:`encode_path`; the leaf index is rebuilt from the direction flags."""
    if not data:
        raise ValueError("empty path encoding")
    depth = data[0]
    if len(data) != 1 + 33 * depth:
        raise ValueError(f"path encoding of depth {depth} must be {1 + 33 * depth} bytes, got {len(data)}")
    steps = []
    index = 0
    for k in range(depth):
        off = 1 + 33 * k
        flag = data[off]
        if flag not in (0, 1):
            raise ValueError(f"bad direction flag {flag:#04x} at step {k}")
        index |= flag << k
        steps.append((bytes(data[off + 1:off + 33]), bool(flag)))
    return MerklePath(index, tuple(steps))
