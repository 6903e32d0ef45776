"""Pure-Python hashing kernels (fallback for the compiled ``_kernels``)."""
from hashlib import sha256

LEAF_PREFIX = b"\x00"
NODE_PREFIX = b"\x01"


def leaf_digests(blocks):
    return [sha256(LEAF_PREFIX + bytes(b)).digest() for b in blocks]


def parent_level(level):
    if len(level) % 2:
        raise ValueError("level length must be even")
    it = iter(level)
    return [sha256(NODE_PREFIX + left + right).digest() for left, right in zip(it, it)]


def fold_path(leaf, siblings, lefts):
    """Fold ``leaf`` up through the path; ``lefts[k]`` marks a left sibling."""
    cur = leaf
    for sibling, on_left in zip(siblings, lefts):
        if on_left:
            cur = sha256(NODE_PREFIX + sibling + cur).digest()
        else:
            cur = sha256(NODE_PREFIX + cur + sibling).digest()
    return cur
