"""Merkle-tree inclusion proofs with AND and OR aggregation.

The OR-aggregated root proof verifies with any single member leaf digest;
AND aggregation and path-embedded proofs are provided as baselines.
"""
from orproofs.aggregation import (
    aggregate_and,
    aggregate_or,
    aggregate_or_many,
    build_and_proof,
    build_embedded_proof,
    build_universal_proof,
    naive_and_inclusion_verify,
    verify_embedded,
)
from orproofs.kernels import BACKEND as KERNEL_BACKEND
from orproofs.merkle import (
    PAD_DIGEST,
    MerklePath,
    MerkleTree,
    build_tree,
    gen_path,
    leaf_hash,
    root,
    verify_path,
)
from orproofs.proofs import (
    AllOf,
    AnyOf,
    Atom,
    Proof,
    Single,
    Structured,
    Tuple,
    encode_statement,
    proof_core_size,
    prove_leaf,
    setup,
    verify,
)

__version__ = "0.1.0"
