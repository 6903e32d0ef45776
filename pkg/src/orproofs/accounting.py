"""Cost model for the three inclusion-proof schemes and a measuring harness.

The analytical model counts the bytes a verifier must receive besides the
proof itself. The harness builds real trees and proofs, serializes them, and
records exact byte counts and wall times so the two can be compared.
"""
from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import dataclass
from enum import Enum
from hashlib import sha256

from orproofs.aggregation import (
    build_and_proof,
    build_embedded_proof,
    build_universal_proof,
    naive_and_inclusion_verify,
    verify_embedded,
)
from orproofs.errors import InvalidParams, ScaleExceeded
from orproofs.merkle import build_tree
from orproofs.proofs import Single, setup, verify

DEFAULT_MAX_N = 1 << 20
TIMING_RUNS = 5

TRANSCRIPT_NOTE = (
    "transcript_bytes model the verifier's fixed verification key and are "
    "excluded from verification_data_bytes"
)

COLUMNS = (
    "scheme",
    "n",
    "hash_bits",
    "proof_core_bytes",
    "proof_aux_bytes",
    "verification_data_bytes",
    "transcript_bytes",
    "universal",
    "verify_ns",
    "build_ns",
    "notes",
)


class Scheme(Enum):
    AND_AGGREGATION = "AndAggregation"
    EMBEDDED_PATH = "EmbeddedPath"
    OR_AGGREGATION = "OrAggregation"

    @classmethod
    def from_cli(cls, name: str) -> "Scheme":
        return {"and": cls.AND_AGGREGATION, "embedded": cls.EMBEDDED_PATH, "or": cls.OR_AGGREGATION}[name]


UNIVERSAL = {
    Scheme.AND_AGGREGATION: True,
    Scheme.EMBEDDED_PATH: False,
    Scheme.OR_AGGREGATION: True,
}

_MODEL_NOTES = {
    Scheme.AND_AGGREGATION: "verification data: all leaf hashes",
    Scheme.EMBEDDED_PATH: "verification data: single leaf hash (root held by verifier); leaf-specific",
    Scheme.OR_AGGREGATION: "verification data: single leaf hash",
}


@dataclass(frozen=True)
class CostReport:
    scheme: Scheme
    n: int
    hash_bits: int
    proof_size_class: str
    verification_data_bytes: int
    universal: bool
    notes: str

    def row(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "n": self.n,
            "hash_bits": self.hash_bits,
            "proof_core_bytes": None,
            "proof_aux_bytes": None,
            "verification_data_bytes": self.verification_data_bytes,
            "transcript_bytes": None,
            "universal": self.universal,
            "verify_ns": None,
            "build_ns": None,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class MeasuredReport:
    scheme: Scheme
    n: int
    proof_core_bytes: int
    proof_aux_bytes: int
    verification_input_bytes: int
    transcript_bytes: int
    verify_wall_time_ns: int | None
    build_wall_time_ns: int | None
    accepted: bool
    hash_bits: int = 256

    def row(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "n": self.n,
            "hash_bits": self.hash_bits,
            "proof_core_bytes": self.proof_core_bytes,
            "proof_aux_bytes": self.proof_aux_bytes,
            "verification_data_bytes": self.verification_input_bytes,
            "transcript_bytes": self.transcript_bytes,
            "universal": UNIVERSAL[self.scheme],
            "verify_ns": self.verify_wall_time_ns,
            "build_ns": self.build_wall_time_ns,
            "notes": f"measured; accepted={str(self.accepted).lower()}; {TRANSCRIPT_NOTE}",
        }


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1 or n & (n - 1):
        raise InvalidParams(f"n must be a positive power of two, got {n!r}")


def cost_model(scheme: Scheme, n: int, hash_bits: int = 256) -> CostReport:
    _check_n(n)
    if not isinstance(hash_bits, int) or hash_bits <= 0 or hash_bits % 8:
        raise InvalidParams(f"hash_bits must be a positive multiple of 8, got {hash_bits!r}")
    digest_bytes = hash_bits // 8
    data = n * digest_bytes if scheme is Scheme.AND_AGGREGATION else digest_bytes
    notes = f"{_MODEL_NOTES[scheme]}; {data / 2**30:.6g} GiB; {TRANSCRIPT_NOTE}"
    return CostReport(scheme, n, hash_bits, "Compact", data, UNIVERSAL[scheme], notes)


def table(n: int, hash_bits: int = 256) -> list[CostReport]:
    return [cost_model(s, n, hash_bits) for s in Scheme]


def pseudo_random_blocks(seed: bytes, n: int) -> list[bytes]:
    return [sha256(seed + i.to_bytes(8, "big")).digest() for i in range(n)]


def _median_ns(fn) -> int:
    samples = []
    for _ in range(TIMING_RUNS):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return int(statistics.median(samples))


def measure(scheme: Scheme, n: int, seed: bytes, *, max_n: int = DEFAULT_MAX_N,
            timings: bool = True) -> MeasuredReport:
    """Build, serialize, and verify one proof of ``scheme`` over ``n`` seeded blocks.

    Verification time is the median of five runs, each on a fresh verifier
    cache, so the ideal backend's first-query cost is included.
    """
    from orproofs.persistence import save_proof, save_transcript

    _check_n(n)
    if n > max_n:
        raise ScaleExceeded(f"n = {n} exceeds the configured bound {max_n}")
    blocks = pseudo_random_blocks(seed, n)
    ctx, vctx = setup(seed)

    t0 = time.perf_counter_ns()
    tree = build_tree(blocks)
    if scheme is Scheme.OR_AGGREGATION:
        proof = build_universal_proof(ctx, tree, blocks)
    elif scheme is Scheme.AND_AGGREGATION:
        proof = build_and_proof(ctx, tree, blocks)
    else:
        proof = build_embedded_proof(ctx, tree, 0)
    build_ns = time.perf_counter_ns() - t0

    wire = save_proof(proof)
    aux_bytes = len(proof.aux)
    core_bytes = len(wire) - aux_bytes - len(b"OAGP") - 1 - 4

    leaf = tree.leaves[0]
    if scheme is Scheme.AND_AGGREGATION:
        inputs = list(tree.leaves)
        input_bytes = b"".join(inputs)

        def run():
            vctx._members.clear()
            return naive_and_inclusion_verify(tree.root, inputs, proof, vctx)
    elif scheme is Scheme.EMBEDDED_PATH:
        input_bytes = leaf
        ectx = vctx.for_root(tree.root)

        def run():
            return verify_embedded(ectx, proof, leaf)
    else:
        input_bytes = leaf

        def run():
            vctx._members.clear()
            return verify(vctx, proof, Single(leaf))

    accepted = run()
    verify_ns = _median_ns(run) if timings else None
    return MeasuredReport(
        scheme=scheme,
        n=n,
        proof_core_bytes=core_bytes,
        proof_aux_bytes=aux_bytes,
        verification_input_bytes=len(input_bytes),
        transcript_bytes=len(save_transcript(ctx.transcript)),
        verify_wall_time_ns=verify_ns,
        build_wall_time_ns=build_ns if timings else None,
        accepted=accepted,
    )


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def emit_report(reports, fmt: str = "json") -> bytes:
    """Serialize reports with the fixed column set; ``fmt`` is ``json`` or ``csv``."""
    rows = [r.row() for r in reports]
    fmt = fmt.lower()
    if fmt == "json":
        return (json.dumps(rows, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([_csv_cell(row[c]) for c in COLUMNS])
        return buf.getvalue().encode()
    raise InvalidParams(f"unknown report format {fmt!r}")
