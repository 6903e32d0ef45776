import hmac
import threading

import pytest

from conftest import flip_bit, random_digest
from orproofs.errors import BackendMismatch
from orproofs.merkle import leaf_hash
from orproofs.proofs import (
    CORE_SIZE,
    AllOf,
    AnyOf,
    Atom,
    BackendId,
    BlockWitness,
    BranchWitness,
    Proof,
    ProofKind,
    Single,
    Transcript,
    Tuple,
    TupleWitness,
    decode_node,
    derive_key,
    encode_statement,
    proof_core_size,
    prove,
    prove_leaf,
    satisfies,
    setup,
    verify,
)

# openssl dgst -sha256 -mac HMAC -macopt hexkey:00..00 over "or-agg/key/v1"
ZERO_SEED_KEY = "24fbce5514783d7cd0ea01ddab3489029cb33e342f15c1c78719ed3db1934538"


def test_setup_deterministic_and_golden():
    a, _ = setup(bytes(32))
    b, _ = setup(bytes(32))
    assert a.secret_key == b.secret_key
    assert a.secret_key.hex() == ZERO_SEED_KEY
    assert len(a.transcript) == 0


def test_setup_distinct_seeds():
    k1 = derive_key(bytes(32))
    k2 = derive_key(b"\x01" + bytes(31))
    assert k1 != k2


def test_setup_rejects_bad_seed_length():
    with pytest.raises(ValueError):
        setup(b"short")


def test_statement_encoding_lengths():
    a, b = Atom(leaf_hash(b"a")), Atom(leaf_hash(b"b"))
    assert len(encode_statement(a)) == 33
    assert len(encode_statement(AnyOf([a, b]))) == 69
    assert encode_statement(AllOf([a, b]))[0] == 0x02
    assert AnyOf([a, b]).descriptor != AnyOf([b, a]).descriptor
    assert AnyOf([a, b]).descriptor != AllOf([a, b]).descriptor
    assert decode_node(encode_statement(AnyOf([a, b]))).payload == (a.descriptor, b.descriptor)


def test_statements_reject_empty_children():
    with pytest.raises(ValueError):
        AnyOf([])
    with pytest.raises(ValueError):
        AllOf([])
    with pytest.raises(ValueError):
        Atom(b"short")


def test_leaf_proof_completeness_and_rejection(contexts, rng):
    ctx, vctx = contexts
    p = prove_leaf(ctx, b"block")
    assert p.kind == ProofKind.LEAF and p.backend_id == BackendId.IDEAL_TRANSCRIPT and p.aux == b""
    assert p.authenticator == hmac.digest(ctx.secret_key, b"leaf" + p.descriptor, "sha256")
    assert verify(vctx, p, Single(leaf_hash(b"block")))
    assert not verify(vctx, p, Single(leaf_hash(b"other")))
    for _ in range(100):
        assert not verify(vctx, p, Single(random_digest(rng)))
    assert prove_leaf(ctx, b"block") == p


def test_authenticator_bit_flips_rejected(contexts):
    ctx, vctx = contexts
    p = prove_leaf(ctx, b"x")
    h = leaf_hash(b"x")
    for bit in range(256):
        forged = Proof(p.backend_id, p.kind, p.descriptor, flip_bit(p.authenticator, bit))
        assert not verify(vctx, forged, Single(h))
        forged = Proof(p.backend_id, p.kind, flip_bit(p.descriptor, bit), p.authenticator)
        assert not verify(vctx, forged, Single(h))


def test_kind_relabel_rejected(contexts):
    ctx, vctx = contexts
    p = prove_leaf(ctx, b"x")
    for kind in ProofKind:
        if kind != p.kind:
            assert not verify(vctx, Proof(p.backend_id, kind, p.descriptor, p.authenticator), Single(leaf_hash(b"x")))


def test_other_key_rejected(contexts):
    ctx, _ = contexts
    _, other = setup(bytes(32))
    other.transcript.merge(ctx.transcript)
    p = prove_leaf(ctx, b"x")
    assert not verify(other, p, Single(leaf_hash(b"x")))


def test_backend_mismatch_raises(contexts):
    ctx, vctx = contexts
    p = prove_leaf(ctx, b"x")
    with pytest.raises(BackendMismatch):
        verify(vctx.for_root(bytes(32)), p, Single(leaf_hash(b"x")))


def test_core_size_constant(contexts):
    ctx, _ = contexts
    assert proof_core_size(prove_leaf(ctx, b"x")) == CORE_SIZE == 66


def test_generic_prove_with_witness(contexts):
    ctx, vctx = contexts
    a, b = Atom(leaf_hash(b"a")), Atom(leaf_hash(b"b"))
    s = AnyOf([a, AllOf([a, b])])
    w = BranchWitness(1, TupleWitness((BlockWitness(b"a"), BlockWitness(b"b"))))
    assert satisfies(s, w)
    assert not satisfies(s, BranchWitness(0, BlockWitness(b"b")))
    p = prove(ctx, s, w)
    assert p.kind == ProofKind.OR
    assert verify(vctx, p, Single(leaf_hash(b"a")))
    assert not verify(vctx, p, Single(leaf_hash(b"b")))
    assert ctx.transcript.statement(p.descriptor) == s
    with pytest.raises(ValueError):
        prove(ctx, a, BlockWitness(b"b"))


def test_tuple_semantics(contexts):
    ctx, vctx = contexts
    ha, hb = leaf_hash(b"a"), leaf_hash(b"b")
    s = AllOf([Atom(ha), Atom(hb)])
    p = prove(ctx, s, TupleWitness((BlockWitness(b"a"), BlockWitness(b"b"))))
    assert verify(vctx, p, Tuple([ha, hb]))
    assert not verify(vctx, p, Tuple([hb, ha]))
    assert not verify(vctx, p, Tuple([ha]))
    assert not verify(vctx, p, Single(ha))


def test_unknown_descriptor_rejected(contexts):
    ctx, vctx = contexts
    desc = bytes(32)
    p = ctx.issue(ProofKind.LEAF, desc)
    assert not verify(vctx, p, Single(desc))


def test_transcript_concurrent_appends_idempotent():
    t = Transcript()
    encodings = [b"\x01" + leaf_hash(bytes([i])) for i in range(200)]

    def work():
        for e in encodings:
            t.add(e)

    threads = [threading.Thread(target=work) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(t) == 200


def test_verify_is_pure(contexts):
    ctx, vctx = contexts
    p = prove_leaf(ctx, b"a")
    results = {verify(vctx, p, Single(leaf_hash(b"a"))) for _ in range(5)}
    assert results == {True}
