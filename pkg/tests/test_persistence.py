import struct

import pytest
from hypothesis import given, settings, strategies as st

from conftest import flip_bit
from orproofs.aggregation import build_embedded_proof, build_universal_proof
from orproofs.errors import BadMagic, DuplicateDescriptor, IntegrityError, Truncated, UnsupportedVersion
from orproofs.merkle import build_tree, leaf_hash
from orproofs.persistence import (
    load_proof,
    load_transcript,
    load_tree,
    save_proof,
    save_transcript,
    save_tree,
    write_atomic,
)
from orproofs.proofs import BackendId, Proof, ProofKind, Transcript, prove_leaf, setup


def _sample_proofs():
    ctx, _ = setup(bytes(32))
    blocks = [bytes([i]) for i in range(16)]
    tree = build_tree(blocks)
    return ctx, [prove_leaf(ctx, b"x"), build_universal_proof(ctx, tree, blocks), build_embedded_proof(ctx, tree, 3)]


def test_proof_roundtrip():
    _, proofs = _sample_proofs()
    for p in proofs:
        data = save_proof(p)
        assert load_proof(data) == p
        assert save_proof(load_proof(data)) == data


def test_proof_layout():
    _, proofs = _sample_proofs()
    data = save_proof(proofs[0])
    assert data[:4] == b"OAGP" and data[4] == 1 and data[5] == 1 and data[6] == 1
    assert len(data) == 4 + 1 + 66 + 4


def test_proof_bad_magic_version_truncated():
    _, proofs = _sample_proofs()
    data = save_proof(proofs[2])
    with pytest.raises(BadMagic):
        load_proof(b"X" + data[1:])
    with pytest.raises(UnsupportedVersion):
        load_proof(data[:4] + b"\x02" + data[5:])
    body = data[:71] + struct.pack(">I", len(proofs[2].aux) + 1) + proofs[2].aux
    with pytest.raises(Truncated):
        load_proof(body)
    with pytest.raises(Truncated):
        load_proof(data[:40])
    with pytest.raises(IntegrityError):
        load_proof(data + b"\x00")
    with pytest.raises(IntegrityError):
        load_proof(data[:5] + b"\x09" + data[6:])


def test_tree_roundtrip():
    tree = build_tree([bytes([i]) for i in range(16)])
    data = save_tree(tree)
    assert data[:4] == b"MTRE" and data[5] == 4
    assert len(data) == 10 + 32 * 31
    loaded = load_tree(data)
    assert loaded == tree and loaded.root == tree.root


def test_tree_corruption_detected():
    tree = build_tree([bytes([i]) for i in range(16)])
    data = save_tree(tree)
    for offset in (10, 10 + 32 * 16 + 5, len(data) - 1):
        corrupted = flip_bit(data, offset * 8)
        with pytest.raises(IntegrityError):
            load_tree(corrupted)
    with pytest.raises(Truncated):
        load_tree(data[:-1])


def test_tree_padding_checked():
    # a real fourth block in a slot declared as padding
    tree = build_tree([b"a", b"b", b"c", b"d"])
    data = bytearray(save_tree(tree))
    data[6:10] = struct.pack(">I", 3)
    with pytest.raises(IntegrityError):
        load_tree(bytes(data))
    # a block that literally is b"PAD" is a real member, not padding
    assert load_tree(save_tree(build_tree([b"a", b"b", b"c", b"PAD"]))).original_leaf_count == 4
    data[6:10] = struct.pack(">I", 0)
    with pytest.raises(IntegrityError):
        load_tree(bytes(data))


def test_transcript_roundtrip():
    ctx, _ = _sample_proofs()
    data = save_transcript(ctx.transcript)
    loaded = load_transcript(data)
    assert loaded.items() == ctx.transcript.items()
    assert save_transcript(loaded) == data


def test_transcript_duplicate_rejected():
    t = Transcript()
    t.add(b"\x01" + leaf_hash(b"a"))
    (desc, enc), = t.items()
    entry = desc + struct.pack(">I", len(enc)) + enc
    data = b"OTRS\x01" + struct.pack(">I", 2) + entry + entry
    with pytest.raises(DuplicateDescriptor):
        load_transcript(data)


def test_transcript_integrity():
    t = Transcript()
    t.add(b"\x01" + leaf_hash(b"a"))
    data = save_transcript(t)
    with pytest.raises(IntegrityError):
        load_transcript(data[:-1] + bytes([data[-1] ^ 1]))
    with pytest.raises(IntegrityError):
        load_transcript(data[:9 + 32 + 4] + b"\x07" + data[9 + 32 + 5:])
    with pytest.raises(BadMagic):
        load_transcript(b"OTRX" + data[4:])


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from(list(BackendId)),
    st.sampled_from(list(ProofKind)),
    st.binary(min_size=32, max_size=32),
    st.binary(min_size=32, max_size=32),
    st.binary(max_size=300),
)
def test_proof_codec_bijection(backend, kind, desc, auth, aux):
    if backend == BackendId.IDEAL_TRANSCRIPT:
        aux = b""
    p = Proof(backend, kind, desc, auth, aux)
    assert load_proof(save_proof(p)) == p


@settings(max_examples=30, deadline=None)
@given(st.lists(st.binary(max_size=20), min_size=1, max_size=70))
def test_tree_codec_bijection(blocks):
    tree = build_tree(blocks)
    assert load_tree(save_tree(tree)) == tree


def test_write_atomic(tmp_path):
    target = tmp_path / "x.bin"
    write_atomic(target, b"one")
    write_atomic(target, b"two")
    assert target.read_bytes() == b"two"
    assert [p.name for p in tmp_path.iterdir()] == ["x.bin"]
