import csv
import io
import json

import pytest

from orproofs.accounting import (
    COLUMNS,
    Scheme,
    cost_model,
    emit_report,
    measure,
    table,
)
from orproofs.errors import InvalidParams, ScaleExceeded

SEED = bytes(32)


def test_paper_overhead_figure():
    r = cost_model(Scheme.AND_AGGREGATION, 2**30, 256)
    assert r.verification_data_bytes == 34_359_738_368 == 2**35
    assert "32 GiB" in r.notes


def test_or_single_hash():
    assert cost_model(Scheme.OR_AGGREGATION, 2**30, 256).verification_data_bytes == 32


def test_and_single_leaf():
    assert cost_model(Scheme.AND_AGGREGATION, 1, 256).verification_data_bytes == 32


def test_universality_and_class():
    rows = {r.scheme: r for r in table(2**20)}
    assert [rows[s].universal for s in Scheme] == [True, False, True]
    assert {r.proof_size_class for r in rows.values()} == {"Compact"}
    assert rows[Scheme.EMBEDDED_PATH].verification_data_bytes == 32


@pytest.mark.parametrize("n, bits", [(0, 256), (3, 256), (8, 255), (8, 0), (True, 256)])
def test_invalid_params(n, bits):
    with pytest.raises(InvalidParams):
        cost_model(Scheme.OR_AGGREGATION, n, bits)


def test_monotonicity():
    ns = [2**k for k in range(0, 31)]
    and_bytes = [cost_model(Scheme.AND_AGGREGATION, n).verification_data_bytes for n in ns]
    or_bytes = {cost_model(Scheme.OR_AGGREGATION, n).verification_data_bytes for n in ns}
    assert all(x < y for x, y in zip(and_bytes, and_bytes[1:]))
    assert or_bytes == {32}


def test_hash_bits_scaling():
    assert cost_model(Scheme.AND_AGGREGATION, 16, 512).verification_data_bytes == 16 * 64


def test_measure_or_core_size_independent():
    small, large = measure(Scheme.OR_AGGREGATION, 2**4, SEED), measure(Scheme.OR_AGGREGATION, 2**10, SEED)
    assert small.proof_core_bytes == large.proof_core_bytes == 66
    assert small.proof_aux_bytes == large.proof_aux_bytes == 0
    assert small.accepted and large.accepted
    assert large.transcript_bytes > small.transcript_bytes


def test_measure_embedded_aux():
    r = measure(Scheme.EMBEDDED_PATH, 2**10, SEED)
    assert r.proof_aux_bytes == 1 + 10 * 33 == 331
    assert r.verification_input_bytes == 32


def test_measure_and_input():
    r = measure(Scheme.AND_AGGREGATION, 2**4, SEED)
    assert r.verification_input_bytes == 16 * 32 == 512
    assert r.accepted


def test_measure_scale_bound():
    with pytest.raises(ScaleExceeded):
        measure(Scheme.OR_AGGREGATION, 2**21, SEED)
    with pytest.raises(ScaleExceeded):
        measure(Scheme.OR_AGGREGATION, 32, SEED, max_n=16)


@pytest.mark.parametrize("n", [2**4, 2**10])
def test_model_measurement_agreement(n):
    for s in Scheme:
        assert measure(s, n, SEED, timings=False).verification_input_bytes == cost_model(s, n).verification_data_bytes


def test_emit_csv_empty():
    out = emit_report([], "csv").decode()
    assert out == ",".join(COLUMNS) + "\n"


def test_emit_json_three_rows_stable_keys():
    rows = json.loads(emit_report(table(2**20), "json"))
    assert len(rows) == 3
    assert all(list(r) == list(COLUMNS) for r in rows)
    assert [r["universal"] for r in rows] == [True, False, True]
    assert [r["verification_data_bytes"] for r in rows] == [33_554_432, 32, 32]


def test_emit_csv_rows():
    m = measure(Scheme.OR_AGGREGATION, 16, SEED, timings=False)
    rows = list(csv.DictReader(io.StringIO(emit_report(table(16) + [m], "csv").decode())))
    assert [r["universal"] for r in rows] == ["true", "false", "true", "true"]
    assert rows[3]["proof_core_bytes"] == "66" and rows[3]["verify_ns"] == ""
    assert "verification key" in rows[0]["notes"]


def test_emit_unknown_format():
    with pytest.raises(InvalidParams):
        emit_report([], "xml")


def test_measured_report_deterministic_without_timings():
    a = emit_report([measure(s, 64, SEED, timings=False) for s in Scheme], "json")
    b = emit_report([measure(s, 64, SEED, timings=False) for s in Scheme], "json")
    assert a == b
