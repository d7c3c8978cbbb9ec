"""End-to-end acceptance criteria; each prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` (or execute this file) to see the
lines inline; pytest also repeats them in its terminal summary.
"""

from __future__ import annotations

import json
import time

import pytest

from tdnet import tdesign
from tdnet.bigraph import line_diameter
from tdnet.cli import main
from tdnet.construct import double_cover_join, gen_circulant, gen_cycle, three_step, two_step
from tdnet.dcn import dcn_diameter, method_a
from tdnet.tdesign import build_td, canonical_td_3_2, find_isomorphism
from tdnet.verify import (
    enumerate_td_3_2,
    enumerate_td_3_2_details,
    sweep_theorem2,
    sweep_theorem3,
    sweep_theorem4,
    sweep_theorem5,
    td32_from_vectors,
)

RESULTS: dict[int, str] = {}
TRIALS = 1000


def record(n: int, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    ok = ok and elapsed < limit
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.2f} s, limit {limit:g} s)"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_c1_design_validity(tmp_path, capsys):
    t0 = time.perf_counter()
    bad = []
    count = 0
    for k in (2, 3, 4, 5, 7, 8, 9, 11, 13):
        for delta in range(2, k + 2):
            f = tmp_path / f"td_{delta}_{k}.json"
            code = main(["td", "build", "--delta", str(delta), "--k", str(k), "--out", str(f), "-q"])
            code = code or main(["td", "verify", "--in", str(f), "--json", "-q"])
            report = json.loads(capsys.readouterr().out)
            count += 1
            if code != 0 or not report["passed"]:
                bad.append((delta, k))
    record(1, not bad, f"{count} designs built and verified, failures {bad}", time.perf_counter() - t0, 10)


def test_c2_td32_unique():
    t0 = time.perf_counter()
    info = enumerate_td_3_2_details()
    classes = enumerate_td_3_2()
    iso = all(find_isomorphism(td32_from_vectors(v), canonical_td_3_2()) is not None for v in info["valid"])
    iso = iso and find_isomorphism(build_td(3, 2), canonical_td_3_2()) is not None
    record(2, classes == 1 and iso, f"{info['raw']} raw, {len(info['valid'])} valid, {classes} class", time.perf_counter() - t0, 5)


def test_c3_line_diameter_preserved():
    t0 = time.perf_counter()
    cases = [
        ("C10", gen_cycle(5), build_td(2, 3)),
        ("C12", gen_cycle(6), build_td(2, 3)),
        ("circ(12,3)", gen_circulant(12, 3), build_td(3, 3)),
        ("double cover of C10", double_cover_join(gen_cycle(5)), build_td(3, 2)),
    ]
    parts = []
    ok = True
    for name, base, t in cases:
        lam0 = line_diameter(base)
        lam = line_diameter(two_step(base, t).graph)
        if lam0 >= 4:
            ok = ok and lam == lam0
        parts.append(f"{name} {lam0}->{lam}")
    record(3, ok, ", ".join(parts), time.perf_counter() - t0, 30)


COUNTS = [
    # (n, e, d, delta, k, iterations, c, method) -> servers, level-1 + level-2
    ((855, 855, 8, 8, 8, 1, 1, "none"), (54_720, 6_840)),
    ((855, 855, 8, 8, 8, 1, 1, "a"), (3_064_320, 61_560)),
    ((855, 855, 8, 8, 8, 1, 7, "a"), (437_760, 102_600)),
    ((855, 855, 8, 8, 8, 1, 4, "a"), (1_751_040, 82_080)),
    ((855, 855, 8, 8, 8, 1, 1, "b"), (1_532_160, 61_560)),
    ((80, 80, 4, 4, 4, 2, 1, "none"), (20_480, 1_280)),
    ((80, 80, 4, 4, 4, 2, 1, "a"), (1_228_800, 21_760)),
]


def _counts(capsys, params):
    n, e, d, delta, k, it, c, method = params
    argv = ["dcn", "counts", "--n", str(n), "--e", str(e), "--d", str(d), "--delta", str(delta),
            "--k", str(k), "--iterations", str(it), "--c", str(c), "--method", method, "--json", "-q"]
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_c4_table(capsys):
    t0 = time.perf_counter()
    ok = True
    for params, (servers, switches) in COUNTS:
        got = _counts(capsys, params)
        ok = ok and (got["servers"], got["switches"]) == (servers, switches)
    main(["dcn", "table-qfz", "--json", "-q"])
    rows = json.loads(capsys.readouterr().out)["rows"]
    ok = ok and len(rows) == 8
    extra = []
    for k, want in ((7, (406_896, 16_954, 9_688)), (8, (708_608, 22_144, 11_072))):
        got = _counts(capsys, (346, 346, 8, 8, k, 1, 4, "a"))
        extra.append((got["servers"], got["level1"], got["level2"]))
        ok = ok and extra[-1] == want
    record(4, ok, f"{len(COUNTS)} table rows plus {len(rows)} printed, large instances {extra}", time.perf_counter() - t0, 1)


def test_c5_theorem2_sweeps():
    t0 = time.perf_counter()
    instances = [
        two_step(gen_cycle(5), build_td(2, 3)),
        two_step(gen_circulant(9, 3), build_td(3, 3)),
        two_step(double_cover_join(gen_cycle(5)), build_td(3, 2)),
    ]
    parts = []
    ok = True
    for h in instances:
        rep = sweep_theorem2(h)
        blocks = h.two_step_graph.e
        full = rep.pairs_tested == blocks * (blocks - 1)
        ok = ok and rep.passed and full
        parts.append(f"[{h.td.delta},{h.td.k}] {rep.pairs_tested} pairs {len(rep.failures)} failures")
    record(5, ok, "; ".join(parts), time.perf_counter() - t0, 300)


def test_c6_theorem3():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for delta, k in ((3, 3), (4, 4), (4, 5)):
        rep = sweep_theorem3(build_td(delta, k), TRIALS)
        ok = ok and rep.passed and rep.pairs_tested == TRIALS and max(rep.length_histogram) <= 7
        parts.append(f"[{delta},{k}] {len(rep.failures)} failures, longest {max(rep.length_histogram)}, "
                     f"{rep.counts.get('nodes-only', 0)} node-only")
    record(6, ok, "; ".join(parts), time.perf_counter() - t0, 60)


def test_c7_theorem4():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for delta, k in ((3, 3), (4, 4), (4, 5)):
        rep = sweep_theorem4(build_td(delta, k), TRIALS)
        ok = ok and rep.passed and rep.pairs_tested == TRIALS and max(rep.length_histogram) <= 3
        parts.append(f"[{delta},{k}] {len(rep.failures)} failures, longest {max(rep.length_histogram)}")
    record(7, ok, "; ".join(parts), time.perf_counter() - t0, 60)


def test_c8_theorem5():
    t0 = time.perf_counter()
    h = two_step(gen_circulant(9, 3), build_td(3, 3))
    rep = sweep_theorem5(h, TRIALS)
    ok = rep.passed and rep.pairs_tested == TRIALS
    record(8, ok, f"{rep.pairs_tested} trials, {len(rep.failures)} failures, longest {max(rep.length_histogram)}, seed {rep.seed}",
           time.perf_counter() - t0, 120)


def test_c9_dcn_diameter():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for name, base, t in (("C10", gen_cycle(5), build_td(2, 3)), ("circ(9,3)", gen_circulant(9, 3), build_td(3, 3))):
        assert line_diameter(base) == 4
        d = dcn_diameter(method_a(three_step(base, t), 1))
        ok = ok and d == 6
        parts.append(f"{name}: {d}")
    record(9, ok, ", ".join(parts), time.perf_counter() - t0, 60)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-s", "-q"]))
