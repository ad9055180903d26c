"""Acceptance criteria 1-10, one test each.

Every test records a single ``PASS``/``FAIL`` line (shown in the terminal
summary and printed inline). Two criteria cannot hold as stated; their tests
are strict expected failures, so they still run in full and report FAIL, and a
surprise pass would break the suite.
"""

import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, random_bipartite, random_triadic

from hexlogit.alt import enumerate_nodefe, enumerate_tetrads
from hexlogit.cli import main
from hexlogit.condlogit import ConditionalLogit
from hexlogit.hexad import ENUMERATORS
from hexlogit.oracles import (
    HexadScenario,
    TetradScenario,
    closed_form_prob,
    closed_form_prob_tetrad,
    exact_conditional_prob,
    exact_conditional_prob_tetrad,
)
from hexlogit.simulation import SimulationConfig, run_monte_carlo, run_replication, sparsity_sweep, summarize
from hexlogit.wiring import (
    INFORMATIVE_1,
    INFORMATIVE_2,
    NODE_FE_WIRINGS,
    count_hexad_pairs_by_overlap,
    enumerate_wirings,
    find_identifying_pairs,
    mask_from_triads,
    n_ordered_hexads,
    verify_minimality,
)

TOP = [
    [(1, 1, 1), (2, 1, 2), (2, 2, 1), (1, 2, 2)],
    [(2, 2, 2), (1, 1, 2), (2, 1, 1), (1, 2, 1)],
    [(1, 1, 1), (1, 1, 2), (2, 2, 1), (2, 2, 2)],
    [(1, 1, 1), (1, 2, 1), (2, 1, 2), (2, 2, 2)],
    [(1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 2)],
    [(1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 1)],
    [(1, 1, 2), (2, 1, 1), (1, 2, 2), (2, 2, 1)],
    [(1, 2, 1), (2, 1, 1), (1, 2, 2), (2, 1, 2)],
]
UNIT = [[(1, 1, 1), (2, 2, 2)], [(1, 2, 1), (2, 1, 2)], [(2, 1, 1), (1, 2, 2)], [(1, 1, 2), (2, 2, 1)]]

BUDGET_SECONDS = 3600


def report(number, ok, text):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {text}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def fmt(s):
    return (f"mean {s.mean_beta:.4f} sd {s.sd_beta:.4f} se {s.mean_se:.4f} ratio {s.se_ratio:.3f} "
            f"c90 {s.c90:.3f} c95 {s.c95:.3f} power {s.power:.3f} failed {s.n_failed}")


@pytest.mark.slow
def test_criterion_01_dense_n20():
    s, _ = run_monte_carlo(SimulationConfig(n=20, regime="dense", replications=500, seed=42))
    ok = (abs(s.mean_beta - 1.0) <= 0.015 and 0.03 <= s.sd_beta <= 0.06 and s.c95 >= 0.97
          and s.power == 1.0 and s.n_failed == 0)
    assert report(1, ok, f"dense N=20 K=500: {fmt(s)}")


@pytest.mark.slow
def test_criterion_02_logsqrt_n20():
    s, _ = run_monte_carlo(SimulationConfig(n=20, regime="logsqrt", replications=500, seed=42))
    ok = abs(s.mean_beta - 1.02) <= 0.03 and s.se_ratio > 1.6 and s.c95 >= 0.98 and s.n_failed == 0
    assert report(2, ok, f"log-sqrt N=20 K=500: {fmt(s)}")


@pytest.mark.slow
def test_criterion_03_dense_large_n():
    k = 200
    cfg = SimulationConfig(n=50, regime="dense", replications=k, seed=42)
    t0 = time.perf_counter()
    head = [run_replication(cfg, r) for r in range(3)]
    projected = (time.perf_counter() - t0) / 3 * k
    if projected <= BUDGET_SECONDS:
        records = head + [run_replication(cfg, r) for r in range(3, k)]
        ratio_band = (1.0, 1.3)
    else:
        cfg = SimulationConfig(n=40, regime="dense", replications=k, seed=42)
        records = [run_replication(cfg, r) for r in range(k)]
        ratio_band = (1.05, 1.35)
    elapsed = time.perf_counter() - t0
    s = summarize(records, cfg)
    ok = (abs(s.mean_beta - 1.0) <= 0.01 and ratio_band[0] <= s.se_ratio <= ratio_band[1]
          and 0.90 <= s.c90 <= 0.97 and s.n_failed == 0)
    assert report(3, ok, f"dense N={cfg.n} K={k} (projected {projected:.0f}s, took {elapsed:.0f}s): {fmt(s)}")


def test_criterion_04_sufficiency_oracles():
    rng = np.random.default_rng(4)
    worst = {"dyad": 0.0, "node": 0.0, "tetrad": 0.0}
    drift = dict(worst)
    for _ in range(100):
        for level in ("dyad", "node"):
            sc = HexadScenario.random(rng, 2, level)
            exact = exact_conditional_prob(sc)
            again = exact_conditional_prob(sc.with_fe(HexadScenario.random(rng, 2, level).fe))
            worst[level] = max(worst[level], np.max(np.abs(exact - closed_form_prob(sc))))
            drift[level] = max(drift[level], np.max(np.abs(exact - again)))
        sc = TetradScenario.random(rng, 2)
        other = TetradScenario.random(rng, 2)
        exact = np.array(exact_conditional_prob_tetrad(sc))
        again = np.array(exact_conditional_prob_tetrad(TetradScenario(sc.x, other.a, other.b, sc.beta)))
        worst["tetrad"] = max(worst["tetrad"], np.max(np.abs(exact - closed_form_prob_tetrad(sc))))
        drift["tetrad"] = max(drift["tetrad"], np.max(np.abs(exact - again)))
    ok = max(worst.values()) < 1e-12 and max(drift.values()) < 1e-12
    text = ", ".join(f"{k} dev {worst[k]:.1e} redraw {drift[k]:.1e}" for k in worst)
    assert report(4, ok, f"100 scenarios each: {text}")


def test_criterion_05_wiring_catalog():
    top = enumerate_wirings((2,) * 6)
    unit = enumerate_wirings((1,) * 6)
    pairs = find_identifying_pairs(top)
    sweep = verify_minimality()
    ok = (sorted(top) == sorted(mask_from_triads(w) for w in TOP)
          and pairs == [(INFORMATIVE_1, INFORMATIVE_2)]
          and sweep["passed"] and sweep["sequences_swept"] == 728
          and sorted(unit) == sorted(mask_from_triads(w) for w in UNIT) == sorted(NODE_FE_WIRINGS))
    assert report(5, ok, f"{len(top)} wirings at (2,...,2), pairs {pairs}, minimality over "
                         f"{sweep['sequences_swept']} sequences {'passed' if sweep['passed'] else 'FAILED'}, "
                         f"{len(unit)} wirings at (1,...,1)")


def test_criterion_06_enumerator_equivalence():
    rng = np.random.default_rng(6)
    checked = mismatched = informative = 0
    for t in range(200):
        n = 4 + t % 5
        density = (0.1, 0.3, 0.6)[t % 3]
        net = random_triadic(rng, n, density)
        ref = ENUMERATORS["dense"](net)
        sparse = ENUMERATORS["sparse"](net)
        block = ENUMERATORS["block"](net)
        same = ref.as_set() == sparse.as_set() == block.as_set() and len(sparse) == len(ref)
        checked += 1
        mismatched += not same
        informative += len(ref)
    ok = mismatched == 0
    assert report(6, ok, f"{checked} networks N=4..8, {informative} informative hexads in total, "
                         f"{mismatched} mismatches")


def _fd_errors(model, beta, h=1e-5):
    p = len(beta)
    g = model.score(beta)
    hess = model.hessian(beta)
    fd_g = np.zeros(p)
    fd_h = np.zeros((p, p))
    for q in range(p):
        e = np.zeros(p)
        e[q] = h
        fd_g[q] = (model.loglik(beta + e) - model.loglik(beta - e)) / (2 * h)
        fd_h[:, q] = (model.score(beta + e) - model.score(beta - e)) / (2 * h)
    rel_g = np.max(np.abs(g - fd_g)) / max(np.max(np.abs(fd_g)), 1e-12)
    rel_h = np.max(np.abs(hess - fd_h)) / max(np.max(np.abs(fd_h)), 1e-12)
    return rel_g, rel_h, np.linalg.eigvalsh(hess).max()


def test_criterion_07_numerical_derivatives():
    rng = np.random.default_rng(7)
    worst = {}
    for name in ("dyad-fe", "node-fe", "dyadic"):
        wg = wh = we = -np.inf
        done = 0
        while done < 50:
            p = int(rng.integers(1, 4))
            if name == "dyad-fe":
                iset = ENUMERATORS["sparse"](random_triadic(rng, int(rng.integers(5, 9)), 0.4, p))
            elif name == "node-fe":
                iset = enumerate_nodefe(random_triadic(rng, int(rng.integers(5, 9)), 0.15, p))
            else:
                iset = enumerate_tetrads(random_bipartite(rng, int(rng.integers(6, 15)), 0.4, p))
            if len(iset) == 0:
                continue
            model = ConditionalLogit(iset.w, iset.labels)
            g, h, e = _fd_errors(model, rng.normal(scale=0.7, size=p))
            wg, wh, we = max(wg, g), max(wh, h), max(we, e)
            done += 1
        worst[name] = (wg, wh, we)
    ok = all(g < 1e-6 and h < 1e-5 and e <= 1e-10 for g, h, e in worst.values())
    text = "; ".join(f"{k} score {g:.1e} hess {h:.1e} max eig {e:.1e}" for k, (g, h, e) in worst.items())
    assert report(7, ok, f"50 instances each: {text}")


@pytest.mark.xfail(strict=True, reason="the factor-3 band fails for low-overlap cells at n=3->4; see decisions ledger")
def test_criterion_08_overlap_counts():
    c2, c3, c4 = (count_hexad_pairs_by_overlap(n) for n in (2, 3, 4))
    partition = all(sum(c.values()) == n_ordered_hexads(n) ** 2 for n, c in ((2, c2), (3, c3), (4, c4)))
    closed = c2 == {(2, 2, 2): 64}
    # cells empty at n=3 have no growth ratio; they are listed but cannot be checked
    outside = []
    for q, count in sorted(c3.items()):
        ratio = c4[q] / count
        expected = (4 / 3) ** (12 - sum(q))
        if not expected / 3 <= ratio <= 3 * expected:
            outside.append(f"{''.join(map(str, q))}: {ratio:.0f} vs {expected:.2f}")
    ok = partition and closed and not outside
    assert report(8, ok, f"partition {'ok' if partition else 'broken'}, n=2 cell {'ok' if closed else 'wrong'}, "
                         f"{len(c3) - len(outside)}/{len(c3)} cells within factor 3"
                         + (f"; outside: {', '.join(outside)}" if outside else ""))


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="informative counts grow with N at delta=1.75 under this design; see ledger")
def test_criterion_09_sparsity_threshold():
    rows = sparsity_sweep([20, 30, 40], [0.5, 1.25, 1.75], replications=100, seed=42)
    by = {(r["n"], r["delta"]): r for r in rows}
    monotone = all(by[(n, 0.5)]["mean_ratio"] > by[(n, 1.25)]["mean_ratio"] > by[(n, 1.75)]["mean_ratio"]
                   for n in (20, 30, 40))
    vanishing = by[(40, 1.75)]["mean_n_informative"] < by[(20, 1.75)]["mean_n_informative"]
    ratios = " | ".join(f"N={n}: " + " ".join(f"{by[(n, d)]['mean_ratio']:.3g}" for d in (0.5, 1.25, 1.75))
                        for n in (20, 30, 40))
    text = (f"ratio by delta {ratios}; decreasing in delta {'yes' if monotone else 'no'}; "
            f"delta=1.75 informative N=20 {by[(20, 1.75)]['mean_n_informative']:.1f} vs "
            f"N=40 {by[(40, 1.75)]['mean_n_informative']:.1f}")
    assert report(9, monotone and vanishing, text)


def test_criterion_10_determinism(tmp_path, capsys):
    outs = []
    for name, threads in (("a.json", "1"), ("b.json", "2")):
        path = tmp_path / name
        code = main(["simulate", "--n", "12", "--regime", "logsqrt", "--reps", "20", "--seed", "42",
                     "--threads", threads, "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    ok = outs[0] == outs[1]
    assert report(10, ok, f"two simulate runs (1 and 2 workers), {len(outs[0])} bytes each, identical: {ok}")
