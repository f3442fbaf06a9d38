import io
import json
import math

import pytest

from indtrees.experiments import (
    ConfigError,

    ExperimentConfig,
    PRule,
    SolverSpec,
    TrialRecord,
    concentration_report,
    count_induced_k_trees,
    export_csv,
    export_json,
    import_csv,
    monte_carlo_tree_count,
    run_experiment,
)
from indtrees.graphs import complete_graph, sample_gnp
from indtrees.rng import Seed
from indtrees.solver import max_induced_tree


def small_config(**overrides):
    base = dict(
        n_values=(10,),
        p_rule=PRule("constant", 0.4),
        trials=8,
        delta=0.5,
        solver=SolverSpec("exact"),
        master_seed=99,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# --- config ------------------------------------------------------------------


def test_p_rules():
    assert PRule("constant", 0.3).p(100) == 0.3
    assert PRule("power", 0.2).p(10**5) == pytest.approx(10**-1)
    assert PRule("reciprocal_log", 1.0).p(10**5) == pytest.approx(1 / math.log(10**5))
    with pytest.raises(ConfigError):
        PRule("nope", 0.1).p(10)


def test_config_validation():
    small_config().validate()
    with pytest.raises(ConfigError):
        small_config(trials=0).validate()
    with pytest.raises(ConfigError):
        small_config(n_values=()).validate()
    with pytest.raises(ConfigError):
        small_config(p_rule=PRule("constant", 1.5)).validate()
    with pytest.raises(ConfigError):
        small_config(solver=SolverSpec("magic")).validate()


def test_config_warns_outside_theorem_range():
    with pytest.warns(UserWarning):
        small_config(p_rule=PRule("power", 0.5), n_values=(100,)).validate()


def test_config_json_round_trip(tmp_path):
    cfg = small_config()
    path = tmp_path / "cfg.json"
    path.write_text(
        json.dumps(
            {
                "n_values": [10],
                "p_rule": {"kind": "constant", "value": 0.4},
                "trials": 8,
                "delta": 0.5,
                "solver": {"kind": "exact"},
                "master_seed": 99,
            }
        )
    )
    assert ExperimentConfig.from_json(path) == cfg
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"n_values": [10]})  # missing fields


# --- running -----------------------------------------------------------------


def test_run_experiment_deterministic_across_workers():
    cfg = small_config(trials=12)
    serial = run_experiment(cfg, workers=1)
    parallel = run_experiment(cfg, workers=4)

    def canonical(records):
        # millis is wall time, the one field allowed to vary between runs
        return [
            (r.n, r.p, r.stream, r.size, r.optimal, r.nodes) for r in records
        ]

    assert canonical(serial.records) == canonical(parallel.records)
    assert [s.to_dict() for s in serial.summaries] == [
        s.to_dict() for s in parallel.summaries
    ]


def test_records_reproduce_solver_output():
    cfg = small_config(trials=5)
    result = run_experiment(cfg)
    for rec in result.records:
        g = sample_gnp(rec.n, rec.p, Seed(cfg.master_seed, rec.stream))
        res = max_induced_tree(g)
        assert (res.size, res.optimal, res.nodes_explored) == (
            rec.size,
            rec.optimal,
            rec.nodes,
        )


def test_streams_disjoint_across_batches():
    cfg = small_config(n_values=(8, 10), trials=4)
    result = run_experiment(cfg)
    streams = [r.stream for r in result.records]
    assert len(streams) == len(set(streams)) == 8


def test_greedy_tier_excluded_from_histogram():
    cfg = small_config(solver=SolverSpec("greedy", restarts=5), trials=6)
    result = run_experiment(cfg)
    (summary,) = result.summaries
    assert summary.histogram == {}
    assert summary.lower_bound_only == 6


# --- reporting ---------------------------------------------------------------


def _record(n, p, stream, size, optimal=True):
    return TrialRecord(n, p, stream, size, optimal, 0, 0.0)


def test_report_single_bar():
    recs = [_record(10, 0.4, i, 5) for i in range(20)]
    rep = concentration_report(recs)
    assert rep.histogram == {5: 20}
    assert rep.best_pair_mass == 1.0
    assert rep.best_pair in ((5, 6), (4, 5))
    assert "size   5" in rep.to_text()


def test_report_complete_graph_measures_two():
    g = complete_graph(5)
    res = max_induced_tree(g)
    assert res.size == 2
    recs = [_record(5, 0.9999, i, res.size) for i in range(10)]
    rep = concentration_report(recs)
    assert rep.best_pair_mass == 1.0
    assert rep.histogram == {2: 10}


def test_report_rejects_mixed_batches():
    with pytest.raises(ValueError):
        concentration_report([_record(10, 0.4, 0, 5), _record(12, 0.4, 1, 5)])
    with pytest.raises(ValueError):
        concentration_report([])


def test_report_best_pair():
    recs = (
        [_record(10, 0.4, i, 6) for i in range(6)]
        + [_record(10, 0.4, 10 + i, 7) for i in range(10)]
        + [_record(10, 0.4, 30 + i, 8) for i in range(4)]
    )
    rep = concentration_report(recs)
    assert rep.best_pair == (6, 7)
    assert rep.best_pair_mass == pytest.approx(16 / 20)
    assert rep.markov_tail  # E X_k lines for sizes above the histogram


# --- persistence -------------------------------------------------------------


def test_csv_header_only_for_empty():
    buf = io.StringIO()
    export_csv([], buf)
    assert buf.getvalue() == "n,p,seed_stream,size,optimal,nodes,millis\n"


def test_csv_round_trip(tmp_path):
    recs = [
        TrialRecord(10, 0.4, 0, 5, True, 123, 1.5),
        TrialRecord(10, 0.4, 1, 6, False, 456, 2.5),
        TrialRecord(12, 0.25, 2, 7, True, 789, 3.5),
    ]
    path = tmp_path / "r.csv"
    export_csv(recs, path, canonical=False)
    assert len(path.read_text().splitlines()) == 4
    back = import_csv(path)
    assert back == recs


def test_canonical_export_byte_identical(tmp_path):
    cfg = small_config(trials=6)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    export_csv(run_experiment(cfg).records, p1)
    export_csv(run_experiment(cfg, workers=3).records, p2)
    assert p1.read_bytes() == p2.read_bytes()
    j1, j2 = tmp_path / "a.json", tmp_path / "b.json"
    export_json(run_experiment(cfg), j1)
    export_json(run_experiment(cfg, workers=2), j2)
    assert j1.read_bytes() == j2.read_bytes()


# --- sampling oracle for the expectation formula -----------------------------


def test_monte_carlo_count_matches_direct_enumeration():
    n, p, k = 9, 0.35, 4
    trials = 40
    seed = Seed(512)
    mean, _ = monte_carlo_tree_count(n, p, k, trials, seed)
    direct = [
        count_induced_k_trees(sample_gnp(n, p, seed.with_stream(t)), k)
        for t in range(trials)
    ]
    assert mean == pytest.approx(sum(direct) / trials)


def test_count_induced_k_trees_examples():
    from indtrees.graphs import path_graph

    assert count_induced_k_trees(path_graph(5), 3) == 3  # the 3 sub-paths
    assert count_induced_k_trees(complete_graph(5), 2) == 10  # every edge
    assert count_induced_k_trees(complete_graph(5), 3) == 0  # all triangles
