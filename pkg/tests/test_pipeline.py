import os

import numpy as np
import pytest

from qmolgen.chem import FragmentTable
from qmolgen.graphs import MolecularGraph
from qmolgen.pipeline import (
    MetricsReport,
    TrainConfig,
    Trainer,
    agent_targets,
    append_metrics_row,
    evaluate_graphs,
    ingest,
    load_config,
    write_config,
)
from qmolgen.pipeline.config import OBJECTIVE_WEIGHTS, ConfigError
from qmolgen.pipeline.data import IngestError
from qmolgen.smiles import parse


@pytest.fixture(scope="module")
def sa_table():
    return FragmentTable.load_default()


class TestConfig:
    def test_defaults_match_reference_schedule(self):
        cfg = TrainConfig()
        assert cfg.epochs == 300
        assert cfg.batch_size == 32
        assert cfg.lr == 1e-3
        assert cfg.lam == 10.0
        assert cfg.critic_steps_per_gen == 5
        assert cfg.rl_pretrain_epochs == 150
        assert cfg.qcbm_n_qubits == 16
        assert cfg.qcbm_layers == 2
        assert cfg.spsa_iters_per_epoch == 50
        assert cfg.qcbm_shots == 1000
        assert cfg.qcbm_freeze_epoch == 225
        assert cfg.weights == (0.4, 0.3, 0.3)
        assert cfg.eval_samples == 1000

    def test_gamma_schedule(self):
        cfg = TrainConfig(rl_integration_epoch=10)
        assert cfg.gamma(0) == 1.0
        assert cfg.gamma(9) == 1.0
        assert cfg.gamma(10) == 0.0
        assert cfg.gamma(299) == 0.0

    def test_invariants_enforced(self):
        with pytest.raises(ValueError, match="positive"):
            TrainConfig(epochs=0)
        with pytest.raises(ValueError, match="freeze"):
            TrainConfig(epochs=10, qcbm_freeze_epoch=11)
        with pytest.raises(ValueError, match="weights"):
            TrainConfig(weights=(0.5, 0.2, 0.2))

    def test_objective_weight_vectors_sum_to_one(self):
        for vec in OBJECTIVE_WEIGHTS.values():
            assert sum(vec) == 1.0

    def test_file_round_trip(self, tmp_path):
        cfg = TrainConfig(epochs=20, qcbm_freeze_epoch=15, weights=(1.0, 0.0, 0.0), seed=7)
        path = tmp_path / "config.txt"
        write_config(cfg, str(path))
        loaded = load_config(str(path))
        assert loaded == cfg

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("momentum = 0.9\n")
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(str(path))

    def test_bad_value_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("epochs = many\n")
        with pytest.raises(ConfigError, match="bad value"):
            load_config(str(path))


class TestIngest:
    def test_size_filter(self, tmp_path):
        path = tmp_path / "mols.smi"
        path.write_text("CCO\nCCN\nCCCCCCCCCC\nCC\nC1CC1\n")
        ds = ingest(str(path))
        assert ds.stats["kept"] == 4
        assert ds.stats["rejected"] == 1

    def test_canonical_dedup(self, tmp_path):
        path = tmp_path / "mols.smi"
        path.write_text("CCO\nOCC\nC(C)O\n")
        ds = ingest(str(path))
        assert len(ds) == 1
        assert ds.stats["duplicates"] == 2

    def test_comment_lines_ignored(self, tmp_path):
        path = tmp_path / "mols.smi"
        path.write_text("# header\nCCO\n\n# more\nCC\n")
        ds = ingest(str(path))
        assert len(ds) == 2

    def test_empty_dataset_rejected(self, tmp_path):
        path = tmp_path / "mols.smi"
        path.write_text("# nothing\nnotasmiles[[[\n")
        with pytest.raises(IngestError, match="no valid molecules"):
            ingest(str(path))

    def test_unreadable_file(self):
        with pytest.raises(IngestError, match="cannot read"):
            ingest("/nonexistent/file.smi")


class TestMetrics:
    def test_validity_hand_count(self, sa_table):
        good = [parse("CCO"), parse("CC"), parse("C")]
        bad = MolecularGraph.from_types([0, 0], [])  # disconnected
        report = evaluate_graphs(good + [bad], set(), sa_table)
        assert report.validity == pytest.approx(75.0)

    def test_uniqueness_hand_count(self, sa_table):
        graphs = [parse("CCO"), parse("OCC"), parse("C")]
        report = evaluate_graphs(graphs, set(), sa_table)
        assert report.uniqueness == pytest.approx(100.0 * 2 / 3, abs=0.01)

    def test_novelty_only_over_unique(self, sa_table):
        graphs = [parse("CCO"), parse("OCC"), parse("C")]
        from qmolgen.smiles import canonical_smiles

        train_keys = {canonical_smiles(parse("CCO"))}
        report = evaluate_graphs(graphs, train_keys, sa_table)
        assert report.novelty == pytest.approx(50.0)

    def test_duplicate_pair_diversity_zero(self, sa_table):
        graphs = [parse("CCO"), parse("CCO")]
        report = evaluate_graphs(graphs, set(), sa_table)
        assert report.diversity == pytest.approx(0.0)

    def test_validity_unaffected_by_duplicates(self, sa_table):
        base = [parse("CCO"), MolecularGraph.from_types([0, 0], [])]
        doubled = base + base
        r1 = evaluate_graphs(base, set(), sa_table)
        r2 = evaluate_graphs(doubled, set(), sa_table)
        assert r1.validity == r2.validity == 50.0

    def test_empty_valid_set_warns(self, sa_table):
        bad = MolecularGraph.from_types([0, 0], [])
        report = evaluate_graphs([bad], set(), sa_table)
        assert report.empty_warning
        assert report.validity == 0.0

    def test_csv_append_atomic(self, tmp_path):
        path = str(tmp_path / "metrics.csv")
        r = MetricsReport(0, 50.0, 100.0, 100.0, 0.5, 0.4, 0.6, 0.3, 0.433)
        append_metrics_row(path, r)
        append_metrics_row(path, MetricsReport(1, 60.0, 90.0, 80.0, 0.4, 0.5, 0.5, 0.4, 0.467))
        lines = open(path).read().strip().split("\n")
        assert lines[0] == "epoch,validity,uniqueness,novelty,diversity,qed,sa,logp,average"
        assert len(lines) == 3
        assert lines[1].startswith("0,50.0000,")


class TestAgentTargets:
    def test_invalid_molecules_get_exactly_zero(self, sa_table):
        cfg = TrainConfig(epochs=1, qcbm_freeze_epoch=1)
        valid = parse("CCO")
        invalid = MolecularGraph.from_types([3, 3], [(0, 1, 2)])  # F=F exceeds valence
        targets = agent_targets([valid, invalid, valid], sa_table, cfg)
        for prop in ("qed", "logp", "sa"):
            assert targets[prop][1] == 0.0
            assert targets[prop][0] > 0.0
            assert targets[prop][0] == targets[prop][2]

    def test_all_invalid_batch_is_all_zero(self, sa_table):
        cfg = TrainConfig(epochs=1, qcbm_freeze_epoch=1)
        invalid = MolecularGraph.from_types([0, 0], [])
        targets = agent_targets([invalid] * 4, sa_table, cfg)
        for prop in ("qed", "logp", "sa"):
            assert (targets[prop] == 0.0).all()


def tiny_dataset(n=48):
    ds = ingest(os.path.join(os.path.dirname(__file__), "fixtures", "fixture_input.smi"))
    ds.graphs = ds.graphs[:n]
    ds.keys = ds.keys[:n]
    return ds


def tiny_config(**kw):
    base = dict(
        epochs=2,
        batch_size=16,
        rl_pretrain_epochs=2,
        rl_integration_epoch=1,
        qcbm_n_qubits=6,
        qcbm_layers=1,
        spsa_iters_per_epoch=4,
        qcbm_shots=64,
        qcbm_freeze_epoch=2,
        eval_samples=40,
        eval_pair_cap=200,
        gen_hidden=(24, 32),
        critic_widths=(12, 8),
        readout_width=16,
        seed=11,
    )
    base.update(kw)
    return TrainConfig(**base)


class TestTrainer:
    def test_gamma_one_never_evaluates_marl(self):
        ds = tiny_dataset()
        cfg = tiny_config(rl_integration_epoch=5, rl_pretrain_epochs=0)  # gamma 1 throughout
        tr = Trainer(cfg, ds)
        tr.agents_pretrained = True
        tr.train()
        assert tr.marl_evaluations == 0

    def test_gamma_zero_evaluates_marl_every_generator_step(self):
        ds = tiny_dataset(32)
        cfg = tiny_config(rl_integration_epoch=0, rl_pretrain_epochs=1)
        tr = Trainer(cfg, ds)
        tr.train()
        n_batches = int(np.ceil(len(ds) / cfg.batch_size))
        assert tr.marl_evaluations == cfg.epochs * n_batches

    def test_qcbm_frozen_after_freeze_epoch(self):
        ds = tiny_dataset(32)
        cfg = tiny_config(epochs=3, qcbm_freeze_epoch=1, rl_integration_epoch=5, rl_pretrain_epochs=0)
        tr = Trainer(cfg, ds)
        tr.agents_pretrained = True
        tr.train(stop_after_epoch=1)
        theta_after_freeze_point = tr.qcbm_params.to_vector().copy()
        tr.train()
        assert np.array_equal(tr.qcbm_params.to_vector(), theta_after_freeze_point)

    def test_agent_pretraining_reduces_loss(self):
        ds = tiny_dataset()
        tr = Trainer(tiny_config(rl_pretrain_epochs=12), ds)
        curves = tr.pretrain_agents()
        for prop, curve in curves.items():
            assert curve[-1] < curve[0]

    def test_sample_smiles_emits_valid_or_sentinel(self):
        ds = tiny_dataset(32)
        tr = Trainer(tiny_config(rl_pretrain_epochs=0, rl_integration_epoch=5), ds)
        tr.agents_pretrained = True
        out = tr.sample_smiles(10, rng=np.random.default_rng(3))
        assert len(out) == 10
        for line in out:
            if line != "INVALID":
                parse(line)


def spearman(a, b):
    ra = np.argsort(np.argsort(a))
    rb = np.argsort(np.argsort(b))
    return float(np.corrcoef(ra, rb)[0, 1])


@pytest.mark.slow
class TestAgentPretrainingReferenceRun:
    """Desk run: 500 training molecules, 100 held out, 150 epochs."""

    @pytest.fixture(scope="class")
    def trained(self):
        data_path = os.path.join(os.path.dirname(__file__), "..", "data", "corpus_9atom.smi")
        ds = ingest(data_path)
        held_graphs = ds.graphs[500:600]
        ds.graphs = ds.graphs[:500]
        ds.keys = ds.keys[:500]
        cfg = TrainConfig(epochs=1, qcbm_freeze_epoch=1, rl_pretrain_epochs=150, seed=5)
        tr = Trainer(cfg, ds)
        curves = tr.pretrain_agents()
        return tr, curves, held_graphs

    def test_held_out_mse_within_band(self, trained):
        from qmolgen.nets import stack_graphs
        from qmolgen.pipeline.training import PROPERTIES, agent_targets
        from qmolgen import autograd as ag

        tr, _, held = trained
        x, a = stack_graphs(held)
        targets = agent_targets(held, tr.sa_table, tr.config)
        for prop, agent in zip(PROPERTIES, tr.agents):
            with ag.no_grad():
                preds, _ = agent.forward(x, a)
            mse = float(np.mean((preds.data - targets[prop]) ** 2))
            assert mse <= 0.02, f"{prop} held-out MSE {mse:.4f}"

    def test_loss_curves_trend_downward(self, trained):
        _, curves, _ = trained
        for prop, curve in curves.items():
            smoothed = np.convolve(curve, np.ones(5) / 5, mode="valid")
            drops = np.mean(np.diff(smoothed) <= 1e-12)
            assert drops >= 0.8, f"{prop} smoothed curve non-increasing only {drops:.0%}"

    def test_predictions_rank_correlate_with_truth(self, trained):
        from qmolgen.nets import stack_graphs
        from qmolgen.pipeline.training import PROPERTIES, agent_targets
        from qmolgen import autograd as ag

        tr, _, held = trained
        x, a = stack_graphs(held)
        targets = agent_targets(held, tr.sa_table, tr.config)
        for prop, agent in zip(PROPERTIES, tr.agents):
            with ag.no_grad():
                preds, _ = agent.forward(x, a)
            rho = spearman(preds.data, targets[prop])
            assert rho >= 0.7, f"{prop} Spearman {rho:.3f}"  # must be parseable
