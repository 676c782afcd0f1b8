"""Training orchestration: agent pretraining, the adversarial/RL loop,
prior fitting on bottleneck bitstrings, and exact checkpoint resume."""

from __future__ import annotations

import logging
import os
from typing import Callable

import numpy as np

from .. import autograd as ag
from ..autograd import Adam, Tensor
from ..chem import FragmentTable, score_molecule
from ..chem.rewards import normalize_rewards
from ..graphs import MolecularGraph, valence_valid
from ..losses import (
    agent_loss,
    bottleneck_bitstrings,
    combined_generator_loss,
    critic_loss,
    generator_adversarial_loss,
    marl_generator_loss,
)
from ..nets import Generator, GraphCritic, reward_agent, stack_graphs
from ..qcbm import QcbmParameters, SpsaState, born_probabilities, build_state, train_to_target
from .checkpoint import (
    CheckpointPayload,
    load as load_ckpt,
    rng_from_json,
    rng_state_to_json,
    save as save_ckpt,
)
from .config import TrainConfig
from .data import Dataset
from .metrics import MetricsReport, append_metrics_row, decode_batch, evaluate_graphs

log = logging.getLogger(__name__)

PROPERTIES = ("qed", "logp", "sa")
_RNG_NAMES = ("init", "data", "latent", "gp", "bottleneck", "spsa", "eval", "agent")


class TrainingDiverged(RuntimeError):
    pass


def agent_targets(
    decoded: list[MolecularGraph],
    sa_table: FragmentTable,
    config: TrainConfig,
) -> dict[str, np.ndarray]:
    """True normalized rewards per property; invalid molecules get exactly 0."""
    out = {p: np.zeros(len(decoded)) for p in PROPERTIES}
    for i, g in enumerate(decoded):
        if not valence_valid(g, require_connected=config.require_connected):
            continue  # reward stays 0.0
        s = score_molecule(g, sa_table)
        s = normalize_rewards(s, logp_min=config.logp_min, logp_max=config.logp_max)
        out["qed"][i] = s.qed_norm
        out["logp"][i] = s.logp_norm
        out["sa"][i] = s.sa_norm
    return out


class Trainer:
    """Owns all networks, the prior, optimizers, and seeded RNG streams."""

    def __init__(self, config: TrainConfig, dataset: Dataset, out_dir: str | None = None):
        self.config = config
        self.dataset = dataset
        self.out_dir = out_dir
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)

        seeds = np.random.SeedSequence(config.seed).spawn(len(_RNG_NAMES))
        self.rngs = {name: np.random.default_rng(s) for name, s in zip(_RNG_NAMES, seeds)}

        init = self.rngs["init"]
        self.generator = Generator(config.qcbm_n_qubits, config.gen_hidden, rng=init)
        self.critic = GraphCritic(
            config.critic_widths, config.readout_width, config.qcbm_n_qubits, "linear", rng=init
        )
        self.agents = [
            reward_agent(
                rng=init,
                conv_widths=config.critic_widths,
                readout_width=config.readout_width,
                bottleneck_width=config.qcbm_n_qubits,
            )
            for _ in PROPERTIES
        ]
        self.qcbm_params = QcbmParameters.broad(
            config.qcbm_n_qubits, config.qcbm_layers, init, scale=0.1
        )
        self.spsa_state = SpsaState()

        self.opt_gen = Adam(self.generator.parameters(), lr=config.lr)
        self.opt_critic = Adam(self.critic.parameters(), lr=config.lr)
        self.opt_agents = [Adam(a.parameters(), lr=config.lr) for a in self.agents]

        self.sa_table = FragmentTable.from_graphs(dataset.graphs)
        self.real_x, self.real_a = stack_graphs(dataset.graphs)
        self.real_targets = self._dataset_targets()

        self.epoch = 0
        self.agents_pretrained = False
        self.marl_evaluations = 0
        self.metrics_path = os.path.join(out_dir, "metrics.csv") if out_dir else None

    # ------------------------------------------------------------------
    def _dataset_targets(self) -> dict[str, np.ndarray]:
        out = {p: np.zeros(len(self.dataset)) for p in PROPERTIES}
        for i, g in enumerate(self.dataset.graphs):
            s = score_molecule(g, self.sa_table)
            s = normalize_rewards(s, logp_min=self.config.logp_min, logp_max=self.config.logp_max)
            out["qed"][i] = s.qed_norm
            out["logp"][i] = s.logp_norm
            out["sa"][i] = s.sa_norm
        return out

    def _latent_cdf(self) -> np.ndarray:
        probs = born_probabilities(build_state(self.qcbm_params))
        return np.cumsum(probs / probs.sum())

    def _draw_latents(self, cdf: np.ndarray, count: int) -> np.ndarray:
        draws = self.rngs["latent"].random(count)
        indices = np.minimum(np.searchsorted(cdf, draws, side="right"), cdf.size - 1)
        n = self.config.qcbm_n_qubits
        shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
        return ((indices[:, None] >> shifts[None, :]) & 1).astype(np.uint8)

    # ------------------------------------------------------------------
    def pretrain_agents(self, epochs: int | None = None) -> dict[str, list[float]]:
        """Fit each property agent to true rewards of the real molecules."""
        epochs = self.config.rl_pretrain_epochs if epochs is None else epochs
        rng = self.rngs["agent"]
        n = len(self.dataset)
        batch = min(self.config.batch_size, n)
        curves: dict[str, list[float]] = {p: [] for p in PROPERTIES}
        for _ in range(epochs):
            order = rng.permutation(n)
            sums = {p: 0.0 for p in PROPERTIES}
            count = 0
            for start in range(0, n, batch):
                idx = order[start : start + batch]
                x, a = self.real_x[idx], self.real_a[idx]
                count += 1
                for prop, agent, opt in zip(PROPERTIES, self.agents, self.opt_agents):
                    loss = agent_loss(agent, x, a, self.real_targets[prop][idx])
                    ag.backward(loss)
                    opt.step()
                    sums[prop] += loss.item()
            for p in PROPERTIES:
                curves[p].append(sums[p] / count)
        self.agents_pretrained = True
        return curves

    # ------------------------------------------------------------------
    def train(
        self,
        stop_after_epoch: int | None = None,
        epoch_callback: Callable[[MetricsReport], None] | None = None,
    ) -> list[MetricsReport]:
        """Run (or continue) the main loop; returns per-epoch metric reports."""
        cfg = self.config
        needs_rl = any(cfg.gamma(e) < 1.0 for e in range(cfg.epochs))
        if needs_rl and not self.agents_pretrained:
            log.info("pretraining reward agents for %d epochs", cfg.rl_pretrain_epochs)
            self.pretrain_agents()

        reports: list[MetricsReport] = []
        end_epoch = cfg.epochs if stop_after_epoch is None else min(stop_after_epoch, cfg.epochs)
        while self.epoch < end_epoch:
            report = self._run_epoch(self.epoch)
            reports.append(report)
            if self.metrics_path:
                append_metrics_row(self.metrics_path, report)
            if self.out_dir and (self.epoch + 1) % cfg.checkpoint_every == 0:
                self.save_checkpoint(os.path.join(self.out_dir, "checkpoint.ckpt"))
            if epoch_callback:
                epoch_callback(report)
        return reports

    def _run_epoch(self, epoch: int) -> MetricsReport:
        cfg = self.config
        gamma = cfg.gamma(epoch)
        frozen = epoch >= cfg.qcbm_freeze_epoch
        cdf = self._latent_cdf()
        n = len(self.dataset)
        order = self.rngs["data"].permutation(n)
        collected_bits: list[np.ndarray] = []

        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            real_x, real_a = self.real_x[idx], self.real_a[idx]
            b = len(idx)

            for _ in range(cfg.critic_steps_per_gen):
                z = self._draw_latents(cdf, b)
                with ag.no_grad():
                    xl, al = self.generator.forward(z)
                    fx = ag.softmax_lastdim(xl).data
                    fa = ag.softmax_lastdim(al).data
                loss = critic_loss(self.critic, (real_x, real_a), (fx, fa), cfg.lam, self.rngs["gp"])
                self._check_finite(loss, "critic")
                ag.backward(loss)
                self.opt_critic.step()

            z = self._draw_latents(cdf, b)
            xl, al = self.generator.forward(z)
            fx_t = ag.softmax_lastdim(xl)
            fa_t = ag.softmax_lastdim(al)
            if gamma == 1.0:
                gen_loss = generator_adversarial_loss(self.critic, fx_t, fa_t)
            else:
                self.marl_evaluations += 1
                marl = marl_generator_loss(self.agents, cfg.weights, fx_t, fa_t)
                if gamma == 0.0:
                    gen_loss = marl
                else:
                    adv = generator_adversarial_loss(self.critic, fx_t, fa_t)
                    gen_loss = combined_generator_loss(adv, marl, gamma)
            self._check_finite(gen_loss, "generator")
            ag.backward(gen_loss)
            self.opt_gen.step()

            decoded = decode_batch(fx_t.data, fa_t.data)
            targets = agent_targets(decoded, self.sa_table, cfg)
            # agents fit the decoded (one-hot) graphs, matching how their
            # targets are computed; the generator still queries them at the
            # relaxed outputs, which sharpen toward one-hot as training ends
            dx, da = stack_graphs(decoded)
            for _ in range(cfg.agent_steps_per_batch):
                for prop, agent, opt in zip(PROPERTIES, self.agents, self.opt_agents):
                    aloss = agent_loss(agent, dx, da, targets[prop])
                    self._check_finite(aloss, f"agent {prop}")
                    ag.backward(aloss)
                    opt.step()

            if not frozen:
                collected_bits.append(
                    bottleneck_bitstrings(
                        self.critic, real_x, real_a, cfg.bottleneck_mode, self.rngs["bottleneck"]
                    )
                )
                collected_bits.append(
                    bottleneck_bitstrings(
                        self.critic, fx_t.data, fa_t.data, cfg.bottleneck_mode, self.rngs["bottleneck"]
                    )
                )

        if not frozen and collected_bits:
            bits = np.concatenate(collected_bits, axis=0)
            self.qcbm_params, _ = train_to_target(
                self.qcbm_params,
                bits,
                iterations=cfg.spsa_iters_per_epoch,
                shots=cfg.qcbm_shots,
                seed=self.rngs["spsa"],
                state=self.spsa_state,
            )

        report = self.evaluate(cfg.eval_samples, epoch=epoch)
        self.epoch = epoch + 1
        return report

    def _check_finite(self, loss: Tensor, where: str) -> None:
        if not np.isfinite(loss.data).all():
            if self.out_dir:
                self.save_checkpoint(os.path.join(self.out_dir, "diverged.ckpt"))
            raise TrainingDiverged(f"non-finite {where} loss at epoch {self.epoch}")

    # ------------------------------------------------------------------
    def evaluate(self, n_samples: int | None = None, epoch: int | None = None) -> MetricsReport:
        cfg = self.config
        n_samples = cfg.eval_samples if n_samples is None else n_samples
        rng = self.rngs["eval"]
        from .metrics import generate_graphs

        graphs = generate_graphs(self.generator, self.qcbm_params, n_samples, rng)
        return evaluate_graphs(
            graphs,
            self.dataset.key_set,
            self.sa_table,
            epoch=self.epoch if epoch is None else epoch,
            require_connected=cfg.require_connected,
            pair_cap=cfg.eval_pair_cap,
            rng=rng,
            logp_range=(cfg.logp_min, cfg.logp_max),
        )

    def sample_smiles(self, n: int, rng: np.random.Generator | int | None = None) -> list[str]:
        """Canonical SMILES per sample, 'INVALID' for failed decodes."""
        from ..smiles import canonical_smiles
        from .metrics import generate_graphs

        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        graphs = generate_graphs(self.generator, self.qcbm_params, n, rng)
        out = []
        for g in graphs:
            if valence_valid(g, require_connected=self.config.require_connected):
                out.append(canonical_smiles(g))
            else:
                out.append("INVALID")
        return out

    # ------------------------------------------------------------------
    def _named_arrays(self) -> dict[str, np.ndarray]:
        arrays: dict[str, np.ndarray] = {}
        for name, t in self.generator.params.items():
            arrays[f"gen/{name}"] = t.data
        for name, t in self.critic.params.items():
            arrays[f"critic/{name}"] = t.data
        for i, agent in enumerate(self.agents):
            for name, t in agent.params.items():
                arrays[f"agent{i}/{name}"] = t.data
        arrays["qcbm/theta"] = self.qcbm_params.to_vector()
        for label, opt in self._optimizers().items():
            for name, arr in opt.state_arrays().items():
                arrays[f"opt_{label}/{name}"] = arr
        return arrays

    def _optimizers(self) -> dict[str, Adam]:
        opts = {"gen": self.opt_gen, "critic": self.opt_critic}
        for i, opt in enumerate(self.opt_agents):
            opts[f"agent{i}"] = opt
        return opts

    def save_checkpoint(self, path: str) -> None:
        scalars = {
            "spsa_k": self.spsa_state.k,
            "agents_pretrained": int(self.agents_pretrained),
            "marl_evaluations": self.marl_evaluations,
        }
        for label, opt in self._optimizers().items():
            scalars[f"opt_{label}_t"] = opt.step_count
        payload = CheckpointPayload(
            epoch=self.epoch,
            config=self.config.to_dict(),
            arrays=self._named_arrays(),
            rng_states={name: rng_state_to_json(rng) for name, rng in self.rngs.items()},
            scalars=scalars,
        )
        save_ckpt(payload, path)

    def load_payload(self, payload: CheckpointPayload) -> None:
        arrays = payload.arrays
        for name, t in self.generator.params.items():
            t.data[:] = arrays[f"gen/{name}"]
        for name, t in self.critic.params.items():
            t.data[:] = arrays[f"critic/{name}"]
        for i, agent in enumerate(self.agents):
            for name, t in agent.params.items():
                t.data[:] = arrays[f"agent{i}/{name}"]
        self.qcbm_params = QcbmParameters.from_vector(
            self.config.qcbm_n_qubits, self.config.qcbm_layers, arrays["qcbm/theta"]
        )
        for label, opt in self._optimizers().items():
            states = {
                name.split("/", 1)[1]: arr
                for name, arr in arrays.items()
                if name.startswith(f"opt_{label}/")
            }
            opt.load_state_arrays(states, payload.scalars[f"opt_{label}_t"])
        for name in _RNG_NAMES:
            self.rngs[name] = rng_from_json(payload.rng_states[name])
        self.spsa_state.k = payload.scalars["spsa_k"]
        self.agents_pretrained = bool(payload.scalars.get("agents_pretrained", 0))
        self.marl_evaluations = payload.scalars.get("marl_evaluations", 0)
        self.epoch = payload.epoch

    @classmethod
    def resume(cls, path: str, dataset: Dataset, out_dir: str | None = None) -> "Trainer":
        payload = load_ckpt(path)
        config = TrainConfig.from_dict(payload.config)
        trainer = cls(config, dataset, out_dir=out_dir)
        trainer.load_payload(payload)
        return trainer
