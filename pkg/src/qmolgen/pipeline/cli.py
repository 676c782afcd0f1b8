"""Command-line interface for the molecular generation pipeline."""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from ..chem import FragmentTable, score_molecule
from ..smiles import SmilesError, parse as parse_smiles
from .config import OBJECTIVE_WEIGHTS, ConfigError, TrainConfig, load_config, write_config
from .data import Dataset, IngestError, ingest
from .training import Trainer

log = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmolgen", description="Molecular graph GAN with a Born-machine prior")
    ap.add_argument("--verbose", action="store_true", help="info-level logging")
    sub = ap.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to key = value config file")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out-dir", default="runs/latest", help="output directory")

    p = sub.add_parser("ingest", parents=[common], help="parse and filter a SMILES dataset")
    p.add_argument("data", help="SMILES-per-line file")

    p = sub.add_parser("pretrain-rl", parents=[common], help="pretrain property agents on real data")
    p.add_argument("data")

    p = sub.add_parser("train", parents=[common], help="run the full training loop")
    p.add_argument("data")
    p.add_argument("--objective", choices=sorted(OBJECTIVE_WEIGHTS), default="marl",
                   help="reward weighting: one-hot property or the blended default")
    p.add_argument("--resume", help="checkpoint to continue from")
    p.add_argument("--agents", help="checkpoint providing pretrained agents")
    p.add_argument("--stop-after", type=int, help="stop after this many epochs (checkpoint remains)")

    p = sub.add_parser("sample", parents=[common], help="emit molecules from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True, help="dataset used to rebuild the trainer context")
    p.add_argument("--n", type=int, default=10)

    p = sub.add_parser("eval", parents=[common], help="metrics of a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--n", type=int, help="evaluation sample count (default from config)")

    p = sub.add_parser("props", parents=[common], help="score SMILES from stdin as CSV")
    return ap


def _load_config(args) -> TrainConfig:
    config = load_config(args.config) if args.config else TrainConfig()
    if args.seed is not None:
        d = config.to_dict()
        d["seed"] = args.seed
        config = TrainConfig.from_dict(d)
    return config


def _cmd_ingest(args) -> int:
    dataset = ingest(args.data)
    os.makedirs(args.out_dir, exist_ok=True)
    out_path = os.path.join(args.out_dir, "dataset.smi")
    with open(out_path, "w") as fh:
        fh.write("\n".join(dataset.keys) + "\n")
    print(f"kept {dataset.stats['kept']} molecules "
          f"({dataset.stats['rejected']} rejected, {dataset.stats['duplicates']} duplicates) "
          f"-> {out_path}")
    return 0


def _cmd_pretrain(args) -> int:
    config = _load_config(args)
    dataset = ingest(args.data)
    trainer = Trainer(config, dataset, out_dir=args.out_dir)
    curves = trainer.pretrain_agents()
    ckpt = os.path.join(args.out_dir, "agents_pretrained.ckpt")
    trainer.save_checkpoint(ckpt)
    curve_path = os.path.join(args.out_dir, "agent_losses.csv")
    with open(curve_path, "w") as fh:
        fh.write("epoch,qed,logp,sa\n")
        for i in range(len(curves["qed"])):
            fh.write(f"{i},{curves['qed'][i]:.6f},{curves['logp'][i]:.6f},{curves['sa'][i]:.6f}\n")
    print(f"pretrained agents for {config.rl_pretrain_epochs} epochs -> {ckpt}")
    return 0


def _cmd_train(args) -> int:
    config = _load_config(args)
    d = config.to_dict()
    d["weights"] = list(OBJECTIVE_WEIGHTS[args.objective])
    config = TrainConfig.from_dict(d)
    dataset = ingest(args.data)

    if args.resume:
        trainer = Trainer.resume(args.resume, dataset, out_dir=args.out_dir)
    else:
        trainer = Trainer(config, dataset, out_dir=args.out_dir)
        if args.agents:
            from .checkpoint import load as load_ckpt

            payload = load_ckpt(args.agents)
            for i, agent in enumerate(trainer.agents):
                for name, t in agent.params.items():
                    t.data[:] = payload.arrays[f"agent{i}/{name}"]
            trainer.agents_pretrained = True
    os.makedirs(args.out_dir, exist_ok=True)
    write_config(trainer.config, os.path.join(args.out_dir, "config.txt"))

    def show(report):
        print(report.csv_row())

    print("epoch,validity,uniqueness,novelty,diversity,qed,sa,logp,average")
    trainer.train(stop_after_epoch=args.stop_after, epoch_callback=show)
    print(f"metrics -> {trainer.metrics_path}")
    return 0


def _cmd_sample(args) -> int:
    dataset = ingest(args.data)
    trainer = Trainer.resume(args.checkpoint, dataset)
    seed = args.seed if args.seed is not None else 0
    for line in trainer.sample_smiles(args.n, rng=np.random.default_rng(seed)):
        print(line)
    return 0


def _cmd_eval(args) -> int:
    dataset = ingest(args.data)
    trainer = Trainer.resume(args.checkpoint, dataset)
    report = trainer.evaluate(args.n)
    print("epoch,validity,uniqueness,novelty,diversity,qed,sa,logp,average")
    print(report.csv_row())
    return 0


def _cmd_props(args) -> int:
    table = FragmentTable.load_default()
    print("smiles,qed,logp,sa,qed_norm,logp_norm,sa_norm")
    status = 0
    for line in sys.stdin:
        smi = line.strip()
        if not smi or smi.startswith("#"):
            continue
        try:
            g = parse_smiles(smi)
        except SmilesError as exc:
            print(f"unparseable {smi!r}: {exc}", file=sys.stderr)
            status = 1
            continue
        s = score_molecule(g, table)
        print(
            f"{smi},{s.qed_raw:.6f},{s.logp_raw:.5f},{s.sa_raw:.4f},"
            f"{s.qed_norm:.6f},{s.logp_norm:.6f},{s.sa_norm:.6f}"
        )
    return status


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    handlers = {
        "ingest": _cmd_ingest,
        "pretrain-rl": _cmd_pretrain,
        "train": _cmd_train,
        "sample": _cmd_sample,
        "eval": _cmd_eval,
        "props": _cmd_props,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, IngestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
