"""Training configuration and the line-oriented config file format."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields


@dataclass
class TrainConfig:
    epochs: int = 300
    batch_size: int = 32
    lr: float = 1e-3
    lam: float = 10.0
    critic_steps_per_gen: int = 5
    rl_pretrain_epochs: int = 150
    rl_integration_epoch: int = 150  # gamma = 1 before, 0 from this epoch on
    agent_steps_per_batch: int = 1  # continued agent fitting on generated batches
    gen_hidden: tuple[int, ...] = (128, 256)
    critic_widths: tuple[int, ...] = (64, 32)
    readout_width: int = 128
    qcbm_n_qubits: int = 16
    qcbm_layers: int = 2
    spsa_iters_per_epoch: int = 50
    qcbm_shots: int = 1000
    qcbm_freeze_epoch: int = 225
    weights: tuple[float, ...] = (0.4, 0.3, 0.3)
    eval_samples: int = 1000
    eval_pair_cap: int = 10_000
    bottleneck_mode: str = "stochastic"
    require_connected: bool = True
    logp_min: float = -2.12
    logp_max: float = 6.04
    checkpoint_every: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("epochs", "batch_size", "critic_steps_per_gen", "qcbm_n_qubits",
                     "qcbm_layers", "spsa_iters_per_epoch", "qcbm_shots", "eval_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.rl_pretrain_epochs < 0 or self.rl_integration_epoch < 0:
            raise ValueError("pretrain/integration epochs must be nonnegative")
        if self.qcbm_freeze_epoch > self.epochs:
            raise ValueError("qcbm_freeze_epoch must not exceed epochs")
        if self.bottleneck_mode not in ("stochastic", "threshold"):
            raise ValueError(f"unknown bottleneck_mode {self.bottleneck_mode!r}")
        if abs(sum(self.weights) - 1.0) > 1e-9 or any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative and sum to 1")

    def gamma(self, epoch: int) -> float:
        return 1.0 if epoch < self.rl_integration_epoch else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        kwargs = {}
        for f in fields(cls):
            if f.name not in d:
                continue
            v = d[f.name]
            if isinstance(v, list):
                v = tuple(v)
            kwargs[f.name] = v
        return cls(**kwargs)


OBJECTIVE_WEIGHTS = {
    "qed": (1.0, 0.0, 0.0),
    "logp": (0.0, 1.0, 0.0),
    "sa": (0.0, 0.0, 1.0),
    "marl": (0.4, 0.3, 0.3),
}


class ConfigError(ValueError):
    pass


def _parse_value(name: str, text: str, kind) -> object:
    text = text.strip()
    try:
        if kind is int:
            return int(text)
        if kind is float:
            return float(text)
        if kind is bool:
            if text.lower() in ("true", "1", "yes"):
                return True
            if text.lower() in ("false", "0", "no"):
                return False
            raise ValueError(text)
        if kind is str:
            return text
        # tuple fields: comma-separated numbers
        parts = [p for p in text.split(",") if p.strip()]
        if name in ("weights",):
            return tuple(float(p) for p in parts)
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {text!r}") from exc


def load_config(path: str) -> TrainConfig:
    """Parse a `key = value` config file into a TrainConfig."""
    kinds = {f.name: (type(f.default) if f.default is not None else str) for f in fields(TrainConfig)}
    values: dict[str, object] = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in kinds:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _parse_value(key, raw, kinds[key])
    try:
        return TrainConfig(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def write_config(config: TrainConfig, path: str) -> None:
    with open(path, "w") as fh:
        for f in fields(TrainConfig):
            v = getattr(config, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            fh.write(f"{f.name} = {v}\n")
