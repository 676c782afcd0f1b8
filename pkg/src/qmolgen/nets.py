"""Generator, critic, and reward-agent networks on the autograd engine.

The generator is a one-shot MLP from latent bitstrings to dense graph
logits. The critic (and each property agent, which shares the
architecture) runs per-bond-type graph convolutions, a gated-sum readout,
and a sigmoid bottleneck whose width matches the prior's qubit count.
"""

from __future__ import annotations

import numpy as np

from . import autograd as ag
from .autograd import Tensor
from .graphs import MAX_NODES, N_BOND_TYPES, N_NODE_TYPES

N_EDGE_CHANNELS = N_BOND_TYPES - 1  # NONE carries no message


def _init(rng: np.random.Generator, fan_in: int, shape) -> Tensor:
    return Tensor(rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=shape), requires_grad=True)


def _rows(t: Tensor) -> Tensor:
    """Collapse leading batch/node axes for a shared weight matmul."""
    return ag.reshape(t, (-1, t.shape[-1]))


class Generator:
    """MLP mapping n latent bits (as +/-1) to node and bond logits."""

    def __init__(self, n_qubits: int = 16, hidden: tuple[int, int] = (128, 256), rng=None):
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.n_qubits = n_qubits
        out_dim = MAX_NODES * N_NODE_TYPES + MAX_NODES * MAX_NODES * N_BOND_TYPES
        self.out_dim = out_dim
        sizes = [n_qubits, hidden[0], hidden[1], out_dim]
        self.params: dict[str, Tensor] = {}
        for i in range(3):
            self.params[f"w{i}"] = _init(rng, sizes[i], (sizes[i], sizes[i + 1]))
            self.params[f"b{i}"] = Tensor(np.zeros(sizes[i + 1]), requires_grad=True)

    def parameters(self) -> list[Tensor]:
        return list(self.params.values())

    def forward(self, z_bits: np.ndarray) -> tuple[Tensor, Tensor]:
        """Latent bit rows (B, n) -> (X_logits (B,N,d), symmetrized A_logits)."""
        z_bits = np.asarray(z_bits)
        if z_bits.ndim != 2 or z_bits.shape[1] != self.n_qubits:
            raise ag.ShapeError(
                f"generator expects (batch, {self.n_qubits}) bits, got {z_bits.shape}"
            )
        x = Tensor(2.0 * z_bits.astype(np.float64) - 1.0)
        h = ag.tanh(ag.add(ag.matmul(x, self.params["w0"]), self.params["b0"]))
        h = ag.tanh(ag.add(ag.matmul(h, self.params["w1"]), self.params["b1"]))
        out = ag.add(ag.matmul(h, self.params["w2"]), self.params["b2"])
        batch = z_bits.shape[0]
        n_x = MAX_NODES * N_NODE_TYPES
        x_logits = ag.reshape(out[:, :n_x], (batch, MAX_NODES, N_NODE_TYPES))
        a_raw = ag.reshape(out[:, n_x:], (batch, MAX_NODES, MAX_NODES, N_BOND_TYPES))
        a_logits = ag.multiply(
            ag.add(a_raw, ag.transpose(a_raw, (0, 2, 1, 3))), Tensor(0.5)
        )
        return x_logits, a_logits


class GraphCritic:
    """Relational GCN with gated-sum readout and a sigmoid bottleneck.

    head="linear" is the adversarial critic; head="sigmoid" turns the same
    architecture into a property agent with outputs strictly in (0, 1).
    """

    def __init__(
        self,
        conv_widths: tuple[int, int] = (64, 32),
        readout_width: int = 128,
        bottleneck_width: int = 16,
        head: str = "linear",
        rng=None,
    ):
        if head not in ("linear", "sigmoid"):
            raise ValueError(f"unknown head {head!r}")
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.head = head
        self.bottleneck_width = bottleneck_width
        self.params: dict[str, Tensor] = {}
        in_w = N_NODE_TYPES
        for layer, out_w in enumerate(conv_widths):
            for k in range(N_EDGE_CHANNELS):
                self.params[f"conv{layer}_w{k}"] = _init(rng, in_w, (in_w, out_w))
            self.params[f"conv{layer}_self"] = _init(rng, in_w, (in_w, out_w))
            self.params[f"conv{layer}_b"] = Tensor(np.zeros(out_w), requires_grad=True)
            in_w = out_w
        concat_w = in_w + N_NODE_TYPES
        self.params["gate_w"] = _init(rng, concat_w, (concat_w, readout_width))
        self.params["gate_b"] = Tensor(np.zeros(readout_width), requires_grad=True)
        self.params["emb_w"] = _init(rng, concat_w, (concat_w, readout_width))
        self.params["emb_b"] = Tensor(np.zeros(readout_width), requires_grad=True)
        self.params["bott_w"] = _init(rng, readout_width, (readout_width, bottleneck_width))
        self.params["bott_b"] = Tensor(np.zeros(bottleneck_width), requires_grad=True)
        self.params["head_w"] = _init(rng, bottleneck_width, (bottleneck_width, 1))
        self.params["head_b"] = Tensor(np.zeros(1), requires_grad=True)
        self.n_conv = len(conv_widths)

    def parameters(self) -> list[Tensor]:
        return list(self.params.values())

    def forward(self, x_nodes, a_bonds) -> tuple[Tensor, Tensor]:
        """Probability tensors (B,N,d) and (B,N,N,b) -> (score (B,), bottleneck (B,q))."""
        x = x_nodes if isinstance(x_nodes, Tensor) else Tensor(x_nodes)
        a = a_bonds if isinstance(a_bonds, Tensor) else Tensor(a_bonds)
        if x.ndim != 3 or a.ndim != 4 or x.shape[1] != MAX_NODES or a.shape[3] != N_BOND_TYPES:
            raise ag.ShapeError(f"critic expects (B,{MAX_NODES},{N_NODE_TYPES}) and "
                                f"(B,{MAX_NODES},{MAX_NODES},{N_BOND_TYPES}), got {x.shape}, {a.shape}")
        batch = x.shape[0]
        # bond channels stacked once: (B, K*N, N), NONE channel dropped
        a_stack = ag.reshape(
            ag.transpose(a[:, :, :, 1:], (0, 3, 1, 2)),
            (batch, N_EDGE_CHANNELS * MAX_NODES, MAX_NODES),
        )
        h = x
        for layer in range(self.n_conv):
            out_w = self.params[f"conv{layer}_b"].shape[0]
            in_w = h.shape[-1]
            acc = ag.matmul(_rows(h), self.params[f"conv{layer}_self"])
            # all bond-type messages in one stacked matmul
            msgs = ag.reshape(
                ag.bmm(a_stack, h), (batch, N_EDGE_CHANNELS, MAX_NODES, in_w)
            )
            msgs = ag.reshape(
                ag.transpose(msgs, (0, 2, 1, 3)), (batch * MAX_NODES, N_EDGE_CHANNELS * in_w)
            )
            w_cat = ag.concat(
                [self.params[f"conv{layer}_w{k}"] for k in range(N_EDGE_CHANNELS)], axis=0
            )
            acc = ag.add(acc, ag.matmul(msgs, w_cat))
            h = ag.tanh(ag.add(acc, self.params[f"conv{layer}_b"]))
            h = ag.reshape(h, (batch, MAX_NODES, out_w))
        hx = ag.concat([h, x], axis=2)
        flat = _rows(hx)
        gate = ag.sigmoid(ag.add(ag.matmul(flat, self.params["gate_w"]), self.params["gate_b"]))
        emb = ag.tanh(ag.add(ag.matmul(flat, self.params["emb_w"]), self.params["emb_b"]))
        gated = ag.reshape(ag.multiply(gate, emb), (batch, MAX_NODES, gate.shape[-1]))
        readout = ag.tsum(gated, axis=1)
        bottleneck = ag.sigmoid(
            ag.add(ag.matmul(readout, self.params["bott_w"]), self.params["bott_b"])
        )
        score = ag.add(ag.matmul(bottleneck, self.params["head_w"]), self.params["head_b"])
        score = ag.reshape(score, (batch,))
        if self.head == "sigmoid":
            score = ag.sigmoid(score)
        return score, bottleneck


def reward_agent(rng=None, **kwargs) -> GraphCritic:
    return GraphCritic(head="sigmoid", rng=rng, **kwargs)


def stack_graphs(graphs) -> tuple[np.ndarray, np.ndarray]:
    """One-hot X/A arrays (float64) stacked over a list of MolecularGraphs."""
    xs = np.stack([g.X.astype(np.float64) for g in graphs])
    aas = np.stack([g.A.astype(np.float64) for g in graphs])
    return xs, aas
