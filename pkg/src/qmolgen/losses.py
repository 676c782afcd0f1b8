"""Training objectives: adversarial pair, gradient penalty, agent MSE,
weighted reward aggregation, and the blended generator loss."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from . import autograd as ag
from .autograd import Tensor
from .nets import GraphCritic

NORM_EPS = 1e-24  # inside the gradient-norm sqrt; keeps d(norm) finite at 0

CriticFn = Callable[[Tensor, Tensor], Tensor]


def _critic_scores(critic, x, a) -> Tensor:
    if isinstance(critic, GraphCritic):
        score, _ = critic.forward(x, a)
        return score
    return critic(x, a)


def gradient_penalty(
    critic,
    real: tuple[np.ndarray, np.ndarray],
    fake: tuple[np.ndarray, np.ndarray],
    rng: np.random.Generator,
) -> Tensor:
    """Mean squared deviation of the interpolates' gradient norm from 1.

    Per-sample epsilon ~ U(0,1) mixes real and fake tensors elementwise;
    the norm runs over each sample's node and bond gradients jointly.
    """
    xr, ar = real
    xf, af = fake
    if xr.shape != xf.shape or ar.shape != af.shape:
        raise ag.ShapeError(
            f"gradient_penalty: mismatched shapes {xr.shape}/{xf.shape}, {ar.shape}/{af.shape}"
        )
    batch = xr.shape[0]
    eps = rng.random(batch)
    ex = eps[:, None, None]
    ea = eps[:, None, None, None]
    x_hat = Tensor(ex * xr + (1.0 - ex) * xf, requires_grad=True)
    a_hat = Tensor(ea * ar + (1.0 - ea) * af, requires_grad=True)
    total = ag.tsum(_critic_scores(critic, x_hat, a_hat))
    gx, ga = ag.grad(total, [x_hat, a_hat], create_graph=True)
    sq = ag.add(
        ag.tsum(ag.square(gx), axis=(1, 2)),
        ag.tsum(ag.square(ga), axis=(1, 2, 3)),
    )
    norm = ag.sqrt(ag.add(sq, Tensor(NORM_EPS)))
    return ag.tmean(ag.square(ag.sub(norm, Tensor(1.0))))


def critic_loss(
    critic,
    real: tuple[np.ndarray, np.ndarray],
    fake: tuple[np.ndarray, np.ndarray],
    lam: float,
    rng: np.random.Generator,
) -> Tensor:
    """mean D(fake) - mean D(real) + lam * gradient penalty (minimized).

    Real, fake, and interpolated samples run through the critic as one
    stacked batch; the result is identical to scoring them separately and
    adding lam * gradient_penalty with the same rng draws.
    """
    xr, ar = real
    xf, af = fake
    if xr.shape != xf.shape or ar.shape != af.shape:
        raise ag.ShapeError(
            f"critic_loss: mismatched shapes {xr.shape}/{xf.shape}, {ar.shape}/{af.shape}"
        )
    batch = xr.shape[0]
    eps = rng.random(batch)
    ex = eps[:, None, None]
    ea = eps[:, None, None, None]
    x_all = Tensor(np.concatenate([xr, xf, ex * xr + (1.0 - ex) * xf]), requires_grad=True)
    a_all = Tensor(np.concatenate([ar, af, ea * ar + (1.0 - ea) * af]), requires_grad=True)
    scores = _critic_scores(critic, x_all, a_all)
    d_real = ag.tmean(scores[:batch])
    d_fake = ag.tmean(scores[batch : 2 * batch])
    s_hat = ag.tsum(scores[2 * batch :])
    gx, ga = ag.grad(s_hat, [x_all, a_all], create_graph=True)
    sq = ag.add(
        ag.tsum(ag.square(gx[2 * batch :]), axis=(1, 2)),
        ag.tsum(ag.square(ga[2 * batch :]), axis=(1, 2, 3)),
    )
    norm = ag.sqrt(ag.add(sq, Tensor(NORM_EPS)))
    gp = ag.tmean(ag.square(ag.sub(norm, Tensor(1.0))))
    return ag.add(ag.sub(d_fake, d_real), ag.multiply(Tensor(float(lam)), gp))


def generator_adversarial_loss(critic, fake_x: Tensor, fake_a: Tensor) -> Tensor:
    """-mean D(fake), with gradients flowing through the relaxed tensors."""
    return ag.negate(ag.tmean(_critic_scores(critic, fake_x, fake_a)))


def wgan_losses(
    critic,
    generator,
    real: tuple[np.ndarray, np.ndarray],
    z_batch: np.ndarray,
    lam: float,
    rng: np.random.Generator,
) -> tuple[Tensor, Tensor]:
    """Adversarial loss pair for one latent batch.

    The fake graphs flow through the softmax relaxation (never argmax), so
    the second loss carries gradients back into the generator; the critic
    loss sees the same fakes detached.
    """
    x_logits, a_logits = generator.forward(z_batch)
    fake_x = ag.softmax_lastdim(x_logits)
    fake_a = ag.softmax_lastdim(a_logits)
    closs = critic_loss(critic, real, (fake_x.data, fake_a.data), lam, rng)
    gloss = generator_adversarial_loss(critic, fake_x, fake_a)
    return closs, gloss


def agent_loss(agent: GraphCritic, x, a, targets: np.ndarray) -> Tensor:
    """Mean squared error between agent predictions and true rewards."""
    targets = np.asarray(targets, dtype=np.float64)
    preds, _ = agent.forward(x, a)
    if preds.shape != targets.shape:
        raise ag.ShapeError(
            f"agent_loss: {preds.shape[0]} predictions vs {targets.shape[0]} rewards"
        )
    return ag.tmean(ag.square(ag.sub(preds, Tensor(targets))))


def check_weights(weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if (w < 0).any() or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError(f"reward weights must be nonnegative and sum to 1, got {w}")
    return w


def aggregate_reward(agents: Sequence[GraphCritic], weights: Sequence[float], x, a) -> Tensor:
    """Batch mean of the weighted sum of agent outputs (strictly in (0,1))."""
    w = check_weights(weights)
    if len(agents) != len(w):
        raise ValueError(f"{len(agents)} agents vs {len(w)} weights")
    total = None
    for agent, wi in zip(agents, w):
        preds, _ = agent.forward(x, a)
        term = ag.multiply(Tensor(float(wi)), ag.tmean(preds))
        total = term if total is None else ag.add(total, term)
    return total


def marl_generator_loss(agents, weights, fake_x: Tensor, fake_a: Tensor) -> Tensor:
    """Negated aggregate reward (the generator minimizes this)."""
    return ag.negate(aggregate_reward(agents, weights, fake_x, fake_a))


def combined_generator_loss(adv_loss: Tensor, marl_loss: Tensor, gamma: float) -> Tensor:
    """gamma * adversarial + (1 - gamma) * reinforcement objective."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    return ag.add(
        ag.multiply(Tensor(float(gamma)), adv_loss),
        ag.multiply(Tensor(1.0 - float(gamma)), marl_loss),
    )


def bottleneck_bitstrings(
    critic: GraphCritic,
    x: np.ndarray,
    a: np.ndarray,
    mode: str = "stochastic",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Binarized bottleneck activations, one row per sample.

    stochastic: bit ~ Bernoulli(activation); threshold: activation > 0.5.
    Bit order matches the prior's qubit order.
    """
    with ag.no_grad():
        _, bottleneck = critic.forward(Tensor(x), Tensor(a))
    act = bottleneck.data
    if mode == "stochastic":
        if rng is None:
            raise ValueError("stochastic mode needs an rng")
        return (rng.random(act.shape) < act).astype(np.uint8)
    if mode == "threshold":
        return (act > 0.5).astype(np.uint8)
    raise ValueError(f"unknown binarization mode {mode!r}")
