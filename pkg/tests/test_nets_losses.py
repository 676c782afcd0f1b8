import numpy as np
import pytest

from qmolgen import autograd as ag
from qmolgen.autograd import Tensor
from qmolgen.graphs import MAX_NODES, N_BOND_TYPES, N_NODE_TYPES, random_permute
from qmolgen.losses import (
    agent_loss,
    aggregate_reward,
    bottleneck_bitstrings,
    check_weights,
    combined_generator_loss,
    critic_loss,
    generator_adversarial_loss,
    gradient_penalty,
    marl_generator_loss,
)
from qmolgen.nets import Generator, GraphCritic, reward_agent, stack_graphs
from qmolgen.smiles import parse

from fdcheck import fd_check_params


def toy_batch(seed=0, batch=2):
    """Small one-hot graph batch (3-atom molecules) for loss tests."""
    graphs = [parse("CCO"), parse("C#N"), parse("CC=O"), parse("C1CC1")]
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(graphs), size=batch, replace=True)
    return stack_graphs([graphs[i] for i in picks])


def relaxed_batch(seed=0, batch=2):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(batch, MAX_NODES, N_NODE_TYPES))
    a = rng.normal(size=(batch, MAX_NODES, MAX_NODES, N_BOND_TYPES))
    a = 0.5 * (a + a.transpose(0, 2, 1, 3))
    xs = ag.softmax_lastdim(Tensor(x))
    aas = ag.softmax_lastdim(Tensor(a))
    return xs.data, aas.data


class LinearCritic:
    """D(x) = <w, [X, A]> per sample; gradient norm is exactly ||w||."""

    def __init__(self, wx, wa):
        self.wx = Tensor(wx)
        self.wa = Tensor(wa)

    def __call__(self, x, a):
        xb = ag.tsum(ag.multiply(x, self.wx), axis=(1, 2))
        ab = ag.tsum(ag.multiply(a, self.wa), axis=(1, 2, 3))
        return ag.add(xb, ab)


def unit_linear_critic(norm=1.0, seed=3):
    rng = np.random.default_rng(seed)
    wx = rng.normal(size=(MAX_NODES, N_NODE_TYPES))
    wa = rng.normal(size=(MAX_NODES, MAX_NODES, N_BOND_TYPES))
    scale = norm / np.sqrt((wx**2).sum() + (wa**2).sum())
    return LinearCritic(wx * scale, wa * scale)


class TestGenerator:
    def test_output_shapes(self):
        gen = Generator(n_qubits=16, rng=0)
        z = np.zeros((3, 16), dtype=np.uint8)
        x, a = gen.forward(z)
        assert x.shape == (3, MAX_NODES, N_NODE_TYPES)
        assert a.shape == (3, MAX_NODES, MAX_NODES, N_BOND_TYPES)
        assert np.allclose(a.data, a.data.transpose(0, 2, 1, 3))

    def test_zero_weights_output_bias(self):
        gen = Generator(n_qubits=8, rng=0)
        for name in ("w0", "w1", "w2", "b0", "b1"):
            gen.params[name].data[:] = 0.0
        bias = np.arange(gen.out_dim, dtype=np.float64) * 0.01
        gen.params["b2"].data[:] = bias
        x, a = gen.forward(np.ones((2, 8), dtype=np.uint8))
        flat = np.concatenate([x.data.reshape(2, -1), np.zeros((2, 0))], axis=1)
        assert np.allclose(flat[0], bias[: flat.shape[1]])

    def test_distinct_latents_give_distinct_logits(self):
        hits = 0
        for seed in range(100):
            gen = Generator(n_qubits=8, rng=seed)
            rng = np.random.default_rng(seed + 1000)
            z1 = rng.integers(0, 2, size=(1, 8))
            z2 = z1.copy()
            flip = rng.integers(0, 8)
            z2[0, flip] ^= 1
            x1, _ = gen.forward(z1)
            x2, _ = gen.forward(z2)
            if not np.allclose(x1.data, x2.data):
                hits += 1
        assert hits == 100

    def test_every_latent_bit_reaches_the_logits(self):
        for seed in (0, 1, 2):
            gen = Generator(n_qubits=8, rng=seed)
            z = np.random.default_rng(seed).integers(0, 2, size=(1, 8))
            x_base, a_base = gen.forward(z)
            for bit in range(8):
                z2 = z.copy()
                z2[0, bit] ^= 1
                x2, a2 = gen.forward(z2)
                changed = not np.allclose(x_base.data, x2.data) or not np.allclose(
                    a_base.data, a2.data
                )
                assert changed, f"bit {bit} had no effect (seed {seed})"

    def test_wrong_latent_length_rejected(self):
        gen = Generator(n_qubits=16, rng=0)
        with pytest.raises(ag.ShapeError, match="generator expects"):
            gen.forward(np.zeros((2, 8)))


class TestCritic:
    def test_zero_weights_score_zero_bottleneck_half(self):
        critic = GraphCritic(rng=0)
        for p in critic.parameters():
            p.data[:] = 0.0
        x, a = toy_batch()
        score, bott = critic.forward(x, a)
        np.testing.assert_allclose(score.data, 0.0)
        np.testing.assert_allclose(bott.data, 0.5)

    def test_permutation_invariance(self):
        critic = GraphCritic(rng=1)
        g = parse("NC(=O)CO")
        base, bott_base = critic.forward(*stack_graphs([g]))
        for seed in range(10):
            h = random_permute(g, seed)
            score, bott = critic.forward(*stack_graphs([h]))
            np.testing.assert_allclose(score.data, base.data, atol=1e-9)
            np.testing.assert_allclose(bott.data, bott_base.data, atol=1e-9)

    def test_bottleneck_width_matches_qubits(self):
        critic = GraphCritic(bottleneck_width=16, rng=0)
        x, a = toy_batch()
        _, bott = critic.forward(x, a)
        assert bott.shape == (x.shape[0], 16)

    def test_gradient_vs_finite_differences(self):
        critic = GraphCritic(conv_widths=(6, 5), readout_width=7, bottleneck_width=4, rng=2)
        x, a = toy_batch(seed=5)

        def loss():
            score, _ = critic.forward(x, a)
            return ag.tmean(ag.square(score))

        fd_check_params(loss, critic.parameters(), max_coords=25)


class TestGradientPenalty:
    def test_unit_norm_linear_critic_zero_penalty(self):
        critic = unit_linear_critic(1.0)
        real = toy_batch(seed=1, batch=4)
        fake = relaxed_batch(seed=2, batch=4)
        gp = gradient_penalty(critic, real, fake, np.random.default_rng(0))
        assert gp.item() < 1e-12

    def test_norm_three_linear_critic_penalty_four(self):
        critic = unit_linear_critic(3.0)
        real = toy_batch(seed=1, batch=4)
        fake = relaxed_batch(seed=2, batch=4)
        gp = gradient_penalty(critic, real, fake, np.random.default_rng(0))
        assert gp.item() == pytest.approx(4.0, abs=1e-9)

    def test_penalty_nonnegative(self):
        critic = GraphCritic(conv_widths=(6, 5), readout_width=7, bottleneck_width=4, rng=5)
        gp = gradient_penalty(
            critic, toy_batch(seed=3), relaxed_batch(seed=4), np.random.default_rng(1)
        )
        assert gp.item() >= 0.0

    def test_shape_mismatch_rejected(self):
        critic = unit_linear_critic()
        xr, ar = toy_batch(batch=2)
        xf, af = relaxed_batch(batch=3)
        with pytest.raises(ag.ShapeError):
            gradient_penalty(critic, (xr, ar), (xf, af), np.random.default_rng(0))


class TestWganLosses:
    def test_zero_critic_analytic_values(self):
        critic = GraphCritic(rng=0)
        for p in critic.parameters():
            p.data[:] = 0.0
        real = toy_batch(seed=1, batch=4)
        fake = relaxed_batch(seed=2, batch=4)
        lam = 10.0
        closs = critic_loss(critic, real, fake, lam, np.random.default_rng(0))
        assert closs.item() == pytest.approx(lam * 1.0, abs=1e-9)
        gen_loss = generator_adversarial_loss(critic, Tensor(fake[0]), Tensor(fake[1]))
        assert gen_loss.item() == 0.0

    def test_identical_batches_unit_critic_wasserstein_zero(self):
        critic = unit_linear_critic(1.0)
        batch = toy_batch(seed=1, batch=4)
        closs = critic_loss(critic, batch, batch, 10.0, np.random.default_rng(0))
        # Wasserstein gap is 0 and the unit-norm penalty is 0
        assert closs.item() == pytest.approx(0.0, abs=1e-10)

    def test_critic_training_decreases_loss(self):
        critic = GraphCritic(conv_widths=(8, 6), readout_width=10, bottleneck_width=4, rng=7)
        real = toy_batch(seed=1, batch=4)
        fake = relaxed_batch(seed=2, batch=4)
        opt = ag.Adam(critic.parameters(), lr=1e-3)
        losses = []
        for step in range(50):
            loss = critic_loss(critic, real, fake, 10.0, np.random.default_rng(123))
            losses.append(loss.item())
            ag.backward(loss)
            opt.step()
        drops = sum(1 for a, b in zip(losses, losses[1:]) if b <= a + 1e-12)
        assert drops >= 45
        assert losses[-1] < losses[0]

    def test_fused_loss_matches_decomposed_form(self):
        critic = GraphCritic(conv_widths=(8, 6), readout_width=10, bottleneck_width=4, rng=3)
        real = toy_batch(seed=1, batch=4)
        fake = relaxed_batch(seed=2, batch=4)
        lam = 10.0
        fused = critic_loss(critic, real, fake, lam, np.random.default_rng(7))
        sr, _ = critic.forward(*real)
        sf, _ = critic.forward(*fake)
        gp = gradient_penalty(critic, real, fake, np.random.default_rng(7))
        expected = float(sf.data.mean() - sr.data.mean() + lam * gp.item())
        assert fused.item() == pytest.approx(expected, rel=1e-12)

    def test_critic_loss_gradient_vs_finite_differences(self):
        critic = GraphCritic(conv_widths=(6, 5), readout_width=7, bottleneck_width=4, rng=9)
        real = toy_batch(seed=3, batch=2)
        fake = relaxed_batch(seed=4, batch=2)

        def loss():
            return critic_loss(critic, real, fake, 10.0, np.random.default_rng(55))

        fd_check_params(loss, critic.parameters(), max_coords=20)


class TestAgents:
    def test_mse_example(self):
        agent = reward_agent(rng=0)
        x, a = toy_batch(batch=1)
        # force a deterministic prediction 0.7 via the head bias
        for p in agent.parameters():
            p.data[:] = 0.0
        agent.params["head_b"].data[:] = np.log(0.7 / 0.3)
        loss = agent_loss(agent, x, a, np.array([0.5]))
        assert loss.item() == pytest.approx(0.04, abs=1e-12)

    def test_perfect_prediction_zero_loss(self):
        agent = reward_agent(rng=1)
        x, a = toy_batch(batch=2)
        preds, _ = agent.forward(x, a)
        loss = agent_loss(agent, x, a, preds.data.copy())
        assert loss.item() == pytest.approx(0.0, abs=1e-15)

    def test_length_mismatch_rejected(self):
        agent = reward_agent(rng=1)
        x, a = toy_batch(batch=2)
        with pytest.raises(ag.ShapeError, match="predictions"):
            agent_loss(agent, x, a, np.array([0.5]))

    def test_agent_loss_gradient_vs_finite_differences(self):
        agent = GraphCritic(conv_widths=(6, 5), readout_width=7, bottleneck_width=4,
                            head="sigmoid", rng=11)
        x, a = toy_batch(seed=6, batch=2)
        targets = np.array([0.3, 0.8])

        def loss():
            return agent_loss(agent, x, a, targets)

        fd_check_params(loss, agent.parameters(), max_coords=20)


class TestAggregateReward:
    def test_paper_weights_constant_agents(self):
        x, a = toy_batch(batch=3)
        agents = []
        for _ in range(3):
            agent = reward_agent(rng=0)
            for p in agent.parameters():
                p.data[:] = 0.0
            agents.append(agent)  # sigmoid(0) = 0.5 everywhere
        r = aggregate_reward(agents, (0.4, 0.3, 0.3), x, a)
        assert r.item() == pytest.approx(0.5, abs=1e-12)

    def test_single_agent_reduces_to_mean(self):
        agent = reward_agent(rng=3)
        x, a = toy_batch(batch=4)
        preds, _ = agent.forward(x, a)
        r = aggregate_reward([agent], (1.0,), x, a)
        assert r.item() == pytest.approx(float(preds.data.mean()), abs=1e-12)

    def test_reward_strictly_in_unit_interval(self):
        agents = [reward_agent(rng=s) for s in range(3)]
        x, a = toy_batch(batch=4)
        r = aggregate_reward(agents, (0.4, 0.3, 0.3), x, a)
        assert 0.0 < r.item() < 1.0

    def test_weight_sum_violation_rejected(self):
        with pytest.raises(ValueError, match="sum to 1"):
            check_weights((0.5, 0.2))
        with pytest.raises(ValueError, match="sum to 1"):
            aggregate_reward([reward_agent(rng=0)], (0.9,), *toy_batch(batch=1))

    def test_aggregate_gradient_vs_finite_differences(self):
        agents = [
            GraphCritic(conv_widths=(5, 4), readout_width=6, bottleneck_width=3,
                        head="sigmoid", rng=s)
            for s in range(2)
        ]
        x, a = toy_batch(seed=8, batch=2)

        def loss():
            return marl_generator_loss(agents, (0.6, 0.4), Tensor(x), Tensor(a))

        params = [p for ag_ in agents for p in ag_.parameters()]
        fd_check_params(loss, params, max_coords=15)


class TestCombinedLoss:
    def test_endpoints_and_midpoint(self):
        adv = Tensor(0.2)
        marl = Tensor(0.6)
        assert combined_generator_loss(adv, marl, 0.0).item() == pytest.approx(0.6)
        assert combined_generator_loss(adv, marl, 1.0).item() == pytest.approx(0.2)
        assert combined_generator_loss(adv, marl, 0.5).item() == pytest.approx(0.4)

    def test_gamma_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="gamma"):
            combined_generator_loss(Tensor(0.1), Tensor(0.1), 1.5)

    def test_combined_gradient_through_generator(self):
        gen = Generator(n_qubits=4, hidden=(5, 6), rng=13)
        critic = GraphCritic(conv_widths=(5, 4), readout_width=6, bottleneck_width=3, rng=14)
        agent = GraphCritic(conv_widths=(5, 4), readout_width=6, bottleneck_width=3,
                            head="sigmoid", rng=15)
        z = np.random.default_rng(16).integers(0, 2, size=(2, 4))

        def loss():
            x_logits, a_logits = gen.forward(z)
            fx = ag.softmax_lastdim(x_logits)
            fa = ag.softmax_lastdim(a_logits)
            adv = generator_adversarial_loss(critic, fx, fa)
            marl = marl_generator_loss([agent], (1.0,), fx, fa)
            return combined_generator_loss(adv, marl, 0.5)

        fd_check_params(loss, gen.parameters(), max_coords=12)


class TestBottleneckBits:
    def test_saturated_activations_give_ones(self):
        critic = GraphCritic(rng=0)
        for p in critic.parameters():
            p.data[:] = 0.0
        critic.params["bott_b"].data[:] = 50.0  # sigmoid -> 1.0
        x, a = toy_batch(batch=3)
        bits_s = bottleneck_bitstrings(critic, x, a, "stochastic", np.random.default_rng(0))
        bits_t = bottleneck_bitstrings(critic, x, a, "threshold")
        assert (bits_s == 1).all() and (bits_t == 1).all()

    def test_half_activations_balanced(self):
        critic = GraphCritic(rng=0)
        for p in critic.parameters():
            p.data[:] = 0.0  # bottleneck activations 0.5
        x, a = toy_batch(batch=1)
        x = np.repeat(x, 400, axis=0)
        a = np.repeat(a, 400, axis=0)
        bits = bottleneck_bitstrings(critic, x, a, "stochastic", np.random.default_rng(1))
        freq = bits.mean()
        assert abs(freq - 0.5) < 0.01

    def test_threshold_deterministic(self):
        critic = GraphCritic(rng=4)
        x, a = toy_batch(batch=2)
        b1 = bottleneck_bitstrings(critic, x, a, "threshold")
        b2 = bottleneck_bitstrings(critic, x, a, "threshold")
        assert np.array_equal(b1, b2)

    def test_unknown_mode_rejected(self):
        critic = GraphCritic(rng=4)
        x, a = toy_batch(batch=1)
        with pytest.raises(ValueError, match="mode"):
            bottleneck_bitstrings(critic, x, a, "median", np.random.default_rng(0))
