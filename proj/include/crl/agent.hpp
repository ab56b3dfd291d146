#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "crl/net.hpp"
#include "crl/noise.hpp"
#include "crl/optim.hpp"
#include "crl/replay.hpp"
#include "crl/rng.hpp"

namespace crl {

struct AgentConfig {
    int obs_dim = kObsDim;
    int hidden = 128;
    int batch_size = 128;
    std::size_t replay_capacity = 100000;
    double gamma = 0.99;        // discount
    double eta = 1e-3;          // target smooth factor
    double actor_lr = 1e-4;
    double critic_lr = 1e-4;
    double u_max = 50.0;        // physical action scale [N]
    double ou_theta = 0.15;
    double ou_sigma = 0.2;
    double init_final_scale = 1e-3;
    double ewc_lambda = 1.0;
    double ewc_gamma = 0.9;     // online Fisher decay
    int fisher_batch = 128;
    std::size_t fisher_samples = 100000;
};

/// Consolidated anchor after a finished task: parameters theta* and the
/// decayed running diagonal Fisher F*.
struct FisherSnapshot {
    std::vector<double> anchor;
    std::vector<double> fisher;
    int task_count = 0;
};

/// Deterministic-policy actor-critic with target copies and a replay ring.
struct Agent {
    AgentConfig cfg;
    DenseNet actor;
    DenseNet critic;
    DenseNet actor_target;
    DenseNet critic_target;
    OptState actor_opt;
    OptState critic_opt;
    OuNoise noise;
    ReplayBuffer buffer;
    std::optional<FisherSnapshot> snapshot;

    Agent(const AgentConfig& c, Rng& init_rng)
        : cfg(c),
          actor(make_actor_net(c.obs_dim, c.hidden)),
          critic(make_critic_net(c.obs_dim, 1, c.hidden)),
          actor_target(actor),
          critic_target(critic),
          actor_opt(make_opt(actor.param_count(), c.actor_lr)),
          critic_opt(make_opt(critic.param_count(), c.critic_lr)),
          buffer(c.replay_capacity) {
        init_uniform(actor, init_rng, c.init_final_scale);
        init_uniform(critic, init_rng, 1.0);
        actor_target = actor;
        critic_target = critic;
        noise.theta = c.ou_theta;
        noise.sigma = c.ou_sigma;
    }
};

/// Normalized action in [-1, 1]. In exploration mode the OU sample is added
/// before clamping; evaluation consumes no randomness.
inline double act(Agent& agent, std::span<const double> obs, bool explore, Rng& rng) {
    double a = forward(agent.actor, obs)[0];
    if (explore) a = std::clamp(a + ou_sample(agent.noise, rng), -1.0, 1.0);
    return a;
}

namespace detail {

inline std::vector<double> critic_input(std::span<const double> obs, double action) {
    std::vector<double> in(obs.begin(), obs.end());
    in.push_back(action);
    return in;
}

}  // namespace detail

/// One temporal-difference step on the critic over a sampled batch. Targets
/// come from the target copies; returns the pre-step mean squared error.
inline double critic_update(Agent& agent, std::span<const Transition* const> batch) {
    if (batch.empty()) throw std::invalid_argument("critic_update: empty batch");
    const double m = static_cast<double>(batch.size());
    std::vector<double> grad(agent.critic.param_count(), 0.0);
    double loss = 0.0;
    for (const Transition* t : batch) {
        const double a_next = forward(agent.actor_target, t->next_obs)[0];
        const double q_next = forward(agent.critic_target, detail::critic_input(t->next_obs, a_next))[0];
        const double target = t->reward + agent.cfg.gamma * (t->done ? 0.0 : 1.0) * q_next;

        ForwardCache cache;
        const double q = forward(agent.critic, detail::critic_input(t->obs, t->action), &cache)[0];
        const double err = q - target;
        loss += err * err / m;
        const auto res = backward(agent.critic, cache, std::vector<double>{2.0 * err / m});
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += res.param_grad[i];
    }
    opt_step(agent.critic_opt, agent.critic.theta, grad);
    return loss;
}

/// Quadratic consolidation penalty (lambda/2) * sum gamma F*_j (theta_j - theta*_j)^2.
inline double ewc_penalty(const FisherSnapshot& snap, const std::vector<double>& theta,
                          double lambda, double gamma_online) {
    if (snap.anchor.size() != theta.size() || snap.fisher.size() != theta.size())
        throw std::invalid_argument("ewc_penalty: length mismatch");
    double p = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double d = theta[i] - snap.anchor[i];
        p += snap.fisher[i] * d * d;
    }
    return 0.5 * lambda * gamma_online * p;
}

struct ActorObjective {
    double value = 0.0;            // -mean Q + penalty
    std::vector<double> gradient;  // d value / d theta
};

/// Objective and exact gradient of the actor step: -mean_batch Q(s, mu(s))
/// through the chain dQ/da * dmu/dtheta, plus the consolidation penalty
/// gradient lambda gamma F* (theta - theta*) when a snapshot exists.
inline ActorObjective actor_objective_gradient(const Agent& agent,
                                               std::span<const Transition* const> batch,
                                               const FisherSnapshot* snap, double lambda,
                                               double gamma_online) {
    if (batch.empty()) throw std::invalid_argument("actor update: empty batch");
    const double m = static_cast<double>(batch.size());
    ActorObjective out;
    out.gradient.assign(agent.actor.param_count(), 0.0);
    double mean_q = 0.0;
    for (const Transition* t : batch) {
        ForwardCache actor_cache;
        const double a = forward(agent.actor, t->obs, &actor_cache)[0];
        ForwardCache critic_cache;
        const double q = forward(agent.critic, detail::critic_input(t->obs, a), &critic_cache)[0];
        mean_q += q / m;

        const auto critic_back = backward(agent.critic, critic_cache, std::vector<double>{1.0});
        const double dq_da = critic_back.input_grad[agent.cfg.obs_dim];
        const auto actor_back = backward(agent.actor, actor_cache, std::vector<double>{-dq_da / m});
        for (std::size_t i = 0; i < out.gradient.size(); ++i)
            out.gradient[i] += actor_back.param_grad[i];
    }

    out.value = -mean_q;
    if (snap) {
        out.value += ewc_penalty(*snap, agent.actor.theta, lambda, gamma_online);
        const double c = lambda * gamma_online;
        for (std::size_t i = 0; i < out.gradient.size(); ++i)
            out.gradient[i] += c * snap->fisher[i] * (agent.actor.theta[i] - snap->anchor[i]);
    }
    return out;
}

/// Deterministic policy-gradient step on the actor. The critic is left
/// untouched; both target copies are smoothed afterwards. Returns the
/// pre-step objective.
inline double actor_update(Agent& agent, std::span<const Transition* const> batch,
                           const FisherSnapshot* snap, double lambda, double gamma_online) {
    const ActorObjective obj = actor_objective_gradient(agent, batch, snap, lambda, gamma_online);
    opt_step(agent.actor_opt, agent.actor.theta, obj.gradient);
    soft_update(agent.actor_target.theta, agent.actor.theta, agent.cfg.eta);
    soft_update(agent.critic_target.theta, agent.critic.theta, agent.cfg.eta);
    return obj.value;
}

/// Diagonal Fisher estimate of the deterministic policy: mean squared
/// per-parameter gradient of the actor output over buffer states. States are
/// consumed in storage order, capped at n_samples, in chunks of n_batch.
inline std::vector<double> compute_fisher(const Agent& agent, int n_batch, std::size_t n_samples) {
    if (agent.buffer.empty()) throw std::invalid_argument("compute_fisher: empty buffer");
    if (n_batch < 1) throw std::invalid_argument("compute_fisher: n_batch must be >= 1");
    const std::size_t count = std::min(n_samples, agent.buffer.size());
    std::vector<double> fisher(agent.actor.param_count(), 0.0);
    for (std::size_t start = 0; start < count; start += n_batch) {
        const std::size_t end = std::min(count, start + n_batch);
        for (std::size_t i = start; i < end; ++i) {
            ForwardCache cache;
            forward(agent.actor, agent.buffer[i].obs, &cache);
            const auto res = backward(agent.actor, cache, std::vector<double>{1.0});
            for (std::size_t j = 0; j < fisher.size(); ++j)
                fisher[j] += res.param_grad[j] * res.param_grad[j];
        }
    }
    for (double& f : fisher) f /= static_cast<double>(count);
    return fisher;
}

/// End-of-task consolidation: F* <- gamma F*_prev + F_t (zero prior on the
/// first task), anchor <- current parameters.
inline FisherSnapshot consolidate_task(const std::optional<FisherSnapshot>& prev,
                                       const std::vector<double>& theta_now,
                                       const std::vector<double>& fisher_t, double gamma_online) {
    if (theta_now.size() != fisher_t.size())
        throw std::invalid_argument("consolidate_task: length mismatch");
    FisherSnapshot next;
    next.anchor = theta_now;
    next.fisher = fisher_t;
    next.task_count = 1;
    if (prev) {
        if (prev->fisher.size() != fisher_t.size())
            throw std::invalid_argument("consolidate_task: length mismatch with prior snapshot");
        for (std::size_t i = 0; i < next.fisher.size(); ++i)
            next.fisher[i] += gamma_online * prev->fisher[i];
        next.task_count = prev->task_count + 1;
    }
    return next;
}

}  // namespace crl
