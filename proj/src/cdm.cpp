#include "homeokit/cdm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homeokit/errors.hpp"
#include "homeokit/random.hpp"

namespace homeokit {

void CdmConfig::validate() const {
    if (!(d > 0.0 && r > 0.0 && world > 1.0 && max_speed > 0.0 && dt > 0.0 && d_lattice > 0.0))
        throw ConfigError("cdm: distances, speed and dt must be positive");
    if (!(lattice_cutoff > d_lattice && lattice_cutoff <= r))
        throw ConfigError("cdm: lattice_cutoff must lie in (d_lattice, r]");
    if (!(lattice_a > 0.0 && lattice_b >= lattice_a)) throw ConfigError("cdm: need 0 < lattice_a <= lattice_b");
    if (g_update < 1) throw ConfigError("cdm: g_update must be >= 1");
    if (n_agents < 1) throw ConfigError("cdm: n_agents must be >= 1");
    if (!(epsilon > 0.0) || !(h >= 0.0 && h < 1.0)) throw ConfigError("cdm: need epsilon > 0 and 0 <= h < 1");
    if (!(readout_sigma_mult > 0.0) || !(readout_fraction > 0.0 && readout_fraction <= 1.0))
        throw ConfigError("cdm: invalid readout parameters");
}

bool operator==(const CdmState& a, const CdmState& b) {
    if (a.tick != b.tick || a.agents.size() != b.agents.size() || a.attractors.size() != b.attractors.size())
        return false;
    for (std::size_t i = 0; i < a.agents.size(); ++i) {
        const auto& x = a.agents[i];
        const auto& y = b.agents[i];
        if (!(x.q == y.q && x.p == y.p && x.heading == y.heading && x.goal == y.goal && x.goal_age == y.goal_age))
            return false;
    }
    for (std::size_t j = 0; j < a.attractors.size(); ++j) {
        const auto& x = a.attractors[j];
        const auto& y = b.attractors[j];
        if (!(x.mu == y.mu && x.sigma == y.sigma && x.amplitude == y.amplitude && x.label == y.label)) return false;
    }
    return true;
}

std::vector<Attractor> default_attractors() {
    return {Attractor{{58.0, 34.0}, 15.0, 0.0, "charge"}, Attractor{{58.0, 110.0}, 15.0, 0.0, "temperature"}};
}

namespace {

double clamp_coord(double v, double world) { return std::clamp(v, 0.0, world - 1.0); }

bool inside_world(Vec2 q, double world) {
    return q.x >= 0.0 && q.x <= world - 1.0 && q.y >= 0.0 && q.y <= world - 1.0;
}

}  // namespace

CdmState init_cdm(const CdmConfig& config, std::vector<Attractor> attractors, std::uint64_t seed) {
    config.validate();
    for (const auto& a : attractors) {
        if (!inside_world(a.mu, config.world)) throw ConfigError("cdm: attractor '" + a.label + "' lies outside the world");
        if (!(a.sigma > 0.0)) throw ConfigError("cdm: attractor spread must be positive");
        if (!(a.amplitude >= 0.0 && a.amplitude <= 1.0)) throw ConfigError("cdm: attractor amplitude must be in [0,1]");
    }
    if (!inside_world(config.init_pos, config.world)) throw ConfigError("cdm: init_pos lies outside the world");

    Rng rng = make_rng(seed, RngStream::kCdmInit);
    CdmState state;
    state.attractors = std::move(attractors);
    state.agents.reserve(static_cast<std::size_t>(config.n_agents));
    for (int i = 0; i < config.n_agents; ++i) {
        const double radius = config.init_jitter * std::sqrt(rng.uniform());
        const double angle = rng.uniform(-kPi, kPi);
        VirtualAgent a;
        a.q = {clamp_coord(config.init_pos.x + radius * std::cos(angle), config.world),
               clamp_coord(config.init_pos.y + radius * std::sin(angle), config.world)};
        a.heading = config.init_heading;
        a.goal = project_goal(a.q, a.heading, config.d, config.world);
        // Staggered refresh: agent i first refreshes at tick g_update - (i mod g_update).
        a.goal_age = i % config.g_update;
        state.agents.push_back(a);
    }
    return state;
}

double average_heading(const VirtualAgent& agent, std::span<const VirtualAgent> neighbors) {
    if (neighbors.empty()) return agent.heading;
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& n : neighbors) {
        sx += std::cos(n.heading);
        sy += std::sin(n.heading);
    }
    constexpr double kCancelled = 1e-12;
    if (std::hypot(sx, sy) < kCancelled * static_cast<double>(neighbors.size())) return agent.heading;
    return std::atan2(sy, sx);
}

Vec2 project_goal(Vec2 q, double phi, double d, double world) {
    return {clamp_coord(q.x + d * std::cos(phi), world), clamp_coord(q.y + d * std::sin(phi), world)};
}

bool update_virtual_goal(VirtualAgent& agent, double phi, double d, int g_update, double world) {
    if (agent.goal_age < g_update) return false;
    agent.goal = project_goal(agent.q, phi, d, world);
    agent.goal_age = 0;
    return true;
}

double context_field(std::span<const Attractor> attractors, Vec2 q) {
    double total = 0.0;
    for (const auto& a : attractors) {
        const double var = a.sigma * a.sigma;
        total += a.amplitude / std::sqrt(2.0 * kPi * var) * std::exp(-norm_sq(q - a.mu) / (2.0 * var));
    }
    return total;
}

Vec2 context_force(std::span<const Attractor> attractors, Vec2 q, double ctx_mult) {
    Vec2 grad;
    for (const auto& a : attractors) {
        const double var = a.sigma * a.sigma;
        const double field = a.amplitude / std::sqrt(2.0 * kPi * var) * std::exp(-norm_sq(q - a.mu) / (2.0 * var));
        grad += (field / var) * (a.mu - q);
    }
    return ctx_mult * grad;
}

double sigma_norm(double distance, double epsilon) {
    return (std::sqrt(1.0 + epsilon * distance * distance) - 1.0) / epsilon;
}

double sigma_norm(Vec2 z, double epsilon) { return (std::sqrt(1.0 + epsilon * norm_sq(z)) - 1.0) / epsilon; }

double bump(double z, double h) {
    if (z < 0.0 || z > 1.0) return 0.0;
    if (z < h) return 1.0;
    return 0.5 * (1.0 + std::cos(kPi * (z - h) / (1.0 - h)));
}

double lattice_action(double z_sigma, const CdmConfig& config) {
    const double a = config.lattice_a;
    const double b = config.lattice_b;
    const double c = std::abs(a - b) / std::sqrt(4.0 * a * b);
    const double r_alpha = sigma_norm(config.lattice_cutoff, config.epsilon);
    const double d_alpha = sigma_norm(config.d_lattice, config.epsilon);
    const double s = z_sigma - d_alpha + c;
    const double phi = 0.5 * ((a + b) * s / std::sqrt(1.0 + s * s) + (a - b));
    return bump(z_sigma / r_alpha, config.h) * phi;
}

Vec2 flock_force(const VirtualAgent& agent, std::span<const VirtualAgent> neighbors, const CdmConfig& config) {
    const double r_alpha = sigma_norm(config.lattice_cutoff, config.epsilon);
    Vec2 gradient;
    Vec2 consensus;
    for (const auto& n : neighbors) {
        const Vec2 diff = n.q - agent.q;
        const double z = sigma_norm(diff, config.epsilon);
        const double dist = norm(diff);
        const Vec2 direction = dist > 0.0 ? diff * (1.0 / dist) : Vec2{};
        gradient += lattice_action(z, config) * direction;
        consensus += bump(z / r_alpha, config.h) * (n.p - agent.p);
    }
    return config.lattice_gain * gradient + config.consensus_gain * consensus;
}

Vec2 navigational_feedback(const VirtualAgent& agent, double c1, double c2) {
    // Goal velocity is zero.
    return -c1 * (agent.q - agent.goal) - c2 * agent.p;
}

std::vector<std::size_t> neighbors_of(std::span<const VirtualAgent> agents, std::size_t self, double r) {
    std::vector<std::size_t> out;
    const double r2 = r * r;
    for (std::size_t j = 0; j < agents.size(); ++j) {
        if (j != self && norm_sq(agents[j].q - agents[self].q) <= r2) out.push_back(j);
    }
    return out;
}

namespace {

void apply_amplitudes(CdmState& state, std::span<const double> amplitudes) {
    if (amplitudes.size() != state.attractors.size())
        throw std::invalid_argument("step_cdm: expected " + std::to_string(state.attractors.size()) +
                                    " amplitudes, got " + std::to_string(amplitudes.size()));
    for (double a : amplitudes) {
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("step_cdm: amplitudes must lie in [0,1]");
    }
    for (std::size_t j = 0; j < amplitudes.size(); ++j) state.attractors[j].amplitude = amplitudes[j];
}

// Advances agent i using only the snapshot `prev`.
VirtualAgent advance_agent(std::span<const VirtualAgent> prev, std::size_t i, std::span<const Attractor> attractors,
                           const CdmConfig& config) {
    VirtualAgent a = prev[i];
    std::vector<VirtualAgent> neighbors;
    for (std::size_t j : neighbors_of(prev, i, config.r)) neighbors.push_back(prev[j]);

    update_virtual_goal(a, average_heading(a, neighbors), config.d, config.g_update, config.world);

    const Vec2 u = flock_force(a, neighbors, config) + navigational_feedback(a, config.c1, config.c2) +
                   context_force(attractors, a.q, config.ctx_mult);

    a.p += u * config.dt;
    const double speed = norm(a.p);
    if (speed > config.max_speed) a.p *= config.max_speed / speed;

    a.q += a.p * config.dt;
    const double hi = config.world - 1.0;
    if (a.q.x < 0.0 || a.q.x > hi) {
        a.q.x = std::clamp(a.q.x, 0.0, hi);
        a.p.x = 0.0;
    }
    if (a.q.y < 0.0 || a.q.y > hi) {
        a.q.y = std::clamp(a.q.y, 0.0, hi);
        a.p.y = 0.0;
    }
    constexpr double kAtRest = 1e-12;
    if (norm_sq(a.p) > kAtRest) a.heading = std::atan2(a.p.y, a.p.x);
    ++a.goal_age;
    return a;
}

}  // namespace

void step_cdm_serial(CdmState& state, std::span<const double> amplitudes, const CdmConfig& config) {
    apply_amplitudes(state, amplitudes);
    const std::vector<VirtualAgent> prev = state.agents;
    for (std::size_t i = 0; i < prev.size(); ++i) state.agents[i] = advance_agent(prev, i, state.attractors, config);
    ++state.tick;
}

void step_cdm(CdmState& state, std::span<const double> amplitudes, const CdmConfig& config) {
    apply_amplitudes(state, amplitudes);
    const std::vector<VirtualAgent> prev = state.agents;
    const auto n = static_cast<std::ptrdiff_t>(prev.size());
#pragma omp parallel for schedule(static) if (n >= 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        state.agents[static_cast<std::size_t>(i)] =
            advance_agent(prev, static_cast<std::size_t>(i), state.attractors, config);
    }
    ++state.tick;
}

CdmReadout read_signals(const CdmState& state, const CdmConfig& config) {
    CdmReadout out;
    out.proportions.assign(state.attractors.size(), 0.0);
    out.signals.assign(state.attractors.size(), 0);
    if (state.agents.empty()) return out;
    for (std::size_t j = 0; j < state.attractors.size(); ++j) {
        const auto& a = state.attractors[j];
        const double radius = config.readout_sigma_mult * a.sigma;
        const auto inside = std::count_if(state.agents.begin(), state.agents.end(),
                                          [&](const VirtualAgent& v) { return norm_sq(v.q - a.mu) <= radius * radius; });
        out.proportions[j] = static_cast<double>(inside) / static_cast<double>(state.agents.size());
        out.signals[j] = out.proportions[j] >= config.readout_fraction ? 1 : 0;
    }
    return out;
}

}  // namespace homeokit
