#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homeokit/geometry.hpp"

namespace homeokit {

/// Parameters of the virtual-flock decision engine. Lengths are in patches,
/// times in timesteps.
struct CdmConfig {
    double ctx_mult = 185.0;       // gain on the attractor gradient
    double d = 30.0;               // virtual goal projection distance
    int g_update = 25;             // virtual goal refresh period
    double r = 8.0;                // neighbourhood radius (also the lattice cut-off)
    double world = 140.0;          // square world side; coordinates live in [0, world - 1]
    int n_agents = 30;
    Vec2 init_pos{15.0, 72.0};
    double init_jitter = 2.0;      // agents start within this radius of init_pos
    double init_heading = 0.0;
    double max_speed = 1.5;
    double dt = 1.0;

    // Lattice (flock) force.
    double d_lattice = 4.0;
    double lattice_cutoff = 8.0;   // interaction range of the lattice term (<= r)
    double epsilon = 0.1;          // sigma-norm smoothing
    double h = 0.2;                // bump function plateau
    double lattice_a = 0.3;        // attraction plateau beyond the lattice spacing
    double lattice_b = 1.0;        // repulsion plateau below it
    double lattice_gain = 1.0;
    double consensus_gain = 0.05;

    // Navigational feedback towards the virtual goal.
    double c1 = 0.005;
    double c2 = 0.02;

    // Decision readout.
    double readout_sigma_mult = 2.0;
    double readout_fraction = 0.5;

    void validate() const;
};

struct VirtualAgent {
    Vec2 q;                 // position
    Vec2 p;                 // velocity
    double heading = 0.0;   // radians; retained while the agent is at rest
    Vec2 goal;
    int goal_age = 0;       // timesteps since the goal was last projected
};

struct Attractor {
    Vec2 mu;
    double sigma = 15.0;
    double amplitude = 0.0;
    std::string label;
};

struct CdmState {
    std::vector<VirtualAgent> agents;
    std::vector<Attractor> attractors;
    std::int64_t tick = 0;

    friend bool operator==(const CdmState&, const CdmState&);
};

/// The two-attractor layout: charge at (58, 34), temperature at (58, 110).
std::vector<Attractor> default_attractors();

CdmState init_cdm(const CdmConfig& config, std::vector<Attractor> attractors, std::uint64_t seed);

/// Circular mean of the neighbours' headings; falls back to the agent's own
/// heading when there are no neighbours or their headings cancel.
double average_heading(const VirtualAgent& agent, std::span<const VirtualAgent> neighbors);

/// Goal projected `d` ahead along `phi`, clamped to the world.
Vec2 project_goal(Vec2 q, double phi, double d, double world);

/// Refreshes the agent's goal if it is due (goal_age >= g_update).
/// Returns true if the goal changed.
bool update_virtual_goal(VirtualAgent& agent, double phi, double d, int g_update, double world);

double context_field(std::span<const Attractor> attractors, Vec2 q);
Vec2 context_force(std::span<const Attractor> attractors, Vec2 q, double ctx_mult);

double sigma_norm(Vec2 z, double epsilon);
double sigma_norm(double distance, double epsilon);
double bump(double z, double h);
/// Pairwise action function with cut-off: zero at the lattice spacing,
/// repulsive below it, attractive above it and vanishing beyond r.
double lattice_action(double z_sigma, const CdmConfig& config);

Vec2 flock_force(const VirtualAgent& agent, std::span<const VirtualAgent> neighbors, const CdmConfig& config);
Vec2 navigational_feedback(const VirtualAgent& agent, double c1, double c2);

/// Indices of agents within radius `r` of agent `self` (excluding it).
std::vector<std::size_t> neighbors_of(std::span<const VirtualAgent> agents, std::size_t self, double r);

/// One Euler step of every agent. Forces read only the pre-step snapshot, so
/// the per-agent loop runs in parallel; the result does not depend on the
/// thread count.
void step_cdm(CdmState& state, std::span<const double> amplitudes, const CdmConfig& config);

/// Single-threaded reference for step_cdm; bitwise-identical results.
void step_cdm_serial(CdmState& state, std::span<const double> amplitudes, const CdmConfig& config);

struct CdmReadout {
    std::vector<double> proportions;
    std::vector<int> signals;
};

CdmReadout read_signals(const CdmState& state, const CdmConfig& config);

}  // namespace homeokit
