#pragma once

#include "qwhittle/core.hpp"

namespace qwhittle {

struct RestartParams {
    double x = 0.9;  // advance probability of the passive chain
    double y = 0.9;  // reward base, r(s,0) = y^(s+1)
    int state_count = 5;
};

struct DeadlineParams {
    int t_max = 12;
    int b_max = 9;
    double cost = 0.8;
    double penalty_coeff = 0.2;
};

struct DeadlineState {
    int t = 0;
    int b = 0;
};

struct CircularParams {
    int state_count = 4;
    double stay_prob = 0.6;
    std::vector<double> reward_vector;  // defaults to -1 at state 0, +1 at the last state

    static CircularParams small_instance();
    static CircularParams large_instance(int state_count = 50);
};

// Active action restarts the arm to state 0; passive advances with probability x
// (capped at the top state) or falls back to state 0. Rewards: r(s,0)=y^(s+1), r(s,1)=0.
ArmModel restart_arm(const RestartParams& params);

// Job scheduling arm on states (t deadline, b workload), flat id t*(b_max+1)+b.
ArmModel deadline_arm(const DeadlineParams& params);

inline StateId deadline_flat_id(int t, int b, int b_max) { return t * (b_max + 1) + b; }
inline DeadlineState deadline_unflatten(StateId id, int b_max) {
    return {id / (b_max + 1), id % (b_max + 1)};
}

// Closed-form index for the deadline arm.
double deadline_closed_form_index(int t, int b, double cost, double gamma,
                                  double penalty_coeff = 0.2);

// Ring walk: active steps +1 with prob 1-stay, passive steps -1; reward depends on state only.
ArmModel circular_arm(const CircularParams& params);

// N=3 restart arms, M=1, x=y drawn i.i.d. uniform from {0.4,...,0.9}.
BanditInstance heterogeneous_restart_instance(Rng& rng, double gamma = 0.9);

// N=100 deadline arms in four groups of 25 with costs 0.1/0.3/0.6/0.8, M=25.
BanditInstance heterogeneous_deadline_instance(double gamma = 0.9);

}  // namespace qwhittle
