#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qwhittle {

using StateId = int;
using ActionFlag = int;  // 0 passive, 1 active
using Rng = std::mt19937_64;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A single arm's finite MDP: dense transition kernels per action and a
// deterministic reward function per (state, action).
class ArmModel {
  public:
    ArmModel(int state_count,
             std::vector<double> passive_kernel,  // row-major S x S
             std::vector<double> active_kernel,
             std::vector<double> passive_reward,  // size S
             std::vector<double> active_reward);

    int state_count() const { return state_count_; }

    double transition(StateId s, ActionFlag a, StateId s_next) const {
        return kernel(a)[static_cast<size_t>(s) * state_count_ + s_next];
    }
    // Row view of the kernel for (s, a).
    const double* transition_row(StateId s, ActionFlag a) const {
        return kernel(a).data() + static_cast<size_t>(s) * state_count_;
    }
    double reward(StateId s, ActionFlag a) const {
        return (a ? active_reward_ : passive_reward_)[s];
    }
    // Nonzero entries of the (s, a) kernel row, for sparse sweeps.
    const std::vector<std::pair<StateId, double>>& support(StateId s, ActionFlag a) const {
        return (a ? active_support_ : passive_support_)[s];
    }
    double max_abs_reward() const { return max_abs_reward_; }

    void check_state(StateId s) const {
        if (s < 0 || s >= state_count_) throw InputError("state id out of range");
    }

  private:
    const std::vector<double>& kernel(ActionFlag a) const {
        return a ? active_kernel_ : passive_kernel_;
    }

    int state_count_;
    std::vector<double> passive_kernel_, active_kernel_;
    std::vector<double> passive_reward_, active_reward_;
    std::vector<std::vector<std::pair<StateId, double>>> passive_support_, active_support_;
    double max_abs_reward_ = 0.0;
};

using JointState = std::vector<StateId>;

struct TransitionSample {
    int arm_index = 0;
    StateId s = 0;
    ActionFlag a = 0;
    double r0 = 0.0;  // reward of the passive action at s
    double r1 = 0.0;  // reward of the active action at s
    StateId s_next = 0;
};

// N arms of which exactly M are activated per step, discounted criterion.
struct BanditInstance {
    std::vector<ArmModel> arms;
    int m_active = 1;
    double discount = 0.9;

    BanditInstance(std::vector<ArmModel> arms_, int m, double gamma)
        : arms(std::move(arms_)), m_active(m), discount(gamma) {
        if (m_active <= 0 || m_active >= static_cast<int>(arms.size()))
            throw InputError("require 0 < M < N");
        if (!(discount > 0.0 && discount < 1.0))
            throw InputError("discount must lie in (0,1)");
    }

    int arm_count() const { return static_cast<int>(arms.size()); }
};

TransitionSample sample_transition(const ArmModel& arm, StateId s, ActionFlag a, Rng& rng);

// Indices of the m largest values; ties broken uniformly at random.
std::vector<int> select_top_m(const std::vector<double>& values, int m, Rng& rng);

// With probability 1-epsilon the greedy top-m set, otherwise a uniform random m-subset.
std::vector<int> epsilon_greedy_top_m(const std::vector<double>& values, int m, double epsilon,
                                      Rng& rng);

// Steps every arm once; active iff its index is in `chosen` (|chosen| must equal M).
std::pair<JointState, std::vector<TransitionSample>> run_episode_step(
    const BanditInstance& instance, const JointState& joint, const std::vector<int>& chosen,
    Rng& rng);

}  // namespace qwhittle
