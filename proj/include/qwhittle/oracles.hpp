#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qwhittle/core.hpp"

namespace qwhittle {

// Fixed point of the single-arm Bellman equations with passive reward r(s,0)+lambda.
struct SubsidizedSolution {
    double lambda = 0.0;
    std::vector<double> v;  // per state
    std::vector<double> q;  // per (state, action), index s*2+a
    int iterations = 0;

    double q_at(StateId s, ActionFlag a) const { return q[static_cast<size_t>(s) * 2 + a]; }
};

SubsidizedSolution solve_subsidized_arm(const ArmModel& arm, double lambda, double gamma,
                                        double tol = 1e-9,
                                        const std::vector<double>* warm_start = nullptr);

// Root of q_lambda(x,1) - q_lambda(x,0) by bisection on lambda.
double whittle_bisection(const ArmModel& arm, StateId x, double gamma, double tol = 1e-6);

struct IndexabilityViolation {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    StateId state = 0;  // left the passive set as lambda increased
};

struct IndexabilityReport {
    bool indexable = true;
    std::vector<IndexabilityViolation> violations;
    std::vector<std::vector<StateId>> passive_sets;  // one per grid point
};

IndexabilityReport indexability_check(const ArmModel& arm, const std::vector<double>& lambda_grid,
                                      double gamma, double tol = 1e-9);

// Deterministic stationary policy on the coupled chain: one M-subset per joint state,
// encoded as an index into the lexicographic enumeration of M-subsets.
struct PolicySpec {
    std::vector<int> action_ids;  // per joint state id
};

struct ValueFunctionCoupled {
    std::vector<double> v;  // per joint state id
};

// Joint-state indexing and M-subset enumeration for exact coupled solvers.
class CoupledModel {
  public:
    CoupledModel(const BanditInstance& instance, std::int64_t max_states = 1 << 20,
                 std::int64_t max_state_actions = std::int64_t(1) << 26);

    std::int64_t joint_state_count() const { return joint_count_; }
    int action_count() const { return static_cast<int>(subsets_.size()); }
    const std::vector<int>& subset(int action_id) const { return subsets_[action_id]; }
    const BanditInstance& instance() const { return instance_; }

    JointState decode(std::int64_t id) const;
    std::int64_t encode(const JointState& joint) const;

    double joint_reward(const JointState& joint, int action_id) const;
    // Applies f(next_joint_id, probability) over the sparse support of the joint kernel.
    void for_each_successor(const JointState& joint, int action_id,
                            const std::function<void(std::int64_t, double)>& f) const;

  private:
    const BanditInstance& instance_;
    std::int64_t joint_count_ = 1;
    std::vector<std::int64_t> strides_;
    std::vector<std::vector<int>> subsets_;
};

std::pair<ValueFunctionCoupled, PolicySpec> coupled_value_iteration(const CoupledModel& model,
                                                                    double tol = 1e-8);

ValueFunctionCoupled evaluate_policy(const CoupledModel& model, const PolicySpec& policy,
                                     double tol = 1e-8);

struct BreResult {
    double value = 0.0;
    std::int64_t excluded_states = 0;  // |V*| below the division guard
};

BreResult bellman_relative_error(const ValueFunctionCoupled& v_pi,
                                 const ValueFunctionCoupled& v_star, double guard = 1e-9);

// Greedy index policy: per joint state, top-M arms by index value with
// deterministic lexicographic tie-breaking (value desc, arm index asc).
PolicySpec index_policy(const CoupledModel& model,
                        const std::vector<std::vector<double>>& per_arm_indices);

// Fraction of joint states where the learned top-M set differs from the oracle's.
double misordering_fraction(const CoupledModel& model,
                            const std::vector<std::vector<double>>& learned,
                            const std::vector<std::vector<double>>& oracle);

// Per-state bisection indices for every arm of an instance.
std::vector<std::vector<double>> oracle_index_table(const BanditInstance& instance,
                                                    double tol = 1e-6);

}  // namespace qwhittle
