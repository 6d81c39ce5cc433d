#include "qwhittle/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qwhittle {

ArmModel::ArmModel(int state_count, std::vector<double> passive_kernel,
                   std::vector<double> active_kernel, std::vector<double> passive_reward,
                   std::vector<double> active_reward)
    : state_count_(state_count),
      passive_kernel_(std::move(passive_kernel)),
      active_kernel_(std::move(active_kernel)),
      passive_reward_(std::move(passive_reward)),
      active_reward_(std::move(active_reward)) {
    if (state_count_ <= 0) throw InputError("state_count must be positive");
    const size_t n = static_cast<size_t>(state_count_);
    if (passive_kernel_.size() != n * n || active_kernel_.size() != n * n)
        throw InputError("kernel size mismatch");
    if (passive_reward_.size() != n || active_reward_.size() != n)
        throw InputError("reward size mismatch");

    for (ActionFlag a : {0, 1}) {
        const auto& k = a ? active_kernel_ : passive_kernel_;
        auto& sup = a ? active_support_ : passive_support_;
        sup.resize(n);
        for (int s = 0; s < state_count_; ++s) {
            double sum = 0.0;
            for (int j = 0; j < state_count_; ++j) {
                double p = k[static_cast<size_t>(s) * n + j];
                if (p < 0.0) throw InputError("negative transition probability");
                sum += p;
                if (p > 0.0) sup[s].emplace_back(j, p);
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw InputError("transition row does not sum to 1");
        }
    }
    for (double r : passive_reward_) max_abs_reward_ = std::max(max_abs_reward_, std::abs(r));
    for (double r : active_reward_) max_abs_reward_ = std::max(max_abs_reward_, std::abs(r));
}

TransitionSample sample_transition(const ArmModel& arm, StateId s, ActionFlag a, Rng& rng) {
    arm.check_state(s);
    if (a != 0 && a != 1) throw InputError("action must be 0 or 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    StateId s_next = arm.state_count() - 1;
    double acc = 0.0;
    for (const auto& [j, p] : arm.support(s, a)) {
        acc += p;
        if (u < acc) {
            s_next = j;
            break;
        }
    }
    TransitionSample out;
    out.s = s;
    out.a = a;
    out.r0 = arm.reward(s, 0);
    out.r1 = arm.reward(s, 1);
    out.s_next = s_next;
    return out;
}

std::vector<int> select_top_m(const std::vector<double>& values, int m, Rng& rng) {
    const int n = static_cast<int>(values.size());
    if (m > n) throw InputError("m exceeds value count");
    std::vector<double> keys(n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (auto& k : keys) k = unif(rng);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (values[i] != values[j]) return values[i] > values[j];
        return keys[i] < keys[j];
    });
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<int> epsilon_greedy_top_m(const std::vector<double>& values, int m, double epsilon,
                                      Rng& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) throw InputError("epsilon must lie in [0,1]");
    const int n = static_cast<int>(values.size());
    if (m > n) throw InputError("m exceeds value count");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) < epsilon) {
        // uniform m-subset via partial Fisher-Yates
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (int i = 0; i < m; ++i) {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(idx[i], idx[pick(rng)]);
        }
        idx.resize(m);
        std::sort(idx.begin(), idx.end());
        return idx;
    }
    return select_top_m(values, m, rng);
}

std::pair<JointState, std::vector<TransitionSample>> run_episode_step(
    const BanditInstance& instance, const JointState& joint, const std::vector<int>& chosen,
    Rng& rng) {
    if (static_cast<int>(chosen.size()) != instance.m_active)
        throw ConstraintError("chosen set size must equal M");
    if (static_cast<int>(joint.size()) != instance.arm_count())
        throw InputError("joint state length mismatch");
    std::vector<char> active(instance.arm_count(), 0);
    for (int i : chosen) {
        if (i < 0 || i >= instance.arm_count()) throw InputError("arm index out of range");
        active[i] = 1;
    }
    JointState next(joint.size());
    std::vector<TransitionSample> samples(joint.size());
    for (int i = 0; i < instance.arm_count(); ++i) {
        samples[i] = sample_transition(instance.arms[i], joint[i], active[i] ? 1 : 0, rng);
        samples[i].arm_index = i;
        next[i] = samples[i].s_next;
    }
    return {std::move(next), std::move(samples)};
}

}  // namespace qwhittle
