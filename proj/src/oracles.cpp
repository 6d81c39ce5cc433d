#include "qwhittle/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qwhittle {

namespace {

constexpr int kMaxValueIterations = 2000000;

void bellman_sweep(const ArmModel& arm, double lambda, double gamma,
                   const std::vector<double>& v, std::vector<double>& v_next,
                   std::vector<double>& q) {
    const int S = arm.state_count();
    for (StateId s = 0; s < S; ++s) {
        for (ActionFlag a : {0, 1}) {
            double ev = 0.0;
            for (const auto& [j, p] : arm.support(s, a)) ev += p * v[j];
            q[static_cast<size_t>(s) * 2 + a] =
                arm.reward(s, a) + (a == 0 ? lambda : 0.0) + gamma * ev;
        }
        v_next[s] = std::max(q[static_cast<size_t>(s) * 2], q[static_cast<size_t>(s) * 2 + 1]);
    }
}

}  // namespace

SubsidizedSolution solve_subsidized_arm(const ArmModel& arm, double lambda, double gamma,
                                        double tol, const std::vector<double>* warm_start) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("gamma must lie in (0,1)");
    if (tol <= 0.0) throw InputError("tol must be positive");
    const int S = arm.state_count();
    SubsidizedSolution sol;
    sol.lambda = lambda;
    sol.v = warm_start && static_cast<int>(warm_start->size()) == S ? *warm_start
                                                                    : std::vector<double>(S, 0.0);
    sol.q.assign(static_cast<size_t>(S) * 2, 0.0);
    std::vector<double> v_next(S, 0.0);
    const double stop = tol * (1.0 - gamma) / gamma;
    for (int it = 0; it < kMaxValueIterations; ++it) {
        bellman_sweep(arm, lambda, gamma, sol.v, v_next, sol.q);
        double diff = 0.0;
        for (int s = 0; s < S; ++s) diff = std::max(diff, std::abs(v_next[s] - sol.v[s]));
        sol.v.swap(v_next);
        sol.iterations = it + 1;
        if (diff < stop) return sol;
    }
    throw SolverError("subsidized value iteration did not converge");
}

double whittle_bisection(const ArmModel& arm, StateId x, double gamma, double tol) {
    arm.check_state(x);
    double radius = std::max(arm.max_abs_reward(), 1e-6) * 2.0 / (1.0 - gamma);
    const double inner_tol = std::min(tol * 0.1, 1e-8);
    std::vector<double> warm(arm.state_count(), 0.0);

    auto gap = [&](double lambda) {
        SubsidizedSolution sol = solve_subsidized_arm(arm, lambda, gamma, inner_tol, &warm);
        warm = sol.v;
        return sol.q_at(x, 1) - sol.q_at(x, 0);
    };

    // gap is non-increasing in lambda on indexable arms; expand until the root is bracketed
    double lo = -radius, hi = radius;
    int expansions = 0;
    while (gap(lo) <= 0.0 || gap(hi) >= 0.0) {
        if (++expansions > 10)
            throw SolverError("whittle bisection: no sign change (non-indexable or degenerate)");
        lo *= 2.0;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > tol * 1e-3; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = gap(mid);
        if (std::abs(g) < tol && hi - lo < tol) return mid;
        (g > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

IndexabilityReport indexability_check(const ArmModel& arm, const std::vector<double>& lambda_grid,
                                      double gamma, double tol) {
    for (size_t i = 1; i < lambda_grid.size(); ++i)
        if (lambda_grid[i] <= lambda_grid[i - 1])
            throw InputError("lambda grid must be strictly increasing");
    IndexabilityReport report;
    std::vector<double> warm(arm.state_count(), 0.0);
    std::vector<char> prev;
    double prev_lambda = 0.0;
    for (double lambda : lambda_grid) {
        SubsidizedSolution sol = solve_subsidized_arm(arm, lambda, gamma, tol, &warm);
        warm = sol.v;
        std::vector<char> passive(arm.state_count(), 0);
        std::vector<StateId> members;
        for (StateId s = 0; s < arm.state_count(); ++s) {
            if (sol.q_at(s, 0) >= sol.q_at(s, 1)) {
                passive[s] = 1;
                members.push_back(s);
            }
        }
        if (!prev.empty()) {
            for (StateId s = 0; s < arm.state_count(); ++s) {
                if (prev[s] && !passive[s]) {
                    report.indexable = false;
                    report.violations.push_back({prev_lambda, lambda, s});
                }
            }
        }
        report.passive_sets.push_back(std::move(members));
        prev = std::move(passive);
        prev_lambda = lambda;
    }
    return report;
}

CoupledModel::CoupledModel(const BanditInstance& instance, std::int64_t max_states,
                           std::int64_t max_state_actions)
    : instance_(instance) {
    const int n = instance.arm_count();
    strides_.assign(n, 1);
    for (int i = n - 1; i >= 0; --i) {
        if (i + 1 < n) strides_[i] = strides_[i + 1] * instance.arms[i + 1].state_count();
        joint_count_ *= instance.arms[i].state_count();
        if (joint_count_ > max_states) throw SizeError("coupled state space exceeds budget");
    }
    // lexicographic enumeration of M-subsets of {0..N-1}
    std::vector<int> cur(instance.m_active);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        subsets_.push_back(cur);
        int i = instance.m_active - 1;
        while (i >= 0 && cur[i] == n - instance.m_active + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < instance.m_active; ++j) cur[j] = cur[j - 1] + 1;
    }
    if (joint_count_ * static_cast<std::int64_t>(subsets_.size()) > max_state_actions)
        throw SizeError("coupled state-action space exceeds budget");
}

JointState CoupledModel::decode(std::int64_t id) const {
    JointState joint(instance_.arm_count());
    for (int i = 0; i < instance_.arm_count(); ++i) {
        joint[i] = static_cast<StateId>(id / strides_[i]);
        id %= strides_[i];
    }
    return joint;
}

std::int64_t CoupledModel::encode(const JointState& joint) const {
    std::int64_t id = 0;
    for (int i = 0; i < instance_.arm_count(); ++i) id += strides_[i] * joint[i];
    return id;
}

double CoupledModel::joint_reward(const JointState& joint, int action_id) const {
    const auto& subset = subsets_[action_id];
    double r = 0.0;
    size_t k = 0;
    for (int i = 0; i < instance_.arm_count(); ++i) {
        const bool active = k < subset.size() && subset[k] == i;
        if (active) ++k;
        r += instance_.arms[i].reward(joint[i], active ? 1 : 0);
    }
    return r;
}

void CoupledModel::for_each_successor(const JointState& joint, int action_id,
                                      const std::function<void(std::int64_t, double)>& f) const {
    const auto& subset = subsets_[action_id];
    const int n = instance_.arm_count();
    std::vector<const std::vector<std::pair<StateId, double>>*> rows(n);
    size_t k = 0;
    for (int i = 0; i < n; ++i) {
        const bool active = k < subset.size() && subset[k] == i;
        if (active) ++k;
        rows[i] = &instance_.arms[i].support(joint[i], active ? 1 : 0);
    }
    // depth-first product over per-arm sparse rows
    const std::function<void(int, double, std::int64_t)> descend =
        [&](int depth, double prob, std::int64_t idacc) {
            if (depth == n) {
                f(idacc, prob);
                return;
            }
            for (const auto& [j, p] : *rows[depth])
                descend(depth + 1, prob * p, idacc + strides_[depth] * j);
        };
    descend(0, 1.0, 0);
}

namespace {

// One optimal-Bellman sweep; returns sup-norm change. Greedy policy written when requested.
double coupled_sweep(const CoupledModel& model, std::vector<double>& v, PolicySpec* policy) {
    const double gamma = model.instance().discount;
    std::vector<double> v_next(v.size());
    double diff = 0.0;
    for (std::int64_t id = 0; id < model.joint_state_count(); ++id) {
        const JointState joint = model.decode(id);
        double best = -std::numeric_limits<double>::infinity();
        int best_a = 0;
        for (int a = 0; a < model.action_count(); ++a) {
            double ev = 0.0;
            model.for_each_successor(joint, a,
                                     [&](std::int64_t nid, double p) { ev += p * v[nid]; });
            const double val = model.joint_reward(joint, a) + gamma * ev;
            if (val > best) {
                best = val;
                best_a = a;
            }
        }
        v_next[id] = best;
        if (policy) policy->action_ids[id] = best_a;
        diff = std::max(diff, std::abs(best - v[id]));
    }
    v.swap(v_next);
    return diff;
}

}  // namespace

std::pair<ValueFunctionCoupled, PolicySpec> coupled_value_iteration(const CoupledModel& model,
                                                                    double tol) {
    const double gamma = model.instance().discount;
    ValueFunctionCoupled vf;
    vf.v.assign(model.joint_state_count(), 0.0);
    PolicySpec policy;
    policy.action_ids.assign(model.joint_state_count(), 0);
    const double stop = tol * (1.0 - gamma) / gamma;
    for (int it = 0; it < kMaxValueIterations; ++it) {
        const double diff = coupled_sweep(model, vf.v, &policy);
        if (diff < stop) return {std::move(vf), std::move(policy)};
    }
    throw SolverError("coupled value iteration did not converge");
}

ValueFunctionCoupled evaluate_policy(const CoupledModel& model, const PolicySpec& policy,
                                     double tol) {
    if (static_cast<std::int64_t>(policy.action_ids.size()) != model.joint_state_count())
        throw InputError("policy not defined on every joint state");
    const double gamma = model.instance().discount;
    ValueFunctionCoupled vf;
    vf.v.assign(model.joint_state_count(), 0.0);
    std::vector<double> v_next(vf.v.size());
    const double stop = tol * (1.0 - gamma) / gamma;
    for (int it = 0; it < kMaxValueIterations; ++it) {
        double diff = 0.0;
        for (std::int64_t id = 0; id < model.joint_state_count(); ++id) {
            const JointState joint = model.decode(id);
            const int a = policy.action_ids[id];
            double ev = 0.0;
            model.for_each_successor(joint, a,
                                     [&](std::int64_t nid, double p) { ev += p * vf.v[nid]; });
            v_next[id] = model.joint_reward(joint, a) + gamma * ev;
            diff = std::max(diff, std::abs(v_next[id] - vf.v[id]));
        }
        vf.v.swap(v_next);
        if (diff < stop) return vf;
    }
    throw SolverError("policy evaluation did not converge");
}

BreResult bellman_relative_error(const ValueFunctionCoupled& v_pi,
                                 const ValueFunctionCoupled& v_star, double guard) {
    if (v_pi.v.size() != v_star.v.size()) throw InputError("value functions differ in size");
    BreResult out;
    double sum = 0.0;
    std::int64_t counted = 0;
    for (size_t i = 0; i < v_pi.v.size(); ++i) {
        const double denom = std::abs(v_star.v[i]);
        if (denom < guard) {
            ++out.excluded_states;
            continue;
        }
        sum += std::abs(v_pi.v[i] - v_star.v[i]) / denom;
        ++counted;
    }
    out.value = counted > 0 ? sum / counted : 0.0;
    return out;
}

namespace {

// Top-M arm set under the given per-arm index tables, lexicographic tie-break.
std::vector<int> lexicographic_top_m(const std::vector<std::vector<double>>& indices,
                                     const JointState& joint, int m) {
    const int n = static_cast<int>(indices.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const double vi = indices[i][joint[i]], vj = indices[j][joint[j]];
        if (vi != vj) return vi > vj;
        return i < j;
    });
    order.resize(m);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

PolicySpec index_policy(const CoupledModel& model,
                        const std::vector<std::vector<double>>& per_arm_indices) {
    PolicySpec policy;
    policy.action_ids.assign(model.joint_state_count(), 0);
    const int m = model.instance().m_active;
    for (std::int64_t id = 0; id < model.joint_state_count(); ++id) {
        const JointState joint = model.decode(id);
        const std::vector<int> top = lexicographic_top_m(per_arm_indices, joint, m);
        int found = -1;
        for (int a = 0; a < model.action_count(); ++a) {
            if (model.subset(a) == top) {
                found = a;
                break;
            }
        }
        policy.action_ids[id] = found;
    }
    return policy;
}

double misordering_fraction(const CoupledModel& model,
                            const std::vector<std::vector<double>>& learned,
                            const std::vector<std::vector<double>>& oracle) {
    const int m = model.instance().m_active;
    std::int64_t mismatched = 0;
    for (std::int64_t id = 0; id < model.joint_state_count(); ++id) {
        const JointState joint = model.decode(id);
        if (lexicographic_top_m(learned, joint, m) != lexicographic_top_m(oracle, joint, m))
            ++mismatched;
    }
    return static_cast<double>(mismatched) / static_cast<double>(model.joint_state_count());
}

std::vector<std::vector<double>> oracle_index_table(const BanditInstance& instance, double tol) {
    std::vector<std::vector<double>> table;
    table.reserve(instance.arms.size());
    for (const ArmModel& arm : instance.arms) {
        std::vector<double> row(arm.state_count());
        for (StateId s = 0; s < arm.state_count(); ++s)
            row[s] = whittle_bisection(arm, s, instance.discount, tol);
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace qwhittle
