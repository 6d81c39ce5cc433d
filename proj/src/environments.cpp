#include "qwhittle/environments.hpp"

#include <cmath>

namespace qwhittle {

CircularParams CircularParams::small_instance() {
    CircularParams p;
    p.state_count = 4;
    p.reward_vector = {-1.0, 0.0, 0.0, 1.0};
    return p;
}

CircularParams CircularParams::large_instance(int state_count) {
    CircularParams p;
    p.state_count = state_count;
    p.reward_vector.assign(state_count, 0.0);
    p.reward_vector.front() = -1.0;
    p.reward_vector.back() = 1.0;
    return p;
}

ArmModel restart_arm(const RestartParams& params) {
    if (!(params.x > 0.0 && params.x < 1.0) || !(params.y > 0.0 && params.y < 1.0))
        throw InputError("restart parameters must lie in (0,1)");
    const int S = params.state_count;
    std::vector<double> p0(static_cast<size_t>(S) * S, 0.0), p1(static_cast<size_t>(S) * S, 0.0);
    std::vector<double> r0(S), r1(S, 0.0);
    for (int s = 0; s < S; ++s) {
        p0[static_cast<size_t>(s) * S + 0] += 1.0 - params.x;
        p0[static_cast<size_t>(s) * S + std::min(s + 1, S - 1)] += params.x;
        p1[static_cast<size_t>(s) * S + 0] = 1.0;
        r0[s] = std::pow(params.y, s + 1);
    }
    return ArmModel(S, std::move(p0), std::move(p1), std::move(r0), std::move(r1));
}

ArmModel deadline_arm(const DeadlineParams& params) {
    if (params.t_max < 1 || params.b_max < 0) throw InputError("invalid deadline bounds");
    if (params.cost < 0.0 || params.cost > 1.0) throw InputError("cost must lie in [0,1]");
    const int S = (params.t_max + 1) * (params.b_max + 1);
    const auto fid = [&](int t, int b) { return deadline_flat_id(t, b, params.b_max); };
    const auto F = [&](double v) { return params.penalty_coeff * v * v; };
    std::vector<double> p0(static_cast<size_t>(S) * S, 0.0), p1(static_cast<size_t>(S) * S, 0.0);
    std::vector<double> r0(S, 0.0), r1(S, 0.0);
    for (int t = 0; t <= params.t_max; ++t) {
        for (int b = 0; b <= params.b_max; ++b) {
            const int s = fid(t, b);
            for (ActionFlag a : {0, 1}) {
                auto& p = a ? p1 : p0;
                if (t > 1) {
                    p[static_cast<size_t>(s) * S + fid(t - 1, std::max(b - a, 0))] = 1.0;
                } else {
                    // deadline expired (or no job): new job drawn uniformly, (0,0) included
                    for (int j = 0; j < S; ++j) p[static_cast<size_t>(s) * S + j] = 1.0 / S;
                }
                double r = 0.0;
                if (b > 0 && t > 1)
                    r = (1.0 - params.cost) * a;
                else if (b > 0 && t == 1)
                    r = (1.0 - params.cost) * a - F(b - a);
                (a ? r1 : r0)[s] = r;
            }
        }
    }
    return ArmModel(S, std::move(p0), std::move(p1), std::move(r0), std::move(r1));
}

double deadline_closed_form_index(int t, int b, double cost, double gamma, double penalty_coeff) {
    const auto F = [&](double v) { return penalty_coeff * v * v; };
    if (b == 0) return 0.0;
    if (1 <= b && b <= t - 1) return 1.0 - cost;
    return std::pow(gamma, t - 1) * (F(b - t + 1) - F(b - t)) + 1.0 - cost;
}

ArmModel circular_arm(const CircularParams& params) {
    if (!(params.stay_prob > 0.0 && params.stay_prob < 1.0))
        throw InputError("stay probability must lie in (0,1)");
    const int S = params.state_count;
    std::vector<double> rewards = params.reward_vector;
    if (rewards.empty()) {
        rewards.assign(S, 0.0);
        rewards.front() = -1.0;
        rewards.back() = 1.0;
    }
    if (static_cast<int>(rewards.size()) != S) throw InputError("reward vector length mismatch");
    std::vector<double> p0(static_cast<size_t>(S) * S, 0.0), p1(static_cast<size_t>(S) * S, 0.0);
    const double move = 1.0 - params.stay_prob;
    for (int s = 0; s < S; ++s) {
        p1[static_cast<size_t>(s) * S + s] += params.stay_prob;
        p1[static_cast<size_t>(s) * S + (s + 1) % S] += move;
        p0[static_cast<size_t>(s) * S + s] += params.stay_prob;
        p0[static_cast<size_t>(s) * S + (s - 1 + S) % S] += move;
    }
    std::vector<double> r = rewards;
    return ArmModel(S, std::move(p0), std::move(p1), std::move(r), std::move(rewards));
}

BanditInstance heterogeneous_restart_instance(Rng& rng, double gamma) {
    static const double choices[] = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::uniform_int_distribution<int> pick(0, 5);
    std::vector<ArmModel> arms;
    for (int i = 0; i < 3; ++i) {
        const double v = choices[pick(rng)];
        arms.push_back(restart_arm({v, v, 5}));
    }
    return BanditInstance(std::move(arms), 1, gamma);
}

BanditInstance heterogeneous_deadline_instance(double gamma) {
    static const double costs[] = {0.1, 0.3, 0.6, 0.8};
    std::vector<ArmModel> arms;
    arms.reserve(100);
    for (int g = 0; g < 4; ++g) {
        DeadlineParams p;
        p.cost = costs[g];
        ArmModel arm = deadline_arm(p);
        for (int i = 0; i < 25; ++i) arms.push_back(arm);
    }
    return BanditInstance(std::move(arms), 25, gamma);
}

}  // namespace qwhittle
