#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "portwar/agents/mlp.hpp"
#include "portwar/agents/qtable.hpp"

namespace portwar::oracles {

MdpResult two_state_mdp(double gamma, double alpha, int sweeps) {
    constexpr int next[2][2] = {{0, 1}, {0, 1}};
    constexpr double reward[2][2] = {{0.0, 1.0}, {2.0, 0.0}};

    MdpResult out;
    auto& q = out.q_star;
    for (int it = 0; it < 10'000; ++it) {
        auto fresh = q;
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                const int n = next[s][a];
                fresh[s][a] = reward[s][a] + gamma * std::max(q[n][0], q[n][1]);
            }
        }
        q = fresh;
    }

    AgentConfig cfg;
    cfg.alpha = alpha;
    cfg.gamma = gamma;
    SparseQTable table(2);
    const DiscreteKey keys[2] = {DiscreteKey{{0}}, DiscreteKey{{1}}};
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int s = 0; s < 2; ++s) {
            for (int a = 0; a < 2; ++a) {
                qtable_update(table, keys[s], static_cast<std::size_t>(a), reward[s][a], keys[next[s][a]],
                              false, cfg);
            }
        }
    }
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
            out.learned[s][a] = table.value(keys[s], static_cast<std::size_t>(a));
            out.max_error = std::max(out.max_error, std::abs(out.learned[s][a] - q[s][a]));
        }
    }
    return out;
}

double gradient_check(int nets, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int k = 0; k < nets; ++k) {
        const int in = static_cast<int>(rng.uniform_int(2, 4));
        const int hidden = static_cast<int>(rng.uniform_int(3, 5));
        const int out = static_cast<int>(rng.uniform_int(2, 3));
        Mlp net = Mlp::random({in, hidden, hidden, out}, rng);
        for (auto& layer : net.layers()) {
            for (int i = 0; i < layer.bias.size(); ++i) layer.bias[i] = rng.uniform01() * 0.2 - 0.1;
        }

        const int n = static_cast<int>(rng.uniform_int(3, 6));
        QRegressionBatch batch{Eigen::MatrixXd(in, n), {}, Eigen::VectorXd(n)};
        for (int i = 0; i < batch.inputs.size(); ++i) batch.inputs.data()[i] = rng.uniform01() * 2 - 1;
        for (int i = 0; i < n; ++i) {
            batch.actions.push_back(static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(out))));
            batch.targets[i] = rng.uniform01() * 4 - 2;
        }

        std::vector<DenseLayer> grad;
        q_regression_gradient(net, batch, grad);

        std::vector<double> analytic, numeric;
        const double h = 1e-6;
        auto probe = [&](double& param, double g) {
            const double saved = param;
            param = saved + h;
            const double up = q_regression_loss(net, batch);
            param = saved - h;
            const double down = q_regression_loss(net, batch);
            param = saved;
            analytic.push_back(g);
            numeric.push_back((up - down) / (2 * h));
        };
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            auto& layer = net.layers()[l];
            for (int i = 0; i < layer.weights.size(); ++i) probe(layer.weights.data()[i], grad[l].weights.data()[i]);
            for (int i = 0; i < layer.bias.size(); ++i) probe(layer.bias[i], grad[l].bias[i]);
        }

        double diff = 0.0, na = 0.0, nn = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
            na += analytic[i] * analytic[i];
            nn += numeric[i] * numeric[i];
        }
        const double denom = std::sqrt(na) + std::sqrt(nn);
        worst = std::max(worst, denom > 0.0 ? std::sqrt(diff) / denom : 0.0);
    }
    return worst;
}

}  // namespace portwar::oracles
