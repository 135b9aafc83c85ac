#include "portwar/agents/dqn.hpp"

#include <cmath>

#include "portwar/errors.hpp"

namespace portwar {

QRegressionBatch dqn_targets(const Mlp& target, std::span<const Transition* const> batch,
                             const AgentConfig& config) {
    if (batch.empty()) throw ContractViolation("dqn: empty minibatch");
    const auto n = static_cast<Eigen::Index>(batch.size());
    const auto d = static_cast<Eigen::Index>(target.input_size());

    QRegressionBatch out;
    out.inputs.resize(d, n);
    out.targets.resize(n);
    out.actions.reserve(batch.size());
    Eigen::MatrixXd next(d, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Transition& tr = *batch[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(tr.s.size()) != d || static_cast<Eigen::Index>(tr.s_next.size()) != d) {
            throw ContractViolation("dqn: observation size does not match network input");
        }
        out.inputs.col(i) = Eigen::Map<const Eigen::VectorXd>(tr.s.values.data(), d);
        next.col(i) = Eigen::Map<const Eigen::VectorXd>(tr.s_next.values.data(), d);
        out.actions.push_back(tr.a);
    }
    const Eigen::MatrixXd q_next = target.forward_batch(next);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Transition& tr = *batch[static_cast<std::size_t>(i)];
        const double bootstrap = tr.terminal ? 0.0 : q_next.col(i).maxCoeff();
        out.targets(i) = tr.r + config.gamma * bootstrap;
    }
    return out;
}

double dqn_train_step(Mlp& online, const Mlp& target, std::span<const Transition* const> batch,
                      const AgentConfig& config) {
    const QRegressionBatch regression = dqn_targets(target, batch, config);
    std::vector<DenseLayer> gradient;
    const double loss = q_regression_gradient(online, regression, gradient);
    if (!std::isfinite(loss)) throw TrainingDivergence("dqn: non-finite loss");
    sgd_step(online, gradient, config.alpha);
    if (!online.all_finite()) throw TrainingDivergence("dqn: non-finite parameters after update");
    return loss;
}

void sync_target(const Mlp& online, Mlp& target) {
    if (online.sizes() != target.sizes() && !target.sizes().empty()) {
        throw ContractViolation("sync_target: network shapes differ");
    }
    target = online;
}

}  // namespace portwar
