#include "portwar/agents/mlp.hpp"

#include <cmath>
#include <string>

#include "portwar/errors.hpp"

namespace portwar {

namespace {

void check_batch(const Mlp& net, const QRegressionBatch& batch) {
    const auto n = static_cast<std::size_t>(batch.inputs.cols());
    if (n == 0) throw ContractViolation("q regression: empty batch");
    if (static_cast<std::size_t>(batch.inputs.rows()) != net.input_size()) {
        throw ContractViolation("q regression: input rows do not match network input");
    }
    if (batch.actions.size() != n || static_cast<std::size_t>(batch.targets.size()) != n) {
        throw ContractViolation("q regression: actions/targets do not match batch size");
    }
    for (auto a : batch.actions) {
        if (a >= net.output_size()) throw ContractViolation("q regression: action out of range");
    }
}

}  // namespace

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw ContractViolation("Mlp: need at least input and output widths");
    for (int w : sizes_) {
        if (w < 1) throw ContractViolation("Mlp: layer widths must be >= 1");
    }
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
        layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]), Eigen::VectorXd::Zero(sizes_[i + 1])});
    }
}

Mlp Mlp::random(std::vector<int> sizes, Rng& rng) {
    Mlp net(std::move(sizes));
    for (auto& layer : net.layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.cols()));
        for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
            for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
                layer.weights(r, c) = (2.0 * rng.uniform01() - 1.0) * limit;
            }
        }
    }
    return net;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    return n;
}

Eigen::VectorXd Mlp::forward(std::span<const double> input) const {
    if (input.size() != input_size()) {
        throw ContractViolation("Mlp::forward: expected " + std::to_string(input_size()) +
                                " inputs, got " + std::to_string(input.size()));
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::VectorXd z = layers_[i].weights * a + layers_[i].bias;
        a = (i + 1 < layers_.size()) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    return a;
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& inputs) const {
    if (static_cast<std::size_t>(inputs.rows()) != input_size()) {
        throw ContractViolation("Mlp::forward_batch: input size mismatch");
    }
    Eigen::MatrixXd a = inputs;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = (layers_[i].weights * a).colwise() + layers_[i].bias;
        a = (i + 1 < layers_.size()) ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
    }
    return a;
}

bool Mlp::all_finite() const {
    for (const auto& l : layers_) {
        if (!l.weights.allFinite() || !l.bias.allFinite()) return false;
    }
    return true;
}

std::vector<int> dqn_layer_sizes(std::size_t obs_size, std::size_t action_count, int hidden_width) {
    return {static_cast<int>(obs_size), hidden_width, hidden_width, static_cast<int>(action_count)};
}

Eigen::VectorXd mlp_forward(const Mlp& params, const ObsVector& obs) {
    return params.forward(obs.values);
}

double q_regression_loss(const Mlp& net, const QRegressionBatch& batch) {
    check_batch(net, batch);
    const Eigen::MatrixXd q = net.forward_batch(batch.inputs);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const double err = batch.targets(i) - q(static_cast<Eigen::Index>(batch.actions[static_cast<std::size_t>(i)]), i);
        sum += err * err;
    }
    return sum / static_cast<double>(q.cols());
}

double q_regression_gradient(const Mlp& net, const QRegressionBatch& batch,
                             std::vector<DenseLayer>& gradient) {
    check_batch(net, batch);
    const auto& layers = net.layers();
    const Eigen::Index n = batch.inputs.cols();

    // activations[0] is the input; activations[i+1] the output of layer i.
    std::vector<Eigen::MatrixXd> activations;
    activations.reserve(layers.size() + 1);
    activations.push_back(batch.inputs);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        Eigen::MatrixXd z = (layers[i].weights * activations.back()).colwise() + layers[i].bias;
        if (i + 1 < layers.size()) z = z.cwiseMax(0.0);
        activations.push_back(std::move(z));
    }

    const Eigen::MatrixXd& q = activations.back();
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), n);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto a = static_cast<Eigen::Index>(batch.actions[static_cast<std::size_t>(i)]);
        const double err = batch.targets(i) - q(a, i);
        sum += err * err;
        delta(a, i) = -2.0 * err / static_cast<double>(n);
    }

    gradient.resize(layers.size());
    for (std::size_t k = layers.size(); k-- > 0;) {
        gradient[k].weights = delta * activations[k].transpose();
        gradient[k].bias = delta.rowwise().sum();
        if (k > 0) {
            Eigen::MatrixXd back = layers[k].weights.transpose() * delta;
            // ReLU derivative, read off the post-activation (zero where inactive).
            delta = back.cwiseProduct((activations[k].array() > 0.0).cast<double>().matrix());
        }
    }
    return sum / static_cast<double>(n);
}

void sgd_step(Mlp& net, const std::vector<DenseLayer>& gradient, double learning_rate) {
    auto& layers = net.layers();
    if (gradient.size() != layers.size()) throw ContractViolation("sgd_step: gradient shape mismatch");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        layers[i].weights -= learning_rate * gradient[i].weights;
        layers[i].bias -= learning_rate * gradient[i].bias;
    }
}

}  // namespace portwar
