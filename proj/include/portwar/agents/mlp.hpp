#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "portwar/observe.hpp"
#include "portwar/rng.hpp"

namespace portwar {

struct DenseLayer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;

    bool operator==(const DenseLayer& o) const {
        return weights.rows() == o.weights.rows() && weights.cols() == o.weights.cols() &&
               bias.size() == o.bias.size() && weights == o.weights && bias == o.bias;
    }
};

/// Fully connected network, ReLU on hidden layers, linear output.
class Mlp {
public:
    Mlp() = default;

    /// Zero-initialized network with the given layer widths (input first).
    explicit Mlp(std::vector<int> sizes);

    /// He-uniform weights, zero biases.
    static Mlp random(std::vector<int> sizes, Rng& rng);

    const std::vector<int>& sizes() const { return sizes_; }
    std::size_t input_size() const { return sizes_.empty() ? 0 : static_cast<std::size_t>(sizes_.front()); }
    std::size_t output_size() const { return sizes_.empty() ? 0 : static_cast<std::size_t>(sizes_.back()); }
    std::size_t parameter_count() const;

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    /// Throws ContractViolation on input-size mismatch.
    Eigen::VectorXd forward(std::span<const double> input) const;

    /// Column-per-sample batch forward pass.
    Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

    bool all_finite() const;
    bool operator==(const Mlp&) const = default;

private:
    std::vector<int> sizes_;
    std::vector<DenseLayer> layers_;
};

/// input -> hidden -> hidden -> actions
std::vector<int> dqn_layer_sizes(std::size_t obs_size, std::size_t action_count, int hidden_width);

Eigen::VectorXd mlp_forward(const Mlp& params, const ObsVector& obs);

/// Regression of Q(s)[a] toward fixed targets y. Inputs are column-per-sample.
struct QRegressionBatch {
    Eigen::MatrixXd inputs;
    std::vector<std::size_t> actions;
    Eigen::VectorXd targets;
};

/// mean_i (y_i - Q(s_i)[a_i])^2
double q_regression_loss(const Mlp& net, const QRegressionBatch& batch);

/// Loss and its gradient with respect to every weight and bias.
double q_regression_gradient(const Mlp& net, const QRegressionBatch& batch,
                             std::vector<DenseLayer>& gradient);

void sgd_step(Mlp& net, const std::vector<DenseLayer>& gradient, double learning_rate);

}  // namespace portwar
