#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "autopower/errors.hpp"

namespace autopower {

/// Dense row-major matrix, just big enough for the regressors here.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data).subspan(r * cols, cols);
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
};

/// L2-regularized linear model. The penalty is applied to internally
/// standardized features (mean 0, population variance 1, constant columns
/// dropped); the intercept is unpenalized. Weights are reported in the
/// original feature scale.
struct LinearModel {
    std::vector<double> weights;
    double intercept = 0.0;
    double l2_lambda = 0.0;

    bool operator==(const LinearModel&) const = default;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf value

    bool operator==(const TreeNode&) const = default;
};

/// One regression tree with axis-aligned threshold splits. Node 0 is the
/// root; a sample goes left when x[feature] < threshold.
struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const;

    bool operator==(const RegressionTree&) const = default;
};

/// Gradient-boosted regression-tree ensemble with squared-error loss.
/// Prediction is base_score + learning_rate * sum of tree outputs.
struct TreeEnsemble {
    std::vector<RegressionTree> trees;
    double learning_rate = 0.1;
    double base_score = 0.0;
    int max_depth = 3;
    int n_trees = 100;
    int min_samples_leaf = 2;
    int n_features = 0;

    bool operator==(const TreeEnsemble&) const = default;
};

struct RegressorParams {
    double l2_lambda = 1.0;
    int n_trees = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    int min_samples_leaf = 2;

    /// Documented ranges: l2_lambda >= 0, n_trees >= 0, max_depth >= 1,
    /// learning_rate in (0,1], min_samples_leaf >= 1.
    void validate() const;

    bool operator==(const RegressorParams&) const = default;
};

/// Solves the ridge normal equations for X (n x d) and y (n). Deterministic;
/// permuting training rows does not change the result. Throws ModelError on
/// dimension mismatch, non-finite input, or a singular system with
/// l2_lambda = 0.
LinearModel fit_linear(const Matrix& X, std::span<const double> y, double l2_lambda);

double predict_linear(const LinearModel& model, std::span<const double> x);

/// Classic first-order gradient boosting: base_score = mean(y); each round
/// fits one tree to the residuals with greedy variance-reduction splits.
/// Candidate thresholds are midpoints of consecutive distinct feature
/// values; ties break toward the lowest feature index, then the lowest
/// threshold. No subsampling, deterministic, row-order invariant.
TreeEnsemble fit_gbrt(const Matrix& X, std::span<const double> y,
                      const RegressorParams& params);

double predict_gbrt(const TreeEnsemble& model, std::span<const double> x);

// JSON serialization with explicit tree structure, for bundle embedding and
// golden-file tests.
std::string linear_to_json_text(const LinearModel& model);
LinearModel linear_from_json_text(const std::string& text);
std::string ensemble_to_json_text(const TreeEnsemble& model);
TreeEnsemble ensemble_from_json_text(const std::string& text);

} // namespace autopower
