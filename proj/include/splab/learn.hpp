#pragma once

#include "splab/branching.hpp"
#include "splab/rng.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace splab {

/// Dense row-major feature matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    void push_row(std::span<const double> values);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// (tau - 1{y < yhat}) * (y - yhat).
double pinball_loss(double y, double yhat, double tau);

/// inf{v : F(v) >= tau} for the CDF of the weighted sample; weights need not sum to 1.
double weighted_quantile(std::vector<std::pair<double, double>> sample, double tau);

/// Same with equal weights.
double empirical_quantile(std::vector<double> values, double tau);

struct TreeNode {
    std::int32_t feature = -1; // -1 marks a leaf
    double threshold = 0.0;    // x[feature] <= threshold goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t begin = 0; // leaf payload range
    std::uint32_t end = 0;
    double value = 0.0;      // leaf output
};

struct RegressionTree {
    std::vector<TreeNode> nodes;
    std::vector<double> payload; // training responses per leaf, sorted within each leaf

    std::size_t leaf(std::span<const double> x) const;
    std::span<const double> leaf_payload(std::size_t node) const;
    nlohmann::json to_json() const;
    static RegressionTree from_json(const nlohmann::json& j);
};

struct TreeParams {
    std::size_t min_leaf = 5;
    std::size_t max_depth = 0; // 0: unlimited
    std::size_t mtry = 0;      // features tried per split; 0: all
};

/// CART regression tree on the given rows (repeats allowed) by largest
/// decrease of the squared error. Leaf value is the payload mean. Adds each
/// split's decrease to importance[feature] when importance is given.
RegressionTree grow_tree(const Matrix& x, std::span<const double> y, std::vector<std::uint32_t> rows,
                         const TreeParams& params, Rng& rng, std::vector<double>* importance = nullptr);

struct ForestParams {
    std::size_t trees = 500;
    std::size_t min_leaf = 5;
    std::size_t mtry = 0; // 0: ceil(d / 3)
    bool bootstrap = true;
    std::uint64_t seed = 0;
    std::size_t workers = 1; // result does not depend on it
};

/// Quantile regression forest: leaves keep every training response that
/// reached them, and predictions invert the averaged leaf distributions.
class QuantileForest {
public:
    static QuantileForest fit(const Matrix& x, std::span<const double> y, const ForestParams& params);

    /// Each tree contributes weight 1/B spread evenly over its leaf payload.
    double predict_quantile(std::span<const double> x, double tau) const;

    /// Prediction for training row i from the trees whose bootstrap sample
    /// left it out; x must be the training matrix. Absent for rows in every sample.
    std::vector<std::optional<double>> oob_predict(const Matrix& x, double tau) const;

    /// Total squared-error decrease per feature, normalized to sum 1. A
    /// forest without splits reports the uniform vector and sets *uniform.
    std::vector<double> feature_importance(bool* uniform = nullptr) const;

    std::size_t num_features() const { return num_features_; }
    std::size_t num_trees() const { return trees_.size(); }
    std::size_t num_train_rows() const { return num_rows_; }
    const ForestParams& params() const { return params_; }
    const RegressionTree& tree(std::size_t t) const { return trees_[t]; }
    std::span<const std::uint32_t> bootstrap(std::size_t t) const { return bootstrap_[t]; }

    nlohmann::json to_json() const;
    static QuantileForest from_json(const nlohmann::json& j);

private:
    ForestParams params_;
    std::size_t num_features_ = 0;
    std::size_t num_rows_ = 0;
    std::vector<RegressionTree> trees_;
    std::vector<std::vector<std::uint32_t>> bootstrap_;
    std::vector<double> importance_;
};

struct BoostParams {
    std::size_t stages = 200;
    double shrinkage = 0.1;
    double subsample = 0.5;
    std::size_t max_depth = 4;
    std::size_t min_leaf = 5;
    std::uint64_t seed = 0;
};

/// Stochastic gradient boosting on the pinball loss. Stage trees are grown on
/// a random subsample against the negative gradient; each leaf then takes the
/// tau-quantile of the current residuals of all training rows reaching it.
class BoostedQuantileModel {
public:
    static BoostedQuantileModel fit(const Matrix& x, std::span<const double> y, double tau,
                                    const BoostParams& params);

    double predict(std::span<const double> x) const;
    double tau() const { return tau_; }
    std::size_t num_stages() const { return trees_.size(); }
    /// Mean training pinball loss after 0..M stages.
    const std::vector<double>& training_loss() const { return loss_; }

    nlohmann::json to_json() const;
    static BoostedQuantileModel from_json(const nlohmann::json& j);

private:
    BoostParams params_;
    double tau_ = 0.5;
    double init_ = 0.0;
    std::vector<RegressionTree> trees_;
    std::vector<double> loss_;
};

struct SplitResult {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::vector<std::string> warnings;
};

/// Per family, round-half-up(ratio * k) rows go to train, drawn without
/// replacement. A family of one row goes to train with a warning.
SplitResult stratified_split(const std::vector<std::string>& families, double ratio, std::uint64_t seed);

enum class Learner { Qrf, Sgb };

std::string_view learner_name(Learner l);
std::optional<Learner> parse_learner(std::string_view name);

struct SelectorParams {
    double tau = 0.3;
    Learner learner = Learner::Qrf;
    ForestParams forest;
    BoostParams boost;
    std::uint64_t seed = 0; // per-rule seeds derive from it in rule order
};

using RuleScores = std::array<double, kAllRules.size()>;

/// First rule with the largest score.
RuleId argmax_rule(const RuleScores& scores);

/// One quantile model per rule predicting its normalized pace.
class Selector {
public:
    /// targets[r][i] is the normalized pace of rule r on row i.
    static Selector train(const Matrix& x, const std::array<std::vector<double>, kAllRules.size()>& targets,
                          const SelectorParams& params);

    RuleScores predict(std::span<const double> x) const;
    RuleId select(std::span<const double> x) const { return argmax_rule(predict(x)); }

    /// Out-of-bag scores for every training row; rows without an OOB tree
    /// for some rule fall back to that rule's full-forest prediction.
    std::vector<RuleScores> oob_predict(const Matrix& x) const;

    const SelectorParams& params() const { return params_; }
    std::uint64_t schema_hash() const { return schema_hash_; }
    const std::vector<QuantileForest>& forests() const { return forests_; }

    nlohmann::json to_json() const;
    /// Throws std::invalid_argument when the stored schema hash differs from expected_schema.
    static Selector from_json(const nlohmann::json& j, std::uint64_t expected_schema);

private:
    SelectorParams params_;
    std::uint64_t schema_hash_ = 0;
    std::vector<QuantileForest> forests_;
    std::vector<BoostedQuantileModel> boosted_;
};

} // namespace splab
