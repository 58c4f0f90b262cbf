#include "splab/learn.hpp"

#include "splab/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace splab {

using nlohmann::json;

void Matrix::push_row(std::span<const double> values)
{
    if (rows_ == 0 && cols_ == 0)
        cols_ = values.size();
    if (values.size() != cols_)
        throw std::invalid_argument("Matrix: row width mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

double pinball_loss(double y, double yhat, double tau)
{
    return (tau - (y < yhat ? 1.0 : 0.0)) * (y - yhat);
}

namespace {

// Cumulative weight may miss tau by roundoff when tau sits on a step.
constexpr double kQuantileTol = 1e-12;

void check_tau(double tau)
{
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("quantile level must lie in (0, 1)");
}

} // namespace

double weighted_quantile(std::vector<std::pair<double, double>> sample, double tau)
{
    check_tau(tau);
    if (sample.empty())
        throw std::invalid_argument("weighted_quantile: empty sample");
    std::sort(sample.begin(), sample.end());
    double total = 0.0;
    for (const auto& s : sample)
        total += s.second;
    const double target = (tau - kQuantileTol) * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        cum += sample[i].second;
        // Equal values form a single step of the CDF.
        if (i + 1 < sample.size() && sample[i + 1].first == sample[i].first)
            continue;
        if (cum >= target)
            return sample[i].first;
    }
    return sample.back().first;
}

double empirical_quantile(std::vector<double> values, double tau)
{
    check_tau(tau);
    if (values.empty())
        throw std::invalid_argument("empirical_quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    // Smallest k with k/n >= tau.
    for (std::size_t k = 1; k <= values.size(); ++k)
        if (static_cast<double>(k) >= (tau - kQuantileTol) * n)
            return values[k - 1];
    return values.back();
}

std::size_t RegressionTree::leaf(std::span<const double> x) const
{
    std::size_t k = 0;
    while (nodes[k].feature >= 0) {
        const auto& node = nodes[k];
        k = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                  : node.right);
    }
    return k;
}

std::span<const double> RegressionTree::leaf_payload(std::size_t node) const
{
    const auto& n = nodes[node];
    return {payload.data() + n.begin, n.end - n.begin};
}

json RegressionTree::to_json() const
{
    json rows = json::array();
    for (const auto& n : nodes)
        rows.push_back({n.feature, n.threshold, n.left, n.right, n.begin, n.end, n.value});
    return {{"nodes", std::move(rows)}, {"payload", payload}};
}

RegressionTree RegressionTree::from_json(const json& j)
{
    RegressionTree tree;
    for (const auto& r : j.at("nodes")) {
        TreeNode n;
        n.feature = r.at(0).get<std::int32_t>();
        n.threshold = r.at(1).get<double>();
        n.left = r.at(2).get<std::int32_t>();
        n.right = r.at(3).get<std::int32_t>();
        n.begin = r.at(4).get<std::uint32_t>();
        n.end = r.at(5).get<std::uint32_t>();
        n.value = r.at(6).get<double>();
        tree.nodes.push_back(n);
    }
    tree.payload = j.at("payload").get<std::vector<double>>();
    if (tree.nodes.empty())
        throw std::invalid_argument("tree without nodes");
    for (const auto& n : tree.nodes) {
        const auto count = static_cast<std::int32_t>(tree.nodes.size());
        if (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count))
            throw std::invalid_argument("tree child index out of range");
        if (n.begin > n.end || n.end > tree.payload.size())
            throw std::invalid_argument("tree payload range out of bounds");
    }
    return tree;
}

namespace {

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

// Best squared-error split of rows over the candidate features.
std::optional<Split> best_split(const Matrix& x, std::span<const double> y, std::span<const std::uint32_t> rows,
                                std::span<const std::size_t> features, std::size_t min_leaf, double total)
{
    const std::size_t m = rows.size();
    const double base = total * total / static_cast<double>(m);
    std::optional<Split> best;
    std::vector<std::pair<double, double>> pts(m);
    for (const std::size_t f : features) {
        for (std::size_t i = 0; i < m; ++i)
            pts[i] = {x(rows[i], f), y[rows[i]]};
        std::sort(pts.begin(), pts.end());
        if (pts.front().first == pts.back().first)
            continue;
        double left = 0.0;
        for (std::size_t i = 1; i < m; ++i) {
            left += pts[i - 1].second;
            if (i < min_leaf || m - i < min_leaf || pts[i - 1].first == pts[i].first)
                continue;
            const double right = total - left;
            const double gain = left * left / static_cast<double>(i) +
                                right * right / static_cast<double>(m - i) - base;
            if (!best || gain > best->gain) {
                double t = 0.5 * (pts[i - 1].first + pts[i].first);
                if (!(t < pts[i].first))
                    t = pts[i - 1].first;
                best = Split{f, t, gain};
            }
        }
    }
    return best;
}

} // namespace

RegressionTree grow_tree(const Matrix& x, std::span<const double> y, std::vector<std::uint32_t> rows,
                         const TreeParams& params, Rng& rng, std::vector<double>* importance)
{
    if (rows.empty())
        throw std::invalid_argument("grow_tree: no rows");
    const std::size_t d = x.cols();
    const std::size_t min_leaf = std::max<std::size_t>(params.min_leaf, 1);
    const std::size_t mtry = params.mtry == 0 ? d : std::min(params.mtry, d);
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);

    RegressionTree tree;
    struct Task {
        std::size_t node, begin, end, depth;
    };
    tree.nodes.emplace_back();
    std::vector<Task> stack{{0, 0, rows.size(), 0}};
    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();
        const std::span<std::uint32_t> span(rows.data() + task.begin, task.end - task.begin);
        const std::size_t m = span.size();

        double sum = 0.0, sq = 0.0;
        double lo = y[span[0]], hi = lo;
        for (const auto r : span) {
            sum += y[r];
            sq += y[r] * y[r];
            lo = std::min(lo, y[r]);
            hi = std::max(hi, y[r]);
        }
        std::optional<Split> split;
        if (m >= 2 * min_leaf && lo < hi && (params.max_depth == 0 || task.depth < params.max_depth)) {
            for (std::size_t k = 0; k < mtry && mtry < d; ++k)
                std::swap(order[k], order[k + rng.index(d - k)]);
            split = best_split(x, y, span, std::span(order).first(mtry), min_leaf, sum);
            const double sse = sq - sum * sum / static_cast<double>(m);
            if (split && !(split->gain > 1e-12 * std::max(sse, 0.0)))
                split.reset();
        }

        if (!split) {
            auto& node = tree.nodes[task.node];
            node.begin = static_cast<std::uint32_t>(tree.payload.size());
            for (const auto r : span)
                tree.payload.push_back(y[r]);
            std::sort(tree.payload.begin() + node.begin, tree.payload.end());
            node.end = static_cast<std::uint32_t>(tree.payload.size());
            node.value = sum / static_cast<double>(m);
            continue;
        }

        if (importance)
            (*importance)[split->feature] += split->gain;
        const auto mid = std::stable_partition(span.begin(), span.end(), [&](std::uint32_t r) {
            return x(r, split->feature) <= split->threshold;
        });
        const std::size_t cut = task.begin + static_cast<std::size_t>(mid - span.begin());
        const auto left = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& node = tree.nodes[task.node];
        node.feature = static_cast<std::int32_t>(split->feature);
        node.threshold = split->threshold;
        node.left = left;
        node.right = left + 1;
        stack.push_back({static_cast<std::size_t>(left + 1), cut, task.end, task.depth + 1});
        stack.push_back({static_cast<std::size_t>(left), task.begin, cut, task.depth + 1});
    }
    return tree;
}

namespace {

void check_training_data(const Matrix& x, std::span<const double> y)
{
    if (x.rows() < 2)
        throw std::invalid_argument("training needs at least two rows");
    if (y.size() != x.rows())
        throw std::invalid_argument("response length does not match the row count");
    for (const double v : y)
        if (!std::isfinite(v))
            throw std::invalid_argument("response values must be finite");
}

template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& body)
{
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers)
                    body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

json forest_params_json(const ForestParams& p)
{
    return {{"trees", p.trees}, {"min_leaf", p.min_leaf}, {"mtry", p.mtry}, {"bootstrap", p.bootstrap},
            {"seed", p.seed}};
}

} // namespace

QuantileForest QuantileForest::fit(const Matrix& x, std::span<const double> y, const ForestParams& params)
{
    check_training_data(x, y);
    if (params.trees == 0)
        throw std::invalid_argument("forest needs at least one tree");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    QuantileForest forest;
    forest.params_ = params;
    forest.params_.mtry = params.mtry == 0 ? std::max<std::size_t>(1, (d + 2) / 3) : params.mtry;
    forest.num_features_ = d;
    forest.num_rows_ = n;
    forest.trees_.resize(params.trees);
    forest.bootstrap_.resize(params.trees);
    std::vector<std::vector<double>> importance(params.trees, std::vector<double>(d, 0.0));

    const TreeParams tree_params{params.min_leaf, 0, forest.params_.mtry};
    parallel_for(params.trees, params.workers, [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, t));
        std::vector<std::uint32_t> rows(n);
        if (params.bootstrap) {
            for (auto& r : rows)
                r = static_cast<std::uint32_t>(rng.index(n));
            std::sort(rows.begin(), rows.end());
        } else {
            std::iota(rows.begin(), rows.end(), 0u);
        }
        forest.bootstrap_[t] = rows;
        forest.trees_[t] = grow_tree(x, y, std::move(rows), tree_params, rng, &importance[t]);
    });

    forest.importance_.assign(d, 0.0);
    for (const auto& imp : importance)
        for (std::size_t f = 0; f < d; ++f)
            forest.importance_[f] += imp[f];
    return forest;
}

double QuantileForest::predict_quantile(std::span<const double> x, double tau) const
{
    if (x.size() != num_features_)
        throw std::invalid_argument("feature vector does not match the model schema");
    std::vector<std::pair<double, double>> sample;
    for (const auto& tree : trees_) {
        const auto leaf = tree.leaf_payload(tree.leaf(x));
        const double w = 1.0 / static_cast<double>(leaf.size());
        for (const double v : leaf)
            sample.emplace_back(v, w);
    }
    // The common 1/B factor does not move the quantile.
    return weighted_quantile(std::move(sample), tau);
}

std::vector<std::optional<double>> QuantileForest::oob_predict(const Matrix& x, double tau) const
{
    if (x.rows() != num_rows_ || x.cols() != num_features_)
        throw std::invalid_argument("oob_predict needs the training matrix");
    std::vector<std::vector<char>> in_bag(trees_.size(), std::vector<char>(num_rows_, 0));
    for (std::size_t t = 0; t < trees_.size(); ++t)
        for (const auto r : bootstrap_[t])
            in_bag[t][r] = 1;

    std::vector<std::optional<double>> out(num_rows_);
    std::vector<std::pair<double, double>> sample;
    for (std::size_t i = 0; i < num_rows_; ++i) {
        sample.clear();
        for (std::size_t t = 0; t < trees_.size(); ++t) {
            if (in_bag[t][i])
                continue;
            const auto leaf = trees_[t].leaf_payload(trees_[t].leaf(x.row(i)));
            const double w = 1.0 / static_cast<double>(leaf.size());
            for (const double v : leaf)
                sample.emplace_back(v, w);
        }
        if (!sample.empty())
            out[i] = weighted_quantile(sample, tau);
    }
    return out;
}

std::vector<double> QuantileForest::feature_importance(bool* uniform) const
{
    const double total = std::accumulate(importance_.begin(), importance_.end(), 0.0);
    std::vector<double> out(num_features_);
    const bool none = !(total > 0.0);
    for (std::size_t f = 0; f < num_features_; ++f)
        out[f] = none ? 1.0 / static_cast<double>(num_features_) : importance_[f] / total;
    if (uniform)
        *uniform = none;
    return out;
}

json QuantileForest::to_json() const
{
    json trees = json::array();
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        auto j = trees_[t].to_json();
        j["bootstrap"] = bootstrap_[t];
        trees.push_back(std::move(j));
    }
    return {{"format", "splab-qrf/1"},
            {"params", forest_params_json(params_)},
            {"num_features", num_features_},
            {"num_rows", num_rows_},
            {"importance", importance_},
            {"trees", std::move(trees)}};
}

QuantileForest QuantileForest::from_json(const json& j)
{
    if (j.at("format").get<std::string>() != "splab-qrf/1")
        throw std::invalid_argument("unknown forest format");
    QuantileForest f;
    const auto& p = j.at("params");
    f.params_.trees = p.at("trees").get<std::size_t>();
    f.params_.min_leaf = p.at("min_leaf").get<std::size_t>();
    f.params_.mtry = p.at("mtry").get<std::size_t>();
    f.params_.bootstrap = p.at("bootstrap").get<bool>();
    f.params_.seed = p.at("seed").get<std::uint64_t>();
    f.num_features_ = j.at("num_features").get<std::size_t>();
    f.num_rows_ = j.at("num_rows").get<std::size_t>();
    f.importance_ = j.at("importance").get<std::vector<double>>();
    for (const auto& t : j.at("trees")) {
        f.trees_.push_back(RegressionTree::from_json(t));
        f.bootstrap_.push_back(t.at("bootstrap").get<std::vector<std::uint32_t>>());
        for (const auto r : f.bootstrap_.back())
            if (r >= f.num_rows_)
                throw std::invalid_argument("bootstrap index out of range");
    }
    if (f.importance_.size() != f.num_features_ || f.trees_.size() != f.params_.trees)
        throw std::invalid_argument("forest document is inconsistent");
    return f;
}

BoostedQuantileModel BoostedQuantileModel::fit(const Matrix& x, std::span<const double> y, double tau,
                                               const BoostParams& params)
{
    check_training_data(x, y);
    check_tau(tau);
    const std::size_t n = x.rows();
    BoostedQuantileModel model;
    model.params_ = params;
    model.tau_ = tau;
    model.init_ = empirical_quantile({y.begin(), y.end()}, tau);

    std::vector<double> f(n, model.init_);
    auto mean_loss = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += pinball_loss(y[i], f[i], tau);
        return s / static_cast<double>(n);
    };
    model.loss_.push_back(mean_loss());

    const std::size_t sub =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(params.subsample * static_cast<double>(n))),
                                1, n);
    const TreeParams tree_params{params.min_leaf, params.max_depth, 0};
    std::vector<double> grad(n);
    std::vector<std::uint32_t> perm(n);
    for (std::size_t m = 0; m < params.stages; ++m) {
        Rng rng(derive_seed(params.seed, m));
        std::iota(perm.begin(), perm.end(), 0u);
        for (std::size_t k = 0; k < sub; ++k)
            std::swap(perm[k], perm[k + rng.index(n - k)]);
        std::vector<std::uint32_t> rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(sub));
        std::sort(rows.begin(), rows.end());
        for (std::size_t i = 0; i < n; ++i)
            grad[i] = tau - (y[i] < f[i] ? 1.0 : 0.0);

        RegressionTree tree = grow_tree(x, grad, std::move(rows), tree_params, rng);
        // Leaf values minimize the pinball loss of the residuals of every
        // training row in the leaf, so a shrunk step cannot raise the loss.
        std::vector<std::size_t> leaf_of(n);
        std::map<std::size_t, std::vector<double>> residuals;
        for (std::size_t i = 0; i < n; ++i) {
            leaf_of[i] = tree.leaf(x.row(i));
            residuals[leaf_of[i]].push_back(y[i] - f[i]);
        }
        for (auto& node : tree.nodes) {
            node.begin = node.end = 0;
            node.value = 0.0;
        }
        for (auto& [leaf, r] : residuals)
            tree.nodes[leaf].value = empirical_quantile(std::move(r), tau);
        tree.payload.clear();
        for (std::size_t i = 0; i < n; ++i)
            f[i] += params.shrinkage * tree.nodes[leaf_of[i]].value;
        model.trees_.push_back(std::move(tree));
        model.loss_.push_back(mean_loss());
    }
    return model;
}

double BoostedQuantileModel::predict(std::span<const double> x) const
{
    double v = init_;
    for (const auto& tree : trees_)
        v += params_.shrinkage * tree.nodes[tree.leaf(x)].value;
    return v;
}

json BoostedQuantileModel::to_json() const
{
    json trees = json::array();
    for (const auto& t : trees_)
        trees.push_back(t.to_json());
    return {{"format", "splab-sgbqr/1"},
            {"params",
             {{"stages", params_.stages},
              {"shrinkage", params_.shrinkage},
              {"subsample", params_.subsample},
              {"max_depth", params_.max_depth},
              {"min_leaf", params_.min_leaf},
              {"seed", params_.seed}}},
            {"tau", tau_},
            {"init", init_},
            {"training_loss", loss_},
            {"trees", std::move(trees)}};
}

BoostedQuantileModel BoostedQuantileModel::from_json(const json& j)
{
    if (j.at("format").get<std::string>() != "splab-sgbqr/1")
        throw std::invalid_argument("unknown boosted model format");
    BoostedQuantileModel m;
    const auto& p = j.at("params");
    m.params_.stages = p.at("stages").get<std::size_t>();
    m.params_.shrinkage = p.at("shrinkage").get<double>();
    m.params_.subsample = p.at("subsample").get<double>();
    m.params_.max_depth = p.at("max_depth").get<std::size_t>();
    m.params_.min_leaf = p.at("min_leaf").get<std::size_t>();
    m.params_.seed = p.at("seed").get<std::uint64_t>();
    m.tau_ = j.at("tau").get<double>();
    m.init_ = j.at("init").get<double>();
    m.loss_ = j.at("training_loss").get<std::vector<double>>();
    for (const auto& t : j.at("trees"))
        m.trees_.push_back(RegressionTree::from_json(t));
    return m;
}

SplitResult stratified_split(const std::vector<std::string>& families, double ratio, std::uint64_t seed)
{
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw std::invalid_argument("split ratio must lie in (0, 1]");
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < families.size(); ++i) {
        if (families[i].empty())
            throw std::invalid_argument("row " + std::to_string(i) + " has no family label");
        groups[families[i]].push_back(i);
    }
    SplitResult out;
    Rng rng(seed);
    for (auto& [family, rows] : groups) {
        const std::size_t k = rows.size();
        if (k == 1) {
            out.train.push_back(rows[0]);
            out.warnings.push_back("family '" + family + "' has a single row; it goes to the training set");
            continue;
        }
        const auto take = std::min(k, static_cast<std::size_t>(std::floor(ratio * static_cast<double>(k) + 0.5 + 1e-9)));
        for (std::size_t i = 0; i < take; ++i)
            std::swap(rows[i], rows[i + rng.index(k - i)]);
        out.train.insert(out.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
        out.test.insert(out.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::string_view learner_name(Learner l)
{
    return l == Learner::Qrf ? "qrf" : "sgbqr";
}

std::optional<Learner> parse_learner(std::string_view name)
{
    if (name == "qrf")
        return Learner::Qrf;
    if (name == "sgbqr" || name == "sgb")
        return Learner::Sgb;
    return std::nullopt;
}

RuleId argmax_rule(const RuleScores& scores)
{
    std::size_t best = 0;
    for (std::size_t r = 1; r < scores.size(); ++r)
        if (scores[r] > scores[best])
            best = r;
    return kAllRules[best];
}

Selector Selector::train(const Matrix& x, const std::array<std::vector<double>, kAllRules.size()>& targets,
                         const SelectorParams& params)
{
    check_tau(params.tau);
    Selector s;
    s.params_ = params;
    s.schema_hash_ = feature_schema_hash();
    for (std::size_t r = 0; r < kAllRules.size(); ++r) {
        const std::uint64_t seed = derive_seed(params.seed, r);
        if (params.learner == Learner::Qrf) {
            auto fp = params.forest;
            fp.seed = seed;
            s.forests_.push_back(QuantileForest::fit(x, targets[r], fp));
        } else {
            auto bp = params.boost;
            bp.seed = seed;
            s.boosted_.push_back(BoostedQuantileModel::fit(x, targets[r], params.tau, bp));
        }
    }
    return s;
}

RuleScores Selector::predict(std::span<const double> x) const
{
    RuleScores out{};
    for (std::size_t r = 0; r < kAllRules.size(); ++r)
        out[r] = params_.learner == Learner::Qrf ? forests_[r].predict_quantile(x, params_.tau)
                                                 : boosted_[r].predict(x);
    return out;
}

std::vector<RuleScores> Selector::oob_predict(const Matrix& x) const
{
    std::vector<RuleScores> out(x.rows());
    if (params_.learner != Learner::Qrf) {
        for (std::size_t i = 0; i < x.rows(); ++i)
            out[i] = predict(x.row(i));
        return out;
    }
    for (std::size_t r = 0; r < kAllRules.size(); ++r) {
        const auto oob = forests_[r].oob_predict(x, params_.tau);
        for (std::size_t i = 0; i < x.rows(); ++i)
            out[i][r] = oob[i] ? *oob[i] : forests_[r].predict_quantile(x.row(i), params_.tau);
    }
    return out;
}

json Selector::to_json() const
{
    json models = json::array();
    for (const auto& f : forests_)
        models.push_back(f.to_json());
    for (const auto& b : boosted_)
        models.push_back(b.to_json());
    return {{"format", "splab-selector/1"},
            {"schema_hash", schema_hash_},
            {"tau", params_.tau},
            {"learner", learner_name(params_.learner)},
            {"seed", params_.seed},
            {"rules", [] {
                 json names = json::array();
                 for (const auto r : kAllRules)
                     names.push_back(rule_name(r));
                 return names;
             }()},
            {"models", std::move(models)}};
}

Selector Selector::from_json(const json& j, std::uint64_t expected_schema)
{
    try {
        if (j.at("format").get<std::string>() != "splab-selector/1")
            throw std::invalid_argument("unknown selector format");
        Selector s;
        s.schema_hash_ = j.at("schema_hash").get<std::uint64_t>();
        if (s.schema_hash_ != expected_schema)
            throw std::invalid_argument("selector was trained on a different feature schema");
        s.params_.tau = j.at("tau").get<double>();
        check_tau(s.params_.tau);
        const auto learner = parse_learner(j.at("learner").get<std::string>());
        if (!learner)
            throw std::invalid_argument("unknown learner");
        s.params_.learner = *learner;
        s.params_.seed = j.at("seed").get<std::uint64_t>();
        const auto& models = j.at("models");
        if (models.size() != kAllRules.size())
            throw std::invalid_argument("selector needs one model per rule");
        for (const auto& m : models) {
            if (s.params_.learner == Learner::Qrf)
                s.forests_.push_back(QuantileForest::from_json(m));
            else
                s.boosted_.push_back(BoostedQuantileModel::from_json(m));
        }
        if (!s.forests_.empty())
            s.params_.forest = s.forests_[0].params();
        return s;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed selector document: ") + e.what());
    }
}

} // namespace splab
