#include "autopower/regress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json_util.hpp"

namespace autopower {

using detail::json;

namespace {

void check_finite(const Matrix& X, std::span<const double> y) {
    for (double v : X.data)
        if (!std::isfinite(v)) throw ModelError("fit: non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v)) throw ModelError("fit: non-finite target value");
}

// Canonical row order: sort rows by content (features, then target). Every
// later summation runs in this order, so fitting is invariant to the row
// order of the input, bit for bit.
std::vector<std::size_t> canonical_order(const Matrix& X, std::span<const double> y) {
    std::vector<std::size_t> idx(X.rows);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        auto ra = X.row(a);
        auto rb = X.row(b);
        for (std::size_t c = 0; c < X.cols; ++c) {
            if (ra[c] != rb[c]) return ra[c] < rb[c];
        }
        return y[a] < y[b];
    });
    return idx;
}

// Gaussian elimination with partial pivoting on an augmented system.
// Returns false if a pivot collapses (singular matrix).
bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-12) return false;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * b[c];
        b[i] = s / a[i][i];
    }
    return true;
}

} // namespace

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols) throw ModelError("Matrix::from_rows: ragged rows");
        for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

void RegressorParams::validate() const {
    if (l2_lambda < 0.0 || !std::isfinite(l2_lambda))
        throw InputError("params.l2_lambda: must be >= 0");
    if (n_trees < 0) throw InputError("params.n_trees: must be >= 0");
    if (max_depth < 1) throw InputError("params.max_depth: must be >= 1");
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
        throw InputError("params.learning_rate: must be in (0,1]");
    if (min_samples_leaf < 1) throw InputError("params.min_samples_leaf: must be >= 1");
}

// ---- ridge ----------------------------------------------------------------

LinearModel fit_linear(const Matrix& X, std::span<const double> y, double l2_lambda) {
    if (X.rows == 0 || X.cols == 0) throw ModelError("fit_linear: empty problem");
    if (X.rows != y.size()) throw ModelError("fit_linear: X rows != y size");
    if (l2_lambda < 0.0 || !std::isfinite(l2_lambda))
        throw ModelError("fit_linear: l2_lambda must be >= 0");
    check_finite(X, y);

    const std::size_t n = X.rows;
    const std::size_t d = X.cols;
    std::vector<std::size_t> order = canonical_order(X, y);

    // Per-column mean and population standard deviation.
    std::vector<double> mean(d, 0.0), sigma(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t i : order) s += X.at(i, c);
        mean[c] = s / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i : order) {
            double dlt = X.at(i, c) - mean[c];
            ss += dlt * dlt;
        }
        sigma[c] = std::sqrt(ss / static_cast<double>(n));
    }
    std::vector<std::size_t> kept; // constant columns are dropped
    for (std::size_t c = 0; c < d; ++c)
        if (sigma[c] > 0.0) kept.push_back(c);

    double y_mean = 0.0;
    for (std::size_t i : order) y_mean += y[i];
    y_mean /= static_cast<double>(n);

    LinearModel model;
    model.weights.assign(d, 0.0);
    model.l2_lambda = l2_lambda;
    if (kept.empty()) {
        model.intercept = y_mean;
        return model;
    }

    // Normal equations in standardized coordinates, intercept unpenalized:
    // (Z^T Z + lambda I) w = Z^T (y - mean(y)) with Z = (X - mu) / sigma.
    const std::size_t k = kept.size();
    std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i : order) {
                double za = (X.at(i, kept[a]) - mean[kept[a]]) / sigma[kept[a]];
                double zb = (X.at(i, kept[b]) - mean[kept[b]]) / sigma[kept[b]];
                s += za * zb;
            }
            gram[a][b] = s;
            gram[b][a] = s;
        }
        gram[a][a] += l2_lambda;
        double s = 0.0;
        for (std::size_t i : order) {
            double za = (X.at(i, kept[a]) - mean[kept[a]]) / sigma[kept[a]];
            s += za * (y[i] - y_mean);
        }
        rhs[a] = s;
    }

    if (!solve_dense(gram, rhs)) {
        if (l2_lambda == 0.0)
            throw ModelError("fit_linear: singular system with l2_lambda = 0");
        throw ModelError("fit_linear: singular system");
    }

    model.intercept = y_mean;
    for (std::size_t a = 0; a < k; ++a) {
        model.weights[kept[a]] = rhs[a] / sigma[kept[a]];
        model.intercept -= rhs[a] * mean[kept[a]] / sigma[kept[a]];
    }
    return model;
}

double predict_linear(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        throw ModelError("predict_linear: expected " + std::to_string(model.weights.size()) +
                         " features, got " + std::to_string(x.size()));
    double out = model.intercept;
    for (std::size_t i = 0; i < x.size(); ++i) out += model.weights[i] * x[i];
    return out;
}

// ---- gradient-boosted trees --------------------------------------------------

namespace {

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double sse = 0.0;
};

double mean_of(std::span<const double> residual, const std::vector<std::size_t>& idx) {
    double s = 0.0;
    for (std::size_t i : idx) s += residual[i];
    return s / static_cast<double>(idx.size());
}

// Greedy best split of one node: minimal children SSE, ties to the lowest
// feature index then the lowest threshold. The scan runs in (value,
// residual) order so equal inputs in any row order give identical sums.
SplitChoice best_split(const Matrix& X, std::span<const double> residual,
                       const std::vector<std::size_t>& idx, int min_samples_leaf) {
    SplitChoice best;
    const std::size_t m = idx.size();
    std::vector<std::pair<double, double>> vals(m); // (feature value, residual)
    for (std::size_t f = 0; f < X.cols; ++f) {
        for (std::size_t i = 0; i < m; ++i) vals[i] = {X.at(idx[i], f), residual[idx[i]]};
        std::sort(vals.begin(), vals.end());
        if (vals.front().first == vals.back().first) continue; // constant feature

        double total_sum = 0.0, total_sq = 0.0;
        for (const auto& [v, r] : vals) {
            total_sum += r;
            total_sq += r * r;
        }
        double left_sum = 0.0, left_sq = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            left_sum += vals[i].second;
            left_sq += vals[i].second * vals[i].second;
            if (vals[i].first == vals[i + 1].first) continue; // not a boundary
            const std::size_t nl = i + 1, nr = m - nl;
            if (nl < static_cast<std::size_t>(min_samples_leaf) ||
                nr < static_cast<std::size_t>(min_samples_leaf))
                continue;
            double right_sum = total_sum - left_sum;
            double right_sq = total_sq - left_sq;
            double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                         (right_sq - right_sum * right_sum / static_cast<double>(nr));
            if (!best.found || sse < best.sse) {
                best.found = true;
                best.feature = f;
                best.threshold = (vals[i].first + vals[i + 1].first) / 2.0;
                best.sse = sse;
            }
        }
    }
    return best;
}

int build_node(RegressionTree& tree, const Matrix& X, std::span<const double> residual,
               const std::vector<std::size_t>& idx, int depth, const RegressorParams& params) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    auto [mn, mx] = std::minmax_element(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return residual[a] < residual[b];
    });
    const bool constant = residual[*mn] == residual[*mx];

    SplitChoice split;
    if (depth < params.max_depth && !constant &&
        idx.size() >= 2 * static_cast<std::size_t>(params.min_samples_leaf))
        split = best_split(X, residual, idx, params.min_samples_leaf);

    if (!split.found) {
        tree.nodes[node_id].value = mean_of(residual, idx);
        return node_id;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
        (X.at(i, split.feature) < split.threshold ? left : right).push_back(i);

    tree.nodes[node_id].feature = static_cast<int>(split.feature);
    tree.nodes[node_id].threshold = split.threshold;
    int l = build_node(tree, X, residual, left, depth + 1, params);
    int r = build_node(tree, X, residual, right, depth + 1, params);
    tree.nodes[node_id].left = l;
    tree.nodes[node_id].right = r;
    return node_id;
}

} // namespace

double RegressionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& n = nodes[node];
        node = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[node].value;
}

TreeEnsemble fit_gbrt(const Matrix& X, std::span<const double> y, const RegressorParams& params) {
    if (X.rows == 0) throw ModelError("fit_gbrt: empty training set");
    if (X.rows != y.size()) throw ModelError("fit_gbrt: X rows != y size");
    params.validate();
    check_finite(X, y);

    // Copy rows into canonical order once; everything below is then
    // independent of the caller's row order.
    std::vector<std::size_t> order = canonical_order(X, y);
    Matrix Xc(X.rows, X.cols);
    std::vector<double> yc(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        yc[i] = y[order[i]];
        for (std::size_t c = 0; c < X.cols; ++c) Xc.at(i, c) = X.at(order[i], c);
    }

    TreeEnsemble model;
    model.learning_rate = params.learning_rate;
    model.max_depth = params.max_depth;
    model.n_trees = params.n_trees;
    model.min_samples_leaf = params.min_samples_leaf;
    model.n_features = static_cast<int>(X.cols);

    double sum = 0.0;
    for (double v : yc) sum += v;
    model.base_score = sum / static_cast<double>(X.rows);

    std::vector<double> pred(X.rows, model.base_score);
    std::vector<double> residual(X.rows);
    std::vector<std::size_t> all(X.rows);
    std::iota(all.begin(), all.end(), 0);

    for (int t = 0; t < params.n_trees; ++t) {
        for (std::size_t i = 0; i < X.rows; ++i) residual[i] = yc[i] - pred[i];
        RegressionTree tree;
        build_node(tree, Xc, residual, all, 0, params);
        for (std::size_t i = 0; i < X.rows; ++i)
            pred[i] += params.learning_rate * tree.predict(Xc.row(i));
        model.trees.push_back(std::move(tree));
    }
    return model;
}

double predict_gbrt(const TreeEnsemble& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.n_features)
        throw ModelError("predict_gbrt: expected " + std::to_string(model.n_features) +
                         " features, got " + std::to_string(x.size()));
    double s = 0.0;
    for (const auto& tree : model.trees) s += tree.predict(x);
    return model.base_score + model.learning_rate * s;
}

// ---- serialization --------------------------------------------------------------

namespace {

json node_to_json(const TreeNode& n) {
    json j;
    if (n.feature < 0) {
        j["value"] = n.value;
    } else {
        j["feature"] = n.feature;
        j["threshold"] = n.threshold;
        j["left"] = n.left;
        j["right"] = n.right;
    }
    return j;
}

TreeNode node_from_json(const json& j, const std::string& ctx) {
    TreeNode n;
    if (j.contains("value")) {
        n.value = detail::require_number(j, "value", ctx);
    } else {
        n.feature = static_cast<int>(detail::require_int(j, "feature", ctx));
        n.threshold = detail::require_number(j, "threshold", ctx);
        n.left = static_cast<int>(detail::require_int(j, "left", ctx));
        n.right = static_cast<int>(detail::require_int(j, "right", ctx));
    }
    return n;
}

} // namespace

json linear_to_json(const LinearModel& m) {
    json j;
    j["type"] = "linear";
    j["weights"] = m.weights;
    j["intercept"] = m.intercept;
    j["l2_lambda"] = m.l2_lambda;
    return j;
}

LinearModel linear_from_json(const json& j, const std::string& ctx) {
    LinearModel m;
    for (const auto& w : detail::require_array(j, "weights", ctx)) {
        if (!w.is_number()) throw InputError(ctx + ".weights: expected numbers");
        m.weights.push_back(w.get<double>());
    }
    m.intercept = detail::require_number(j, "intercept", ctx);
    m.l2_lambda = detail::require_number(j, "l2_lambda", ctx);
    return m;
}

json ensemble_to_json(const TreeEnsemble& m) {
    json j;
    j["type"] = "gbrt";
    j["learning_rate"] = m.learning_rate;
    j["base_score"] = m.base_score;
    j["max_depth"] = m.max_depth;
    j["n_trees"] = m.n_trees;
    j["min_samples_leaf"] = m.min_samples_leaf;
    j["n_features"] = m.n_features;
    json trees = json::array();
    for (const auto& tree : m.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) nodes.push_back(node_to_json(n));
        trees.push_back(json{{"nodes", nodes}});
    }
    j["trees"] = trees;
    return j;
}

TreeEnsemble ensemble_from_json(const json& j, const std::string& ctx) {
    TreeEnsemble m;
    m.learning_rate = detail::require_number(j, "learning_rate", ctx);
    m.base_score = detail::require_number(j, "base_score", ctx);
    m.max_depth = static_cast<int>(detail::require_int(j, "max_depth", ctx));
    m.n_trees = static_cast<int>(detail::require_int(j, "n_trees", ctx));
    m.min_samples_leaf = static_cast<int>(detail::require_int(j, "min_samples_leaf", ctx));
    m.n_features = static_cast<int>(detail::require_int(j, "n_features", ctx));
    for (const auto& tj : detail::require_array(j, "trees", ctx)) {
        RegressionTree tree;
        for (const auto& nj : detail::require_array(tj, "nodes", ctx + ".trees[]"))
            tree.nodes.push_back(node_from_json(nj, ctx + ".trees[].nodes[]"));
        if (tree.nodes.empty()) throw InputError(ctx + ": tree with no nodes");
        m.trees.push_back(std::move(tree));
    }
    return m;
}

std::string linear_to_json_text(const LinearModel& model) {
    return detail::dump_canonical(linear_to_json(model));
}

LinearModel linear_from_json_text(const std::string& text) {
    return linear_from_json(detail::parse_json(text, "linear model"), "linear model");
}

std::string ensemble_to_json_text(const TreeEnsemble& model) {
    return detail::dump_canonical(ensemble_to_json(model));
}

TreeEnsemble ensemble_from_json_text(const std::string& text) {
    return ensemble_from_json(detail::parse_json(text, "tree ensemble"), "tree ensemble");
}

} // namespace autopower
