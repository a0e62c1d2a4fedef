#include "ssakit/grouping.hpp"

#include "ssakit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssakit {

namespace {
constexpr std::string_view kModule = "grouping";
}

Grouping::Grouping(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) {
        throw Error(ErrorCode::kEmptyGrouping, kModule, "grouping must contain a component");
    }
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (indices_.front() < 1) {
        throw Error(ErrorCode::kIndexOutOfRange, kModule, "component numbers start at 1");
    }
}

Grouping Grouping::prefix(int m) {
    if (m < 1) {
        throw Error(ErrorCode::kEmptyGrouping, kModule, "prefix size must be positive");
    }
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) idx[static_cast<std::size_t>(k)] = k + 1;
    return Grouping(std::move(idx));
}

bool Grouping::contains(int k) const { return std::binary_search(indices_.begin(), indices_.end(), k); }

std::string Grouping::label() const {
    if (is_prefix()) return "prefix:" + std::to_string(indices_.size());
    std::string out = "set:";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(indices_[i]);
    }
    return out;
}

double weighted_inner(std::span<const double> y, std::span<const double> z,
                      const AntiDiagonalWeights& w) {
    if (y.size() != z.size() || y.size() != w.size()) {
        throw Error(ErrorCode::kLengthMismatch, kModule,
                    "lengths " + std::to_string(y.size()) + ", " + std::to_string(z.size()) +
                        " and weights " + std::to_string(w.size()) + " differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += static_cast<double>(w[i]) * y[i] * z[i];
    return sum;
}

double weighted_inner(const TimeSeries& y, const TimeSeries& z, const AntiDiagonalWeights& w) {
    return weighted_inner(y.values(), z.values(), w);
}

WCorMatrix wcor_matrix(std::span<const ElementarySeries> components, const AntiDiagonalWeights& w) {
    const auto n = static_cast<Eigen::Index>(components.size());
    WCorMatrix out{Eigen::MatrixXd::Identity(n, n), std::vector<double>(components.size())};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = components[static_cast<std::size_t>(i)].series;
        out.norms[static_cast<std::size_t>(i)] = std::sqrt(weighted_inner(s, s, w));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ni = out.norms[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double nj = out.norms[static_cast<std::size_t>(j)];
            double s = 0.0;
            if (ni > 0.0 && nj > 0.0) {
                s = weighted_inner(components[static_cast<std::size_t>(i)].series,
                                   components[static_cast<std::size_t>(j)].series, w) /
                    (ni * nj);
            }
            out.entries(i, j) = s;
            out.entries(j, i) = s;
        }
    }
    return out;
}

std::vector<int> cluster_complete_linkage(const Eigen::MatrixXd& dissimilarity, int n_clusters) {
    const auto n = static_cast<int>(dissimilarity.rows());
    if (dissimilarity.cols() != n) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "dissimilarity matrix must be square");
    }
    if (n_clusters < 1 || n_clusters > n) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "cluster count " + std::to_string(n_clusters) + " outside [1, " +
                        std::to_string(n) + "]");
    }
    // Clusters stay sorted by smallest member; members stay sorted.
    std::vector<std::vector<int>> clusters(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) clusters[static_cast<std::size_t>(i)] = {i};
    // Complete-linkage distances between current clusters.
    Eigen::MatrixXd dist = dissimilarity;

    while (static_cast<int>(clusters.size()) > n_clusters) {
        const auto m = static_cast<Eigen::Index>(clusters.size());
        Eigen::Index best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = a + 1; b < m; ++b) {
                if (dist(a, b) < best) {
                    best = dist(a, b);
                    best_a = a;
                    best_b = b;
                }
            }
        }
        auto& into = clusters[static_cast<std::size_t>(best_a)];
        auto& from = clusters[static_cast<std::size_t>(best_b)];
        into.insert(into.end(), from.begin(), from.end());
        std::sort(into.begin(), into.end());
        for (Eigen::Index c = 0; c < m; ++c) {
            const double d = std::max(dist(best_a, c), dist(best_b, c));
            dist(best_a, c) = d;
            dist(c, best_a) = d;
        }
        dist(best_a, best_a) = 0.0;
        clusters.erase(clusters.begin() + best_b);
        // Drop row and column best_b.
        Eigen::MatrixXd reduced(m - 1, m - 1);
        for (Eigen::Index i = 0, ri = 0; i < m; ++i) {
            if (i == best_b) continue;
            for (Eigen::Index j = 0, rj = 0; j < m; ++j) {
                if (j == best_b) continue;
                reduced(ri, rj++) = dist(i, j);
            }
            ++ri;
        }
        dist = std::move(reduced);
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (int i : clusters[c]) labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
    }
    return labels;
}

Grouping auto_group_wcor(const Decomposition& d, int n_clusters) {
    const int l = d.window();
    if (n_clusters < 1 || n_clusters > l) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "cluster count " + std::to_string(n_clusters) + " outside [1, " +
                        std::to_string(l) + "]");
    }
    if (n_clusters == 1) return Grouping::prefix(l);
    const auto components = elementary_series(d);
    const AntiDiagonalWeights w(l, static_cast<int>(d.columns()));
    const WCorMatrix wcor = wcor_matrix(components, w);
    const Eigen::MatrixXd dissimilarity =
        (Eigen::MatrixXd::Ones(l, l) - wcor.entries.cwiseAbs()).cwiseMax(0.0);
    const std::vector<int> labels = cluster_complete_linkage(dissimilarity, n_clusters);
    std::vector<int> signal;
    for (int k = 0; k < l; ++k) {
        if (labels[static_cast<std::size_t>(k)] == labels[0]) signal.push_back(k + 1);
    }
    return Grouping(std::move(signal));
}

std::vector<Grouping> prefix_groupings(int max_size) {
    std::vector<Grouping> out;
    for (int m = 1; m <= max_size; ++m) out.push_back(Grouping::prefix(m));
    return out;
}

std::vector<Grouping> neighborhood(const Grouping& center, int upper) {
    std::vector<Grouping> out;
    const auto idx = center.indices();
    if (idx.size() > 1) {
        for (int k : idx) {
            std::vector<int> reduced;
            for (int i : idx) {
                if (i != k) reduced.push_back(i);
            }
            out.emplace_back(std::move(reduced));
        }
    }
    for (int k = 1; k <= upper; ++k) {
        if (center.contains(k)) continue;
        std::vector<int> extended(idx.begin(), idx.end());
        extended.push_back(k);
        out.emplace_back(std::move(extended));
    }
    return out;
}

std::vector<Grouping> neighborhood(int m, int l_min) {
    if (m < 1 || m > l_min) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "neighborhood needs 1 <= M <= L_min");
    }
    return neighborhood(Grouping::prefix(m), l_min);
}

}  // namespace ssakit
