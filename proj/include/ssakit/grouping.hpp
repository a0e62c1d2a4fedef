#pragma once

#include "ssakit/component_set.hpp"
#include "ssakit/decomposition.hpp"
#include "ssakit/series.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ssakit {

/// sum_i |A_i| y_i z_i. Throws LengthMismatch.
double weighted_inner(std::span<const double> y, std::span<const double> z,
                      const AntiDiagonalWeights& w);
double weighted_inner(const TimeSeries& y, const TimeSeries& z, const AntiDiagonalWeights& w);

/// w-correlations s_ij between elementary series. Components with zero weighted
/// norm get s_ii = 1 and zero off-diagonal entries.
struct WCorMatrix {
    Eigen::MatrixXd entries;
    std::vector<double> norms;
};

WCorMatrix wcor_matrix(std::span<const ElementarySeries> components, const AntiDiagonalWeights& w);

/// Agglomerative clustering with complete linkage, merging until n_clusters
/// remain. Equal distances merge the pair whose smallest members come first.
/// Returns a cluster label per item; labels are numbered by smallest member.
std::vector<int> cluster_complete_linkage(const Eigen::MatrixXd& dissimilarity, int n_clusters);

/// Clusters components on 1 - |s_ij| and returns the cluster holding component 1.
/// The result need not be a prefix grouping.
Grouping auto_group_wcor(const Decomposition& d, int n_clusters = 2);

/// [1], [1,2], ..., [1..max_size]; empty for max_size <= 0.
std::vector<Grouping> prefix_groupings(int max_size);

/// Sets differing from center by one element: center \ {k} for k in center
/// (skipping the empty set), then center + {k} for k in [upper] \ center.
std::vector<Grouping> neighborhood(const Grouping& center, int upper);

/// Neighborhood of the prefix grouping [m] with additions drawn from [l_min].
std::vector<Grouping> neighborhood(int m, int l_min);

}  // namespace ssakit
