#pragma once

#include <span>
#include <string>
#include <vector>

namespace ssakit {

/// Nonempty set of 1-based component numbers, kept sorted. Component k is the
/// eigentriple with the k-th largest singular value.
class Grouping {
public:
    explicit Grouping(std::vector<int> indices);

    /// {1, ..., m}
    static Grouping prefix(int m);

    std::span<const int> indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    int largest() const noexcept { return indices_.back(); }
    bool contains(int k) const;
    bool is_prefix() const noexcept { return indices_.back() == static_cast<int>(indices_.size()); }

    /// "prefix:M" for prefix groupings, otherwise "set:i;j;k".
    std::string label() const;

    friend bool operator==(const Grouping&, const Grouping&) = default;
    friend auto operator<=>(const Grouping&, const Grouping&) = default;

private:
    std::vector<int> indices_;
};

}  // namespace ssakit
