#pragma once

#include "splab/problem.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace splab {

inline constexpr std::size_t kNumFeatures = 34;

/// Feature names in extraction order, grouped as variables (9), constraints
/// (4), monomials (6), coefficients (2), other (6) and graphs (7).
const std::array<std::string_view, kNumFeatures>& feature_names();

/// FNV-1a over the joined feature names; pins trained models to this schema.
std::uint64_t feature_schema_hash();

struct FeatureVector {
    std::array<double, kNumFeatures> values{};
    /// Groups that were empty on this problem (their features are 0).
    std::vector<std::string> quality_flags;

    double operator[](std::size_t i) const { return values[i]; }
    /// Value by name; throws std::out_of_range for an unknown name.
    double at(std::string_view name) const;
};

FeatureVector extract_features(const Problem& problem);

/// CSV header: instance, family, then the feature names.
std::string feature_csv_header();
/// Values are written with round-trip precision.
std::string feature_csv_row(const std::string& instance, const std::string& family, const FeatureVector& f);

struct FeatureRow {
    std::string instance;
    std::string family;
    FeatureVector features;
};

/// Parses a file written with the two functions above; throws
/// std::invalid_argument on a header mismatch or malformed value.
std::vector<FeatureRow> parse_feature_csv(std::string_view text);

} // namespace splab
