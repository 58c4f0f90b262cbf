#pragma once

#include "splab/features.hpp"
#include "splab/generator.hpp"
#include "splab/learn.hpp"
#include "splab/pace.hpp"
#include "splab/sbb.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace splab {

namespace fs = std::filesystem;

/// Unrecoverable problem with input data (missing files, schema mismatch).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FamilyPreset {
    std::string name;
    GeneratorSpec spec; // seed is ignored; instances get derived seeds
};

/// Three families tuned so that different rules win: wide-range objective
/// decoys (isolated or pairwise coupled) and a mixed-range family with
/// coupled objective-only variables.
std::vector<FamilyPreset> three_family_preset();

struct ManifestRow {
    fs::path path; // absolute
    std::string family;
};

/// CSV with header "instance,family"; relative paths resolve against the manifest directory.
std::vector<ManifestRow> read_manifest(const fs::path& manifest);
void write_manifest(const fs::path& manifest, const std::vector<ManifestRow>& rows);

/// Instance id: the file stem.
std::string instance_id(const fs::path& path);

/// Writes count instances per family as <family>-<k>.poly plus manifest.csv.
std::vector<ManifestRow> generate_instances(const fs::path& out_dir, const std::vector<FamilyPreset>& families,
                                            std::size_t count, std::uint64_t seed);

struct BenchConfig {
    SolveLimits limits;
    std::vector<RuleId> rules{kAllRules.begin(), kAllRules.end()};
    std::size_t workers = 1;
    std::function<void(const std::string&)> log; // progress and warnings
};

struct BenchSummary {
    std::size_t instances = 0;
    std::size_t solved_pairs = 0;  // solves run in this call
    std::size_t reused_pairs = 0;  // already on disk
    std::size_t retained = 0;
    std::map<std::string, std::string> excluded; // instance -> reason
    std::vector<std::string> parse_errors;
};

/// Runs every (instance, rule) pair not yet on disk, then rebuilds
/// archive.csv, features.csv, excluded.csv and archive.json in out_dir.
/// Per-pair traces live in out_dir/runs/<instance>/<rule>.json.
BenchSummary bench(const fs::path& manifest, const fs::path& out_dir, const BenchConfig& config);

inline constexpr int kArchiveVersion = 1;

struct Archive {
    std::vector<InstanceRuns> runs;            // retained instances, sorted by id
    std::map<std::string, FeatureVector> features;
    std::vector<RuleId> rules;
    TimeMode time_mode = TimeMode::Nodes;
};

/// Loads a bench directory; throws DataError on a missing file, a version or
/// feature-schema mismatch, or incomplete rule coverage.
Archive load_archive(const fs::path& dir);

struct TrainConfig {
    double tau = 0.3;
    std::size_t partitions = 10;
    double ratio = 0.7;
    std::uint64_t seed = 0;
    Learner learner = Learner::Qrf;
    std::size_t trees = 500;
    std::size_t min_leaf = 5;
    std::size_t workers = 1;
    bool save_partition_models = false;
};

/// Geometric-mean LB pace of the three strategies on one instance set.
struct PaceComparison {
    RuleId best_rule = RuleId::Max;
    double best_single = 0.0; // best fixed rule chosen on the evaluated set itself
    double learned = 0.0;
    double optimal = 0.0;     // instance-wise best rule

    double improvement() const { return 1.0 - learned / best_single; }
    double optimal_improvement() const { return 1.0 - optimal / best_single; }
};

struct Selection {
    std::string instance;
    std::string family;
    RuleId selected;
    RuleId optimal;
};

struct PartitionResult {
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    PaceComparison test;
    std::vector<Selection> selections;
    std::optional<Selector> model; // kept with save_partition_models
};

struct TrainResult {
    std::vector<PartitionResult> partitions;
    PaceComparison mean;  // arithmetic means of the partition values
    PaceComparison oob;   // full dataset, out-of-bag predictions
    std::vector<Selection> oob_selections;
    Selector full_model;
};

/// Compares rule choices against fixed rules and the per-instance optimum.
/// paces[i] holds the raw pace of every rule on instance i.
PaceComparison compare_choices(const std::vector<PaceMap>& paces, const std::vector<RuleId>& chosen);

TrainResult train(const Archive& archive, const TrainConfig& config);

/// Writes train_report.csv, oob_report.csv, selections.csv, importance.csv,
/// selector.json and, when kept, selector_p<k>.json per partition.
void write_train_outputs(const TrainResult& result, const TrainConfig& config, const fs::path& out_dir);

/// Report files: pace_table.csv, rank_summary.csv, profile.csv, profile.svg,
/// ranks.svg and, with a train directory, selection_frequency.csv and importance.csv.
void write_report(const Archive& archive, const fs::path* train_dir, const fs::path& out_dir);

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_text(const fs::path& path);
/// Writes via a temporary file and rename so readers never see partial content.
void write_text(const fs::path& path, const std::string& text);

} // namespace splab
