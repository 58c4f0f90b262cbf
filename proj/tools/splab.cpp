// splab: generate, solve, benchmark, train and report from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include "splab/harness.hpp"
#include "splab/instance_io.hpp"
#include "splab/trace_io.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace splab;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct LimitOptions {
    double time = 60.0;
    std::size_t nodes = 1000000;
    double gap = 1e-4;
    std::string mode = "wall";

    void add(CLI::App* cmd)
    {
        cmd->add_option("--time-limit", time, "Time limit in units of the time mode")->capture_default_str();
        cmd->add_option("--node-limit", nodes, "Maximum number of nodes")->capture_default_str();
        cmd->add_option("--gap", gap, "Relative gap tolerance")->capture_default_str();
        cmd->add_option("--time-mode", mode, "wall (seconds) or nodes (nodes after the root)")
            ->check(CLI::IsMember({"wall", "nodes"}))
            ->capture_default_str();
    }

    SolveLimits limits() const
    {
        return {time, nodes, gap, *parse_time_mode(mode)};
    }
};

RuleId rule_or_throw(const std::string& name)
{
    const auto r = parse_rule(name);
    if (!r)
        throw CLI::ValidationError("--rule", "unknown rule '" + name + "'");
    return *r;
}

void log_line(const std::string& message)
{
    std::cerr << message << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spatial branch-and-bound lab: rule benchmarking and learned rule selection"};
    app.set_config("--config", "", "TOML file with option values; sections name the subcommand");
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write random instances and a manifest");
    std::string gen_out, gen_preset = "three-family", gen_family;
    std::size_t gen_count = 40;
    std::uint64_t gen_seed = 0;
    GeneratorSpec custom;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--preset", gen_preset, "Family preset")->check(CLI::IsMember({"three-family"}))->capture_default_str();
    gen->add_option("--count", gen_count, "Instances per family")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Master seed")->capture_default_str();
    gen->add_option("--family", gen_family, "Generate one custom family with this label instead of the preset");
    gen->add_option("--vars", custom.num_vars, "Custom family: variables")->capture_default_str();
    gen->add_option("--degree", custom.degree, "Custom family: degree")->capture_default_str();
    gen->add_option("--density", custom.density, "Custom family: monomial density")->capture_default_str();
    gen->add_option("--constraints", custom.num_constraints, "Custom family: constraints")->capture_default_str();
    gen->add_option("--eq-fraction", custom.equality_fraction, "Custom family: equality share")->capture_default_str();
    gen->add_option("--range-min", custom.range_min, "Custom family: smallest upper bound")->capture_default_str();
    gen->add_option("--range-max", custom.range_max, "Custom family: largest upper bound")->capture_default_str();
    gen->add_option("--decoys", custom.decoy_vars, "Custom family: wide-range objective decoys")->capture_default_str();
    gen->add_flag("--decoy-pairs", custom.decoy_pairs, "Custom family: decoys multiply each other");
    gen->add_option("--coupling", custom.coupling_vars, "Custom family: coupled objective-only variables")
        ->capture_default_str();

    // features
    auto* feat = app.add_subcommand("features", "Extract instance features as CSV");
    std::vector<std::string> feat_files;
    std::string feat_manifest, feat_out;
    feat->add_option("instances", feat_files, "Instance files");
    feat->add_option("--manifest", feat_manifest, "Manifest CSV");
    feat->add_option("--out", feat_out, "Output file (default: stdout)");

    // solve
    auto* slv = app.add_subcommand("solve", "Solve one instance with one rule and print the trace");
    std::string slv_file, slv_rule = "max", slv_trace;
    LimitOptions slv_limits;
    slv->add_option("instance", slv_file, "Instance file")->required();
    slv->add_option("--rule", slv_rule, "Branching rule: max, sum, dual, range, eig-vi, eig-cmi")->capture_default_str();
    slv->add_option("--trace-out", slv_trace, "Also write the trace JSON here");
    slv_limits.add(slv);

    // bench
    auto* bch = app.add_subcommand("bench", "Solve every instance with every rule (resumable)");
    std::string bch_manifest, bch_out;
    std::vector<std::string> bch_rules;
    std::size_t bch_workers = 1;
    LimitOptions bch_limits;
    bch->add_option("--manifest", bch_manifest, "Manifest CSV")->required();
    bch->add_option("--out", bch_out, "Archive directory")->required();
    bch->add_option("--rules", bch_rules, "Rules to run (default: all six)");
    bch->add_option("--workers", bch_workers, "Parallel solves")->envname("SPLAB_WORKERS")->capture_default_str();
    bch_limits.add(bch);

    // train
    auto* trn = app.add_subcommand("train", "Train rule selectors and evaluate them over partitions");
    std::string trn_archive, trn_out, trn_learner = "qrf";
    TrainConfig tc;
    trn->add_option("--archive", trn_archive, "Archive directory from bench")->required();
    trn->add_option("--out", trn_out, "Output directory")->required();
    trn->add_option("--tau", tc.tau, "Quantile level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    trn->add_option("--partitions", tc.partitions, "Train/test partitions")->capture_default_str();
    trn->add_option("--ratio", tc.ratio, "Training share per family")->capture_default_str();
    trn->add_option("--seed", tc.seed, "Master seed")->capture_default_str();
    trn->add_option("--learner", trn_learner, "qrf or sgbqr")->check(CLI::IsMember({"qrf", "sgbqr"}))->capture_default_str();
    trn->add_option("--trees", tc.trees, "Trees per forest")->capture_default_str();
    trn->add_option("--min-leaf", tc.min_leaf, "Minimum leaf size")->capture_default_str();
    trn->add_option("--workers", tc.workers, "Threads for tree fitting")->envname("SPLAB_WORKERS")->capture_default_str();
    trn->add_flag("--save-partition-models", tc.save_partition_models, "Also write one selector per partition");

    // select
    auto* sel = app.add_subcommand("select", "Pick a rule for each instance with a trained selector");
    std::string sel_model;
    std::vector<std::string> sel_files;
    sel->add_option("--model", sel_model, "selector.json from train")->required();
    sel->add_option("instances", sel_files, "Instance files")->required();

    // report
    auto* rep = app.add_subcommand("report", "Write figure data and SVG charts");
    std::string rep_archive, rep_train, rep_out;
    rep->add_option("--archive", rep_archive, "Archive directory")->required();
    rep->add_option("--train", rep_train, "Train output directory");
    rep->add_option("--out", rep_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*gen) {
            std::vector<FamilyPreset> families;
            if (!gen_family.empty()) {
                custom.family = gen_family;
                families.push_back({gen_family, custom});
            } else {
                families = three_family_preset();
            }
            const auto rows = generate_instances(gen_out, families, gen_count, gen_seed);
            std::cerr << "wrote " << rows.size() << " instances and " << (fs::path(gen_out) / "manifest.csv").string()
                      << '\n';
        } else if (*feat) {
            std::vector<ManifestRow> rows;
            if (!feat_manifest.empty())
                rows = read_manifest(feat_manifest);
            for (const auto& f : feat_files)
                rows.push_back({f, ""});
            if (rows.empty())
                throw CLI::ValidationError("features", "give instance files or --manifest");
            std::string text = feature_csv_header() + "\n";
            for (const auto& r : rows) {
                const auto p = read_problem(r.path);
                text += feature_csv_row(instance_id(r.path), r.family.empty() ? p.family() : r.family,
                                        extract_features(p)) + "\n";
            }
            if (feat_out.empty())
                std::cout << text;
            else
                write_text(feat_out, text);
        } else if (*slv) {
            const auto rule = rule_or_throw(slv_rule);
            const auto p = read_problem(slv_file);
            const auto trace = solve(p, rule, slv_limits.limits());
            const auto doc = trace_to_json({instance_id(slv_file), p.family()}, trace).dump(2);
            std::cout << doc << '\n';
            if (!slv_trace.empty())
                write_text(slv_trace, doc + "\n");
        } else if (*bch) {
            BenchConfig config;
            config.limits = bch_limits.limits();
            config.workers = bch_workers;
            config.log = log_line;
            if (!bch_rules.empty()) {
                config.rules.clear();
                for (const auto& r : bch_rules)
                    config.rules.push_back(rule_or_throw(r));
            }
            const auto s = bench(bch_manifest, bch_out, config);
            std::cerr << "instances " << s.instances << ", solved pairs " << s.solved_pairs << ", reused "
                      << s.reused_pairs << ", retained " << s.retained << ", excluded " << s.excluded.size() << '\n';
            for (const auto& [id, reason] : s.excluded)
                std::cerr << "excluded " << id << ": " << reason << '\n';
            if (!s.parse_errors.empty())
                return kDataError;
        } else if (*trn) {
            tc.learner = *parse_learner(trn_learner);
            const auto archive = load_archive(trn_archive);
            const auto result = train(archive, tc);
            write_train_outputs(result, tc, trn_out);
            const auto& m = result.mean;
            std::cout << "test mean: best single (" << rule_name(m.best_rule) << ") " << format_double(m.best_single)
                      << ", learned " << format_double(m.learned) << ", optimal " << format_double(m.optimal)
                      << ", improvement " << format_double(m.improvement()) << '\n';
            const auto& o = result.oob;
            std::cout << "oob: best single (" << rule_name(o.best_rule) << ") " << format_double(o.best_single)
                      << ", learned " << format_double(o.learned) << ", optimal " << format_double(o.optimal)
                      << ", improvement " << format_double(o.improvement()) << '\n';
        } else if (*sel) {
            const auto doc = nlohmann::json::parse(read_text(sel_model), nullptr, false);
            if (doc.is_discarded())
                throw DataError(sel_model + ": malformed JSON");
            const auto selector = Selector::from_json(doc, feature_schema_hash());
            std::cout << "instance,rule";
            for (const auto r : kAllRules)
                std::cout << ",score_" << rule_name(r);
            std::cout << '\n';
            for (const auto& f : sel_files) {
                const auto features = extract_features(read_problem(f));
                const auto scores = selector.predict(features.values);
                std::cout << instance_id(f) << ',' << rule_name(argmax_rule(scores));
                for (const double s : scores)
                    std::cout << ',' << format_double(s);
                std::cout << '\n';
            }
        } else if (*rep) {
            const auto archive = load_archive(rep_archive);
            const fs::path train_dir(rep_train);
            write_report(archive, rep_train.empty() ? nullptr : &train_dir, rep_out);
            std::cerr << "wrote report to " << rep_out << '\n';
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return 0;
}
