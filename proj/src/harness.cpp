#include "splab/harness.hpp"

#include "splab/instance_io.hpp"
#include "splab/trace_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace splab {

using nlohmann::json;

std::vector<FamilyPreset> three_family_preset()
{
    std::vector<FamilyPreset> out;
    GeneratorSpec iso;
    iso.num_vars = 3;
    iso.degree = 2;
    iso.density = 0.5;
    iso.num_constraints = 2;
    iso.decoy_vars = 2;
    iso.family = "decoy-iso";
    out.push_back({iso.family, iso});

    GeneratorSpec pair = iso;
    pair.decoy_vars = 3;
    pair.decoy_pairs = true;
    pair.family = "decoy-pair";
    out.push_back({pair.family, pair});

    GeneratorSpec coupled = iso;
    coupled.decoy_vars = 0;
    coupled.num_constraints = 3;
    coupled.range_min = 0.1;
    coupled.range_max = 10.0;
    coupled.coupling_vars = 3;
    coupled.coupling_weight = 3.0;
    coupled.family = "coupled";
    out.push_back({coupled.family, coupled});
    return out;
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot write " + tmp.string());
        out << text;
        if (!out)
            throw DataError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header)
{
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw DataError(path.string() + ": expected header '" + header + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line))
        if (!line.empty())
            rows.push_back(split_line(line));
    return rows;
}

std::string fmt(double v)
{
    return format_double(v);
}

std::string fmt_opt(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

void log_to(const BenchConfig& config, const std::string& message)
{
    if (config.log)
        config.log(message);
}

json limits_json(const SolveLimits& l)
{
    return {{"time", l.time}, {"max_nodes", l.max_nodes}, {"gap_tol", l.gap_tol},
            {"time_mode", time_mode_name(l.time_mode)}};
}

} // namespace

std::string instance_id(const fs::path& path)
{
    return path.stem().string();
}

std::vector<ManifestRow> read_manifest(const fs::path& manifest)
{
    const auto base = fs::absolute(manifest).parent_path();
    std::vector<ManifestRow> rows;
    std::set<std::string> ids;
    for (const auto& cells : read_csv(manifest, "instance,family")) {
        if (cells.size() != 2 || cells[0].empty() || cells[1].empty())
            throw DataError(manifest.string() + ": each row needs an instance path and a family");
        fs::path p(cells[0]);
        if (p.is_relative())
            p = base / p;
        if (!ids.insert(instance_id(p)).second)
            throw DataError(manifest.string() + ": duplicate instance id '" + instance_id(p) + "'");
        rows.push_back({p.lexically_normal(), cells[1]});
    }
    return rows;
}

void write_manifest(const fs::path& manifest, const std::vector<ManifestRow>& rows)
{
    const auto base = fs::absolute(manifest).parent_path();
    std::string text = "instance,family\n";
    for (const auto& r : rows)
        text += fs::absolute(r.path).lexically_relative(base).generic_string() + "," + r.family + "\n";
    write_text(manifest, text);
}

std::vector<ManifestRow> generate_instances(const fs::path& out_dir, const std::vector<FamilyPreset>& families,
                                            std::size_t count, std::uint64_t seed)
{
    fs::create_directories(out_dir);
    std::vector<ManifestRow> rows;
    for (std::size_t f = 0; f < families.size(); ++f) {
        for (std::size_t k = 0; k < count; ++k) {
            GeneratorSpec spec = families[f].spec;
            spec.family = families[f].name;
            spec.seed = derive_seed(seed, f * 1000003 + k);
            const auto g = generate_random(spec);
            char name[32];
            std::snprintf(name, sizeof name, "-%03zu.poly", k);
            const fs::path path = fs::absolute(out_dir) / (families[f].name + name);
            write_text(path, render_problem(g.problem));
            rows.push_back({path, families[f].name});
        }
    }
    write_manifest(out_dir / "manifest.csv", rows);
    return rows;
}

namespace {

fs::path run_path(const fs::path& out_dir, const std::string& id, RuleId rule, const char* ext)
{
    return out_dir / "runs" / id / (std::string(rule_name(rule)) + ext);
}

struct PairTask {
    std::size_t instance;
    RuleId rule;
};

std::string archive_header(TimeMode mode)
{
    std::string h = "instance,family,rule,status,time,lb_init,lb_fin,ub_init,ub_fin,nodes,fallback_branches,pace";
    if (mode == TimeMode::Wall)
        h += ",wall_seconds";
    return h;
}

} // namespace

BenchSummary bench(const fs::path& manifest, const fs::path& out_dir, const BenchConfig& config)
{
    const auto rows = read_manifest(manifest);
    fs::create_directories(out_dir / "runs");

    json meta{{"version", kArchiveVersion},
              {"feature_schema_hash", feature_schema_hash()},
              {"limits", limits_json(config.limits)},
              {"rules", json::array()}};
    for (const auto r : config.rules)
        meta["rules"].push_back(rule_name(r));
    const fs::path meta_path = out_dir / "archive.json";
    if (fs::exists(meta_path)) {
        const auto old = json::parse(read_text(meta_path), nullptr, false);
        if (old.is_discarded() || old.value("limits", json()) != meta["limits"] || old.value("rules", json()) != meta["rules"])
            throw DataError(out_dir.string() + " holds runs made with other limits or rules; use a fresh directory");
    }

    BenchSummary summary;
    summary.instances = rows.size();
    std::vector<std::optional<Problem>> problems(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            problems[i] = read_problem(rows[i].path);
        } catch (const std::exception& e) {
            summary.parse_errors.push_back(rows[i].path.string() + ": " + e.what());
            log_to(config, "parse error: " + rows[i].path.string() + ": " + e.what());
        }
    }

    std::vector<PairTask> todo;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!problems[i])
            continue;
        const auto id = instance_id(rows[i].path);
        for (const auto rule : config.rules) {
            if (fs::exists(run_path(out_dir, id, rule, ".json")) || fs::exists(run_path(out_dir, id, rule, ".error")))
                ++summary.reused_pairs;
            else
                todo.push_back({i, rule});
        }
    }

    std::atomic<std::size_t> next{0}, done{0};
    std::mutex log_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t k = next++;
            if (k >= todo.size())
                return;
            const auto& task = todo[k];
            const auto& row = rows[task.instance];
            const auto id = instance_id(row.path);
            try {
                const auto trace = solve(*problems[task.instance], task.rule, config.limits);
                write_text(run_path(out_dir, id, task.rule, ".json"),
                           trace_to_json({id, row.family}, trace).dump(1) + "\n");
            } catch (const std::exception& e) {
                write_text(run_path(out_dir, id, task.rule, ".error"), std::string(e.what()) + "\n");
                const std::lock_guard lock(log_mutex);
                log_to(config, "solver failure: " + id + " " + std::string(rule_name(task.rule)) + ": " + e.what());
            }
            const std::size_t n = ++done;
            if (config.log && (n % 50 == 0 || n == todo.size())) {
                const std::lock_guard lock(log_mutex);
                log_to(config, "solved " + std::to_string(n) + "/" + std::to_string(todo.size()) + " pairs");
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(todo.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    summary.solved_pairs = todo.size();

    // Assemble the archive in instance-id order from the per-pair files.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (problems[i])
            order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return instance_id(rows[a].path) < instance_id(rows[b].path); });

    const TimeMode mode = config.limits.time_mode;
    std::string archive = archive_header(mode) + "\n";
    std::string features = feature_csv_header() + "\n";
    std::string excluded = "instance,family,reason\n";
    for (const auto i : order) {
        const auto id = instance_id(rows[i].path);
        const auto& family = rows[i].family;
        features += feature_csv_row(id, family, extract_features(*problems[i])) + "\n";

        std::vector<SolveTrace> traces;
        std::string reason;
        for (const auto rule : config.rules) {
            const auto err = run_path(out_dir, id, rule, ".error");
            if (fs::exists(err)) {
                auto msg = read_text(err);
                while (!msg.empty() && msg.back() == '\n')
                    msg.pop_back();
                reason = "solver failure (" + std::string(rule_name(rule)) + "): " + msg;
                break;
            }
            traces.push_back(trace_from_json(json::parse(read_text(run_path(out_dir, id, rule, ".json")))));
        }
        if (reason.empty())
            for (const auto& t : traces) {
                if (t.status == SolveStatus::Infeasible) {
                    reason = "infeasible";
                    break;
                }
                if (solved_at_root(t)) {
                    reason = "solved at root";
                    break;
                }
            }
        if (!reason.empty()) {
            std::replace(reason.begin(), reason.end(), ',', ';');
            std::replace(reason.begin(), reason.end(), '\n', ' ');
            excluded += id + "," + family + "," + reason + "\n";
            summary.excluded[id] = reason;
            continue;
        }
        ++summary.retained;
        for (const auto& t : traces) {
            archive += id + "," + family + "," + std::string(rule_name(t.rule)) + "," +
                       std::string(status_name(t.status)) + "," + fmt(t.time) + "," + fmt(t.lb_init) + "," +
                       fmt(t.lb_fin) + "," + fmt_opt(t.ub_init) + "," + fmt_opt(t.ub_fin) + "," +
                       std::to_string(t.nodes_processed) + "," + std::to_string(t.fallback_branches) + "," +
                       fmt(lb_pace(t));
            if (mode == TimeMode::Wall)
                archive += "," + fmt(t.wall_seconds);
            archive += "\n";
        }
    }
    meta["retained"] = summary.retained;
    meta["excluded"] = summary.excluded.size();
    write_text(out_dir / "archive.csv", archive);
    write_text(out_dir / "features.csv", features);
    write_text(out_dir / "excluded.csv", excluded);
    write_text(meta_path, meta.dump(2) + "\n");
    return summary;
}

Archive load_archive(const fs::path& dir)
{
    const auto meta = json::parse(read_text(dir / "archive.json"), nullptr, false);
    if (meta.is_discarded())
        throw DataError((dir / "archive.json").string() + ": malformed JSON");
    if (meta.value("version", 0) != kArchiveVersion)
        throw DataError("unsupported archive version");
    if (meta.value("feature_schema_hash", std::uint64_t{0}) != feature_schema_hash())
        throw DataError("archive was built with a different feature schema");

    Archive a;
    for (const auto& name : meta.at("rules")) {
        const auto r = parse_rule(name.get<std::string>());
        if (!r)
            throw DataError("unknown rule in archive: " + name.get<std::string>());
        a.rules.push_back(*r);
    }
    const auto mode = parse_time_mode(meta.at("limits").at("time_mode").get<std::string>());
    if (!mode)
        throw DataError("unknown time mode in archive");
    a.time_mode = *mode;

    try {
        for (auto& row : parse_feature_csv(read_text(dir / "features.csv")))
            a.features.emplace(row.instance, std::move(row.features));
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("features.csv: ") + e.what());
    }

    std::map<std::string, std::string> family;
    std::map<std::string, std::size_t> count;
    for (const auto& cells : read_csv(dir / "archive.csv", archive_header(a.time_mode))) {
        if (cells.size() < 3)
            throw DataError("archive.csv: short row");
        family[cells[0]] = cells[1];
        ++count[cells[0]];
    }
    for (const auto& [id, fam] : family) {
        if (count[id] != a.rules.size())
            throw DataError("archive.csv: instance " + id + " lacks complete rule coverage");
        if (!a.features.count(id))
            throw DataError("features.csv: no features for " + id);
        InstanceRuns runs{id, fam, {}};
        for (const auto rule : a.rules) {
            try {
                runs.traces.push_back(trace_from_json(json::parse(read_text(run_path(dir, id, rule, ".json")))));
            } catch (const json::exception& e) {
                throw DataError("malformed trace for " + id + ": " + e.what());
            } catch (const std::invalid_argument& e) {
                throw DataError("malformed trace for " + id + ": " + e.what());
            }
        }
        a.runs.push_back(std::move(runs));
    }
    return a;
}

PaceComparison compare_choices(const std::vector<PaceMap>& paces, const std::vector<RuleId>& chosen)
{
    if (paces.empty() || paces.size() != chosen.size())
        throw std::invalid_argument("compare_choices: need one choice per instance");
    PaceComparison c;
    std::vector<double> learned, optimal;
    for (std::size_t i = 0; i < paces.size(); ++i) {
        learned.push_back(paces[i].at(chosen[i]));
        double best = kInf;
        for (const auto& [rule, p] : paces[i])
            best = std::min(best, p);
        optimal.push_back(best);
    }
    c.learned = geo_mean(learned);
    c.optimal = geo_mean(optimal);
    c.best_single = kInf;
    for (const auto& [rule, p] : paces.front()) {
        std::vector<double> v;
        for (const auto& m : paces)
            v.push_back(m.at(rule));
        const double g = geo_mean(v);
        if (g < c.best_single) {
            c.best_single = g;
            c.best_rule = rule;
        }
    }
    return c;
}

namespace {

struct Dataset {
    Matrix x;
    std::vector<std::string> instance, family;
    std::vector<PaceMap> raw, normalized;
};

Dataset build_dataset(const Archive& archive)
{
    Dataset d;
    for (const auto& runs : archive.runs) {
        PaceMap raw;
        for (const auto& t : runs.traces)
            raw[t.rule] = lb_pace(t);
        for (const auto& [rule, p] : raw)
            if (!(p > 0.0))
                throw DataError("instance " + runs.instance + " has a zero pace; it should have been excluded");
        for (const auto rule : kAllRules)
            if (!raw.count(rule))
                throw DataError("training needs all six rules; " + runs.instance + " lacks " +
                                std::string(rule_name(rule)));
        const auto& f = archive.features.at(runs.instance);
        d.x.push_row(f.values);
        d.instance.push_back(runs.instance);
        d.family.push_back(runs.family);
        d.raw.push_back(raw);
        d.normalized.push_back(normalize(raw));
    }
    return d;
}

RuleId optimal_rule(const PaceMap& paces)
{
    RuleId best = paces.begin()->first;
    for (const auto& [rule, p] : paces)
        if (p < paces.at(best))
            best = rule;
    return best;
}

SelectorParams selector_params(const TrainConfig& c, std::uint64_t seed)
{
    SelectorParams p;
    p.tau = c.tau;
    p.learner = c.learner;
    p.forest.trees = c.trees;
    p.forest.min_leaf = c.min_leaf;
    p.forest.workers = c.workers;
    p.seed = seed;
    return p;
}

Selector fit_rows(const Dataset& d, const std::vector<std::size_t>& rows, const SelectorParams& p, Matrix& x)
{
    x = Matrix();
    std::array<std::vector<double>, kAllRules.size()> targets;
    for (const auto i : rows) {
        x.push_row(d.x.row(i));
        for (std::size_t r = 0; r < kAllRules.size(); ++r)
            targets[r].push_back(d.normalized[i].at(kAllRules[r]));
    }
    return Selector::train(x, targets, p);
}

} // namespace

TrainResult train(const Archive& archive, const TrainConfig& config)
{
    const Dataset d = build_dataset(archive);
    if (d.x.rows() < 2)
        throw DataError("training needs at least two retained instances");
    TrainResult result;
    for (std::size_t p = 0; p < config.partitions; ++p) {
        const auto split = stratified_split(d.family, config.ratio, config.seed + p);
        if (split.test.empty())
            throw DataError("partition " + std::to_string(p) + " has an empty test set");
        Matrix x;
        const auto model = fit_rows(d, split.train, selector_params(config, derive_seed(config.seed, p)), x);
        PartitionResult part;
        part.train_rows = split.train.size();
        part.test_rows = split.test.size();
        std::vector<PaceMap> paces;
        std::vector<RuleId> chosen;
        for (const auto i : split.test) {
            const RuleId r = model.select(d.x.row(i));
            paces.push_back(d.raw[i]);
            chosen.push_back(r);
            part.selections.push_back({d.instance[i], d.family[i], r, optimal_rule(d.raw[i])});
        }
        part.test = compare_choices(paces, chosen);
        if (config.save_partition_models)
            part.model = model;
        result.partitions.push_back(std::move(part));
    }

    if (!result.partitions.empty()) {
        std::map<RuleId, std::size_t> votes;
        for (const auto& part : result.partitions) {
            result.mean.best_single += part.test.best_single;
            result.mean.learned += part.test.learned;
            result.mean.optimal += part.test.optimal;
            ++votes[part.test.best_rule];
        }
        const double k = static_cast<double>(result.partitions.size());
        result.mean.best_single /= k;
        result.mean.learned /= k;
        result.mean.optimal /= k;
        result.mean.best_rule =
            std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) { return a.second < b.second; })
                ->first;
    }

    std::vector<std::size_t> all(d.x.rows());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    Matrix x;
    result.full_model = fit_rows(d, all, selector_params(config, derive_seed(config.seed, 1u << 20)), x);
    const auto oob = result.full_model.oob_predict(x);
    std::vector<RuleId> chosen;
    for (std::size_t i = 0; i < all.size(); ++i) {
        chosen.push_back(argmax_rule(oob[i]));
        result.oob_selections.push_back({d.instance[i], d.family[i], chosen.back(), optimal_rule(d.raw[i])});
    }
    result.oob = compare_choices(d.raw, chosen);
    return result;
}

namespace {

std::string comparison_row(const std::string& label, std::size_t train_rows, std::size_t test_rows,
                           const PaceComparison& c)
{
    return label + "," + std::to_string(train_rows) + "," + std::to_string(test_rows) + "," +
           std::string(rule_name(c.best_rule)) + "," + fmt(c.best_single) + "," + fmt(c.learned) + "," +
           fmt(c.optimal) + "," + fmt(c.improvement()) + "," + fmt(c.optimal_improvement()) + "\n";
}

const char* kComparisonHeader =
    "partition,train_rows,test_rows,best_rule,best_single,learned,optimal,improvement,optimal_improvement\n";

} // namespace

void write_train_outputs(const TrainResult& result, const TrainConfig& config, const fs::path& out_dir)
{
    fs::create_directories(out_dir);
    std::string report = kComparisonHeader;
    for (std::size_t p = 0; p < result.partitions.size(); ++p)
        report += comparison_row(std::to_string(p), result.partitions[p].train_rows, result.partitions[p].test_rows,
                                 result.partitions[p].test);
    if (!result.partitions.empty())
        report += comparison_row("mean", 0, 0, result.mean);
    write_text(out_dir / "train_report.csv", report);

    const std::size_t n = result.oob_selections.size();
    write_text(out_dir / "oob_report.csv", std::string(kComparisonHeader) + comparison_row("oob", n, n, result.oob));

    std::string sel = "partition,instance,family,selected,optimal\n";
    auto add = [&](const std::string& label, const Selection& s) {
        sel += label + "," + s.instance + "," + s.family + "," + std::string(rule_name(s.selected)) + "," +
               std::string(rule_name(s.optimal)) + "\n";
    };
    for (std::size_t p = 0; p < result.partitions.size(); ++p)
        for (const auto& s : result.partitions[p].selections)
            add(std::to_string(p), s);
    for (const auto& s : result.oob_selections)
        add("oob", s);
    write_text(out_dir / "selections.csv", sel);

    std::string imp = "rule,feature,importance,uniform_fallback\n";
    const auto& forests = result.full_model.forests();
    for (std::size_t r = 0; r < forests.size(); ++r) {
        bool uniform = false;
        const auto v = forests[r].feature_importance(&uniform);
        for (std::size_t f = 0; f < v.size(); ++f)
            imp += std::string(rule_name(kAllRules[r])) + "," + std::string(feature_names()[f]) + "," + fmt(v[f]) +
                   "," + (uniform ? "1" : "0") + "\n";
    }
    write_text(out_dir / "importance.csv", imp);
    write_text(out_dir / "selector.json", result.full_model.to_json().dump() + "\n");
    if (config.save_partition_models)
        for (std::size_t p = 0; p < result.partitions.size(); ++p)
            if (result.partitions[p].model)
                write_text(out_dir / ("selector_p" + std::to_string(p) + ".json"),
                           result.partitions[p].model->to_json().dump() + "\n");
}

namespace {

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};

std::string svg_open(int w, int h)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
           std::to_string(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Step curves of rho against log2(tau).
std::string profile_svg(const std::map<RuleId, std::vector<ProfilePoint>>& profile)
{
    const int w = 640, h = 400, left = 60, right = 140, top = 20, bottom = 50;
    double max_log = 1.0;
    for (const auto& [rule, curve] : profile)
        for (const auto& p : curve)
            max_log = std::max(max_log, std::log2(p.tau));
    auto sx = [&](double tau) { return left + (w - left - right) * std::log2(tau) / max_log; };
    auto sy = [&](double rho) { return top + (h - top - bottom) * (1.0 - rho); };
    std::string s = svg_open(w, h);
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(w - right) + "\" y2=\"" + num(sy(0)) +
         "\" stroke=\"black\"/>\n<line x1=\"" + num(left) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(left) +
         "\" y2=\"" + num(sy(1)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num((left + w - right) / 2.0) + "\" y=\"" + num(h - 15) +
         "\" text-anchor=\"middle\">log2(tau)</text>\n";
    s += "<text x=\"15\" y=\"" + num(sy(0.5)) + "\" transform=\"rotate(-90 15 " + num(sy(0.5)) +
         ")\" text-anchor=\"middle\">rho</text>\n";
    std::size_t k = 0;
    for (const auto& [rule, curve] : profile) {
        std::string path = "M " + num(sx(1.0)) + " " + num(sy(0.0));
        double rho = 0.0;
        for (const auto& p : curve) {
            path += " L " + num(sx(p.tau)) + " " + num(sy(rho)) + " L " + num(sx(p.tau)) + " " + num(sy(p.rho));
            rho = p.rho;
        }
        path += " L " + num(sx(std::exp2(max_log))) + " " + num(sy(rho));
        const char* color = kPalette[k % 6];
        s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(w - right + 10) + "\" y=\"" + num(top + 20 + 18.0 * static_cast<double>(k)) +
             "\" fill=\"" + color + "\">" + std::string(rule_name(rule)) + "</text>\n";
        ++k;
    }
    return s + "</svg>\n";
}

// Stacked bars: share of instances per rank for each rule.
std::string ranks_svg(const std::map<RuleId, std::map<int, std::size_t>>& counts, std::size_t instances)
{
    const int w = 640, h = 400, left = 60, top = 20, bottom = 50;
    const double bar = 60.0, gap = 30.0;
    auto sy = [&](double f) { return top + (h - top - bottom) * (1.0 - f); };
    std::string s = svg_open(w, h);
    std::size_t k = 0;
    for (const auto& [rule, ranks] : counts) {
        const double x = left + static_cast<double>(k) * (bar + gap);
        double acc = 0.0;
        for (const auto& [rank, c] : ranks) {
            const double f = static_cast<double>(c) / static_cast<double>(std::max<std::size_t>(instances, 1));
            s += "<rect x=\"" + num(x) + "\" y=\"" + num(sy(acc + f)) + "\" width=\"" + num(bar) + "\" height=\"" +
                 num(sy(acc) - sy(acc + f)) + "\" fill=\"" + kPalette[(rank - 1) % 6] + "\"><title>rank " +
                 std::to_string(rank) + ": " + std::to_string(c) + "</title></rect>\n";
            acc += f;
        }
        s += "<text x=\"" + num(x + bar / 2) + "\" y=\"" + num(h - 25) + "\" text-anchor=\"middle\">" +
             std::string(rule_name(rule)) + "</text>\n";
        ++k;
    }
    return s + "</svg>\n";
}

} // namespace

void write_report(const Archive& archive, const fs::path* train_dir, const fs::path& out_dir)
{
    fs::create_directories(out_dir);
    const auto records = pace_table(archive.runs);
    write_text(out_dir / "pace_table.csv", pace_table_csv(records));

    std::map<RuleId, std::map<int, std::size_t>> counts;
    std::map<RuleId, std::map<int, double>> sums;
    for (const auto& r : archive.rules)
        for (std::size_t k = 1; k <= archive.rules.size(); ++k)
            counts[r][static_cast<int>(k)] = 0;
    for (const auto& rec : records) {
        ++counts[rec.rule][rec.rank];
        sums[rec.rule][rec.rank] += rec.normalized;
    }
    std::string ranks = "rule,rank,count,mean_normalized\n";
    for (const auto& [rule, by_rank] : counts)
        for (const auto& [rank, c] : by_rank)
            ranks += std::string(rule_name(rule)) + "," + std::to_string(rank) + "," + std::to_string(c) + "," +
                     (c ? fmt(sums[rule][rank] / static_cast<double>(c)) : std::string()) + "\n";
    write_text(out_dir / "rank_summary.csv", ranks);
    write_text(out_dir / "ranks.svg", ranks_svg(counts, archive.runs.size()));

    std::vector<PaceMap> paces;
    for (const auto& runs : archive.runs) {
        PaceMap m;
        for (const auto& t : runs.traces)
            m[t.rule] = lb_pace(t);
        paces.push_back(std::move(m));
    }
    if (!paces.empty()) {
        const auto profile = performance_profile(paces);
        write_text(out_dir / "profile.csv", profile_csv(profile));
        write_text(out_dir / "profile.svg", profile_svg(profile));
    }

    if (train_dir) {
        std::map<RuleId, std::size_t> learned, optimal;
        std::size_t n = 0;
        for (const auto& cells : read_csv(*train_dir / "selections.csv", "partition,instance,family,selected,optimal")) {
            if (cells.size() != 5 || cells[0] != "oob")
                continue;
            const auto s = parse_rule(cells[3]);
            const auto o = parse_rule(cells[4]);
            if (!s || !o)
                throw DataError("selections.csv: unknown rule");
            ++learned[*s];
            ++optimal[*o];
            ++n;
        }
        std::string freq = "rule,learned_percent,optimal_percent\n";
        for (const auto rule : kAllRules)
            freq += std::string(rule_name(rule)) + "," +
                    fmt(n ? 100.0 * static_cast<double>(learned[rule]) / static_cast<double>(n) : 0.0) + "," +
                    fmt(n ? 100.0 * static_cast<double>(optimal[rule]) / static_cast<double>(n) : 0.0) + "\n";
        write_text(out_dir / "selection_frequency.csv", freq);
        write_text(out_dir / "importance.csv", read_text(*train_dir / "importance.csv"));
    }
}

} // namespace splab
