#include "splab/trace_io.hpp"

#include <cmath>
#include <stdexcept>

namespace splab {

namespace {

using nlohmann::json;

json number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json number(const std::optional<double>& v)
{
    return v ? number(*v) : json(nullptr);
}

// null reads back as +inf: the only non-finite bound a trace stores is the
// lower bound of an infeasible problem.
double read_number(const json& j)
{
    return j.is_null() ? kInf : j.get<double>();
}

std::optional<double> read_optional(const json& j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<double>();
}

} // namespace

json trace_to_json(const TraceKey& key, const SolveTrace& trace)
{
    json history = json::array();
    for (const auto& p : trace.lb_history)
        history.push_back(json::array({p.time, number(p.lb)}));
    json j = {
        {"instance", key.instance},
        {"family", key.family},
        {"rule", std::string(rule_name(trace.rule))},
        {"status", std::string(status_name(trace.status))},
        {"time_mode", std::string(time_mode_name(trace.time_mode))},
        {"wall_time", trace.time},
        {"lb_init", number(trace.lb_init)},
        {"lb_fin", number(trace.lb_fin)},
        {"ub_init", number(trace.ub_init)},
        {"ub_fin", number(trace.ub_fin)},
        {"nodes", trace.nodes_processed},
        {"fallback_branches", trace.fallback_branches},
        {"incumbent", trace.incumbent},
        {"lb_history", std::move(history)},
    };
    if (trace.time_mode == TimeMode::Wall)
        j["wall_seconds"] = trace.wall_seconds;
    return j;
}

SolveTrace trace_from_json(const json& j, TraceKey* key)
{
    try {
        SolveTrace t;
        const auto rule = parse_rule(j.at("rule").get<std::string>());
        const auto status = parse_status(j.at("status").get<std::string>());
        const auto mode = parse_time_mode(j.at("time_mode").get<std::string>());
        if (!rule || !status || !mode)
            throw std::invalid_argument("unknown rule, status or time mode");
        t.rule = *rule;
        t.status = *status;
        t.time_mode = *mode;
        t.time = j.at("wall_time").get<double>();
        t.lb_init = read_number(j.at("lb_init"));
        t.lb_fin = read_number(j.at("lb_fin"));
        t.ub_init = read_optional(j.at("ub_init"));
        t.ub_fin = read_optional(j.at("ub_fin"));
        t.nodes_processed = j.at("nodes").get<std::size_t>();
        t.fallback_branches = j.value("fallback_branches", std::size_t{0});
        t.incumbent = j.value("incumbent", std::vector<double>{});
        for (const auto& p : j.at("lb_history"))
            t.lb_history.push_back({p.at(0).get<double>(), read_number(p.at(1))});
        t.wall_seconds = j.value("wall_seconds", t.time_mode == TimeMode::Wall ? t.time : 0.0);
        if (key) {
            key->instance = j.at("instance").get<std::string>();
            key->family = j.value("family", std::string{});
        }
        return t;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("trace record: ") + e.what());
    }
}

} // namespace splab
