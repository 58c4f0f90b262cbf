#include "splab/pace.hpp"

#include "splab/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace splab {

double lb_pace(const SolveTrace& trace, double eps)
{
    if (!std::isfinite(trace.lb_init) || !std::isfinite(trace.lb_fin))
        throw std::domain_error("lb_pace: trace has no finite lower bound");
    if (trace.lb_fin < trace.lb_init)
        throw std::domain_error("lb_pace: lower bound decreased");
    return trace.time / (trace.lb_fin - trace.lb_init + eps);
}

double optimality_gap(double lb, double ub, double eps)
{
    return (ub - lb) / (std::abs(ub) + eps);
}

std::optional<double> og_pace(const SolveTrace& trace, double eps)
{
    if (!trace.ub_init || !trace.ub_fin || !std::isfinite(trace.lb_init))
        return std::nullopt;
    const double og_init = optimality_gap(trace.lb_init, *trace.ub_init, eps);
    const double og_fin = optimality_gap(trace.lb_fin, *trace.ub_fin, eps);
    return trace.time / (std::abs(og_init - og_fin) + eps);
}

PaceMap normalize(const PaceMap& paces)
{
    if (paces.empty())
        throw std::invalid_argument("normalize: no paces");
    double best = kInf;
    for (const auto& [rule, p] : paces) {
        if (!(p > 0.0))
            throw std::invalid_argument("normalize: pace must be positive");
        best = std::min(best, p);
    }
    PaceMap out;
    for (const auto& [rule, p] : paces)
        out[rule] = best / p;
    return out;
}

std::map<RuleId, int> rank_rules(const PaceMap& paces)
{
    std::vector<std::pair<double, RuleId>> order;
    for (const auto& [rule, p] : paces)
        order.push_back({p, rule});
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::map<RuleId, int> ranks;
    for (std::size_t i = 0; i < order.size(); ++i)
        ranks[order[i].second] = static_cast<int>(i + 1);
    return ranks;
}

double geo_mean(const std::vector<double>& values)
{
    if (values.empty())
        throw std::invalid_argument("geo_mean: empty list");
    double s = 0.0;
    for (double v : values) {
        if (!(v > 0.0))
            throw std::invalid_argument("geo_mean: values must be positive");
        s += std::log(v);
    }
    return std::exp(s / static_cast<double>(values.size()));
}

std::map<RuleId, std::vector<ProfilePoint>> performance_profile(const std::vector<PaceMap>& instances)
{
    std::map<RuleId, std::vector<double>> ratios;
    if (instances.empty())
        return {};
    std::set<RuleId> rules;
    for (const auto& [rule, p] : instances.front())
        rules.insert(rule);
    for (const auto& inst : instances) {
        if (inst.size() != rules.size())
            throw std::invalid_argument("performance_profile: instance is missing a rule");
        double best = kInf;
        for (const auto& [rule, p] : inst) {
            if (!rules.count(rule))
                throw std::invalid_argument("performance_profile: instance is missing a rule");
            if (!(p > 0.0))
                throw std::invalid_argument("performance_profile: pace must be positive");
            best = std::min(best, p);
        }
        for (const auto& [rule, p] : inst)
            ratios[rule].push_back(p / best);
    }
    std::set<double> taus;
    for (auto& [rule, r] : ratios) {
        std::sort(r.begin(), r.end());
        taus.insert(r.begin(), r.end());
    }
    const double count = static_cast<double>(instances.size());
    std::map<RuleId, std::vector<ProfilePoint>> out;
    for (const auto& [rule, r] : ratios)
        for (double tau : taus) {
            const auto below = std::upper_bound(r.begin(), r.end(), tau) - r.begin();
            out[rule].push_back({tau, static_cast<double>(below) / count});
        }
    return out;
}

double profile_value(const std::vector<ProfilePoint>& curve, double tau)
{
    double rho = 0.0;
    for (const auto& p : curve) {
        if (p.tau > tau)
            break;
        rho = p.rho;
    }
    return rho;
}

std::vector<PaceRecord> pace_table(const std::vector<InstanceRuns>& runs, double eps)
{
    std::vector<PaceRecord> out;
    for (const auto& inst : runs) {
        PaceMap paces;
        for (const auto& t : inst.traces)
            paces[t.rule] = lb_pace(t, eps);
        // Root-solved runs have pace 0; they are reported but carry no normalization.
        bool positive = true;
        for (const auto& [rule, p] : paces)
            positive = positive && p > 0.0;
        const auto normalized = positive ? normalize(paces) : PaceMap{};
        const auto ranks = rank_rules(paces);
        for (const auto& t : inst.traces)
            out.push_back({inst.instance, inst.family, t.rule, t.status, t.time, t.lb_init, t.lb_fin,
                           paces.at(t.rule), positive ? normalized.at(t.rule) : 1.0, ranks.at(t.rule)});
    }
    return out;
}

std::string pace_table_csv(const std::vector<PaceRecord>& records)
{
    std::ostringstream out;
    out << "instance,family,rule,status,time,lb_init,lb_fin,pace,normalized,rank\n";
    for (const auto& r : records)
        out << r.instance << ',' << r.family << ',' << rule_name(r.rule) << ',' << status_name(r.status) << ','
            << format_double(r.time) << ',' << format_double(r.lb_init) << ',' << format_double(r.lb_fin) << ','
            << format_double(r.pace) << ',' << format_double(r.normalized) << ',' << r.rank << '\n';
    return out.str();
}

std::string profile_csv(const std::map<RuleId, std::vector<ProfilePoint>>& profile)
{
    std::ostringstream out;
    out << "rule,tau,rho\n";
    for (const auto& [rule, curve] : profile)
        for (const auto& p : curve)
            out << rule_name(rule) << ',' << format_double(p.tau) << ',' << format_double(p.rho) << '\n';
    return out.str();
}

} // namespace splab
