#pragma once

#include "splab/sbb.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace splab {

inline constexpr double kPaceEpsilon = 1e-3;

/// time / (lb_fin - lb_init + eps): time spent per unit of lower-bound gain.
/// Throws std::domain_error on non-finite bounds or a decreasing bound.
double lb_pace(const SolveTrace& trace, double eps = kPaceEpsilon);

/// (ub - lb) / (|ub| + eps).
double optimality_gap(double lb, double ub, double eps = kPaceEpsilon);

/// time / (|OG_init - OG_fin| + eps); absent without an upper bound after the root.
std::optional<double> og_pace(const SolveTrace& trace, double eps = kPaceEpsilon);

using PaceMap = std::map<RuleId, double>;

/// min(paces) / pace per rule. Throws std::invalid_argument on an empty map
/// or a nonpositive pace.
PaceMap normalize(const PaceMap& paces);

/// Ranks 1..k by ascending pace; ties go to the earlier RuleId.
std::map<RuleId, int> rank_rules(const PaceMap& paces);

/// exp(mean(log v)); throws std::invalid_argument on an empty list or a nonpositive value.
double geo_mean(const std::vector<double>& values);

struct ProfilePoint {
    double tau;
    double rho;
};

/// Performance profile over instances: for each rule, the fraction of
/// instances whose pace ratio to the instance best is <= tau, evaluated at
/// every ratio that occurs. Every instance must carry the same rules.
std::map<RuleId, std::vector<ProfilePoint>> performance_profile(const std::vector<PaceMap>& instances);

/// Step-function value of a profile curve at tau.
double profile_value(const std::vector<ProfilePoint>& curve, double tau);

struct PaceRecord {
    std::string instance;
    std::string family;
    RuleId rule;
    SolveStatus status;
    double time;
    double lb_init;
    double lb_fin;
    double pace;
    double normalized;
    int rank;
};

struct InstanceRuns {
    std::string instance;
    std::string family;
    std::vector<SolveTrace> traces; // one per rule
};

/// Pace, normalized pace and rank for every run of every instance.
std::vector<PaceRecord> pace_table(const std::vector<InstanceRuns>& runs, double eps = kPaceEpsilon);

std::string pace_table_csv(const std::vector<PaceRecord>& records);
std::string profile_csv(const std::map<RuleId, std::vector<ProfilePoint>>& profile);

} // namespace splab
