#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmroot/pm_function.hpp"

namespace pmroot {

/// Equality tolerance used wherever a hypothesis is an equality between
/// computed ordinates.
inline constexpr double kCondTol = 1e-12;

enum class TheoremCase {
    None,
    T21_case1,
    T21_case2,
    T21_case3,
    T22_case1,
    T22_case2,
    T22_case3,
    T23,
    T24_case1,
    T24_case2,
    T24_case3,
};

const char* to_string(TheoremCase c);

struct ConditionReport {
    bool k_plus = false;
    bool k_plus_zero = true;
    std::vector<double> k_plus_zero_witnesses;
    TheoremCase theorem_case = TheoremCase::None;
    std::vector<std::string> matched_clauses; // inequality chains, for audit
    std::string first_failed_clause;          // set when theorem_case is None
    double max_range = 0.0;                   // M = max over I of F
    std::optional<int> u_index;               // first-lap case only
    bool mirrored = false;
    int k_lap = -1; // lap index of the characteristic interval
};

/// Which first-generation map inverts a pocket.
enum class PocketMap { KMinus1, K, KPlus1 };

const char* to_string(PocketMap m);

struct FortPattern {
    /// c-indices: left_seq = (l_0 = k-1, ..., l_{s+1} = 0), strictly decreasing.
    std::vector<int> left_seq;
    /// c-indices: right_seq = (r_0 = k+2, ..., r_{t+1} = v+1), strictly increasing.
    std::vector<int> right_seq;
    /// Per-pocket inverse map, pocket j between consecutive seq entries.
    std::vector<PocketMap> left_schedule;
    std::vector<PocketMap> right_schedule;
    bool strict_mode = true;

    int s() const { return static_cast<int>(left_seq.size()) - 2; }
    int t() const { return static_cast<int>(right_seq.size()) - 2; }
};

/// Mode for the pocket extremum checks: Strict enforces the extremum
/// equalities; Relaxed enforces only the range inclusions the assembly needs.
enum class PatternMode { Strict, Relaxed };

struct ReversingReport {
    std::vector<double> fixed_points; // of F restricted to K, endpoints included if fixed
    double center = 0.0;              // the omega-fixed middle point
    bool endpoints_parity_ok = true;  // both endpoints fixed, or neither
    bool sign_condition_ok = true;
    int sign_samples = 0;
    bool is_reversing = false;
    /// Records that the pair condition is only checked between consecutive
    /// interior fixed points (endpoint quantification is ambiguous).
    std::string note;
};

enum class Verdict { Existence, Nonexistence, Unknown };

const char* to_string(Verdict v);

enum class RootClass { Increasing, Decreasing };

struct Table1Verdict {
    int order = 2;
    RootClass root_class = RootClass::Increasing;
    int root_height = 1;
    Verdict verdict = Verdict::Unknown;
    std::string table_row;
};

/// True iff F is strictly increasing on its characteristic interval.
bool check_kplus(const PMFunction& F);

struct KPlusZeroResult {
    bool holds = true;
    std::vector<double> witnesses;
};

/// The characteristic endpoints condition: F attains an endpoint of K only
/// when that endpoint is fixed. Witnesses are the offending preimages.
KPlusZeroResult check_kplus0(const PMFunction& F);

/// First-lap increasing-root hypotheses. K must be the first lap (WrongLap).
ConditionReport match_t21(const PMFunction& F);

/// Middle-lap increasing-root hypotheses plus the fort-pattern search.
std::pair<ConditionReport, std::optional<FortPattern>> match_t22(
    const PMFunction& F, PatternMode mode = PatternMode::Strict);

/// First-lap decreasing-root hypotheses (with reversing correspondence).
ConditionReport match_t23(const PMFunction& F);

/// Middle-lap decreasing-root hypotheses; reuses the t22 pattern search.
std::pair<ConditionReport, std::optional<FortPattern>> match_t24(
    const PMFunction& F, PatternMode mode = PatternMode::Strict);

/// Reversing-correspondence check of F restricted to [bounds]. F must be
/// strictly increasing there. Throws EvenFixedPointCount and
/// NonIsolatedFixedPoints on the degenerate fixed-point sets.
ReversingReport check_reversing_correspondence(const PMFunction& F, std::array<double, 2> bounds);

/// Tabulated existence/nonexistence answers for roots of order n when the
/// characteristic endpoints condition fails; Unknown off the table.
Table1Verdict classify_table1(const PMFunction& F, int order, RootClass root_class,
                              int root_height);

} // namespace pmroot
