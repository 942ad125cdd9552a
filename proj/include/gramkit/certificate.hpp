#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gramkit {

/// Outcome of a hypothesis check. Certificates are one-sided: a failed bound
/// is Inconclusive, never a claim that the conclusion is false.
enum class Verdict { Holds, Inconclusive, Inapplicable };

std::string_view to_string(Verdict v);

enum class Relation { Less, LessEqual, Equal };

std::string_view to_string(Relation r);

/// One numeric comparison lhs (relation) rhs.
struct Check {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::LessEqual;
    bool holds = false;
};

/// A named theorem hypothesis check together with the quantities it used and
/// the conclusions it entitles when it holds.
struct Certificate {
    std::string name;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::string> conclusions;
    std::string note;

    bool holds() const { return verdict == Verdict::Holds; }

    /// Records a check and returns whether it held.
    bool check(std::string check_name, double lhs, Relation rel, double rhs,
               double guard = 1e-9);
    void value(std::string key, double v) { values.emplace_back(std::move(key), v); }
    std::optional<double> find(std::string_view key) const;
    bool all_checks_hold() const;
};

}  // namespace gramkit
