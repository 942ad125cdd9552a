#include "gramkit/certificate.hpp"

#include <algorithm>

#include "gramkit/numeric.hpp"

namespace gramkit {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Inapplicable: return "inapplicable";
    }
    return "unknown";
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::Less: return "<";
        case Relation::LessEqual: return "<=";
        case Relation::Equal: return "==";
    }
    return "?";
}

bool Certificate::check(std::string check_name, double lhs, Relation rel, double rhs, double guard) {
    bool ok = false;
    switch (rel) {
        case Relation::Less: ok = strictly_less(lhs, rhs, guard); break;
        case Relation::LessEqual: ok = lhs <= rhs; break;
        case Relation::Equal: ok = lhs == rhs; break;
    }
    checks.push_back({std::move(check_name), lhs, rhs, rel, ok});
    return ok;
}

std::optional<double> Certificate::find(std::string_view key) const {
    for (const auto& [k, v] : values)
        if (k == key) return v;
    return std::nullopt;
}

bool Certificate::all_checks_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

}  // namespace gramkit
