#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sublin/reductions.hpp"
#include "sublin/verify.hpp"

namespace sublin {

using Json = nlohmann::ordered_json;

inline Json to_json(const ReductionDecl& d) {
    return {{"name", d.name},
            {"kind", kind_name(d.kind)},
            {"source", family_name(d.source)},
            {"source_param", param_name(d.source_param)},
            {"target", family_name(d.target)},
            {"target_param", param_name(d.target_param)},
            {"answer_map", answer_map_name(d.answer_map)},
            {"k", d.bound.k},
            {"e", d.bound.e}};
}

inline Json to_json(const VerifyReport& r) {
    return {{"name", r.name},
            {"passed", r.passed()},
            {"instances_checked", r.instances_checked},
            {"answer_mismatches", r.mismatch_count},
            {"size_bound_violations", r.violation_count},
            {"precondition_violations", r.precondition_violations},
            {"step_zero_acceptances", r.step_zero_acceptances},
            {"max_ratio", r.max_ratio ? Json(r.max_ratio->str()) : Json(nullptr)},
            {"mismatch_examples", r.answer_mismatches},
            {"violation_examples", r.size_bound_violations}};
}

/// Fixed-width text table of verification results.
inline std::string verify_table(const std::vector<VerifyReport>& reports) {
    std::ostringstream os;
    os << std::left << std::setw(16) << "reduction" << std::right << std::setw(10) << "checked" << std::setw(12)
       << "mismatches" << std::setw(12) << "violations" << std::setw(8) << "precond" << std::setw(10) << "ratio"
       << "  result\n";
    for (const auto& r : reports)
        os << std::left << std::setw(16) << r.name << std::right << std::setw(10) << r.instances_checked
           << std::setw(12) << r.mismatch_count << std::setw(12) << r.violation_count << std::setw(8)
           << r.precondition_violations << std::setw(10) << (r.max_ratio ? r.max_ratio->str() : "-") << "  "
           << (r.passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

}  // namespace sublin
