#pragma once

#include <string>
#include <vector>

namespace cmll {

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string details;
};

struct SelftestReport {
    std::vector<CriterionResult> results;
    bool all_pass{true};
    std::string to_json(bool pretty) const;
};

// Runs the full acceptance suite (criteria 1-8 twice; criterion 9 compares
// the two serialized reports byte for byte).
SelftestReport run_selftest();

} // namespace cmll
