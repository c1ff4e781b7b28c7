#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace dilat {

/// Outcome of a single check. Ordered from best to worst so that aggregation
/// can take a max.
enum class CheckStatus { pass, vacuous, degenerate, fail };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::vacuous: return "vacuous";
        case CheckStatus::degenerate: return "degenerate";
        case CheckStatus::fail: return "fail";
    }
    return "?";
}

inline CheckStatus worst(CheckStatus a, CheckStatus b) {
    return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

/// One audited fact: name, outcome, worst residual seen, and a witness
/// describing the sample that produced it (empty when nothing interesting
/// happened).
struct CheckRecord {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double residual = 0.0;
    std::string witness;
};

/// Aggregate of check records plus an echo of the sampling configuration.
/// merge_worst is commutative, so per-sample results may be produced in any
/// order (or concurrently) without changing the report.
struct Report {
    std::string title;
    std::map<std::string, std::string> config;
    std::vector<CheckRecord> records;

    void add(CheckRecord r) { records.push_back(std::move(r)); }

    void add(const std::string& name, CheckStatus st, double residual,
             const std::string& witness = "") {
        records.push_back({name, st, residual, witness});
    }

    void merge_worst(const std::string& name, CheckStatus st, double residual,
                     const std::string& witness) {
        for (auto& r : records) {
            if (r.name != name) continue;
            if (residual > r.residual) {
                r.residual = residual;
                if (!witness.empty()) r.witness = witness;
            }
            if (static_cast<int>(st) > static_cast<int>(r.status)) {
                r.status = st;
                if (!witness.empty()) r.witness = witness;
            }
            return;
        }
        records.push_back({name, st, residual, witness});
    }

    bool all_pass() const {
        return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) {
            return r.status == CheckStatus::pass || r.status == CheckStatus::vacuous;
        });
    }

    const CheckRecord* find(const std::string& name) const {
        for (const auto& r : records)
            if (r.name == name) return &r;
        return nullptr;
    }
};

}  // namespace dilat
