#ifndef TNSKETCH_LEDGER_HPP
#define TNSKETCH_LEDGER_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnsketch/flops.hpp"

namespace tnsketch {

/// Flop bookkeeping by phase (2 flops per scalar multiply-add throughout).
struct FlopLedger {
    std::map<std::string, BigInt> phases;
    std::vector<BigInt> per_iteration;

    void add(const std::string& phase, const BigInt& flops) { phases[phase] += flops; }

    BigInt total() const {
        BigInt t = 0;
        for (const auto& [k, v] : phases) t += v;
        return t;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["phases"] = nlohmann::json::object();
        for (const auto& [k, v] : phases) j["phases"][k] = v.str();
        j["total"] = total().str();
        j["per_iteration"] = nlohmann::json::array();
        for (const auto& v : per_iteration) j["per_iteration"].push_back(v.str());
        return j;
    }
};

}  // namespace tnsketch

#endif  // TNSKETCH_LEDGER_HPP
