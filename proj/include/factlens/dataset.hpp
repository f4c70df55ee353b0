#pragma once

// Newline-delimited JSON dataset ingestion.
//
// One object per line:
//   {"id": "...", "claim": "...", "evidence": "...", "label": true | "supported" | ...,
//    "source": "...",                                   optional
//    "sub_claims": ["...", ...],                        optional, ground truth
//    "generator": "...", "seed": 17,                    optional, provenance of sub_claims
//    "human_scores": {"coverage": ["high", "medium"]}}  optional, one level per annotator

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/text.hpp"

namespace factlens {

struct DatasetEntry {
    ClaimRecord record;
    std::optional<Decomposition> decomposition;
    std::map<MetricKind, std::vector<int>> human_scores;  // numeric levels per annotator
};

inline std::optional<bool> parse_gold_label(const nlohmann::json& j) {
    if (j.is_boolean()) return j.get<bool>();
    if (!j.is_string()) return std::nullopt;
    const std::string s = text::to_lower(text::trim(j.get<std::string>()));
    if (s == "true" || s == "supported" || s == "supports" || s == "entailed") return true;
    if (s == "false" || s == "refuted" || s == "refutes" || s == "not supported") return false;
    return std::nullopt;
}

inline std::optional<int> parse_level(const nlohmann::json& j, MetricKind metric) {
    if (j.is_number_integer()) {
        int v = j.get<int>();
        if (v >= 1 && v <= 3) return v;
        return std::nullopt;
    }
    if (!j.is_string()) return std::nullopt;
    const std::string s = text::to_lower(text::trim(j.get<std::string>()));
    if (metric == MetricKind::Atomicity) {
        if (auto a = atomicity_from_string(s)) return ordinal_to_numeric(*a);
    }
    if (auto o = ordinal_from_string(s)) return ordinal_to_numeric(*o);
    return std::nullopt;
}

inline DatasetEntry parse_dataset_line(const std::string& line, std::size_t lineno) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DatasetError(lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw DatasetError(lineno, "record is not an object");
    auto req_string = [&](const char* field) {
        if (!j.contains(field)) throw DatasetError(lineno, std::string("missing \"") + field + "\"");
        if (!j[field].is_string()) throw DatasetError(lineno, std::string("\"") + field + "\" must be a string");
        return j[field].get<std::string>();
    };

    DatasetEntry e;
    e.record.id = req_string("id");
    if (e.record.id.empty()) throw DatasetError(lineno, "\"id\" is empty");
    e.record.claim = req_string("claim");
    if (text::trim(e.record.claim).empty()) throw DatasetError(lineno, "\"claim\" is empty");
    if (j.contains("evidence")) e.record.evidence = req_string("evidence");
    if (j.contains("source")) e.record.source = req_string("source");
    if (!j.contains("label")) throw DatasetError(lineno, "missing \"label\"");
    auto label = parse_gold_label(j["label"]);
    if (!label) throw DatasetError(lineno, "unknown label " + j["label"].dump());
    e.record.gold_label = *label;

    if (j.contains("sub_claims")) {
        const auto& subs = j["sub_claims"];
        if (!subs.is_array() || subs.empty()) throw DatasetError(lineno, "\"sub_claims\" must be a non-empty list");
        Decomposition d;
        d.claim_id = e.record.id;
        for (const auto& s : subs) {
            if (!s.is_string() || text::trim(s.get<std::string>()).empty()) {
                throw DatasetError(lineno, "\"sub_claims\" entries must be non-empty strings");
            }
            d.sub_claims.push_back(s.get<std::string>());
        }
        d.generator = j.contains("generator") ? req_string("generator") : std::string(kGroundTruthGenerator);
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned()) throw DatasetError(lineno, "\"seed\" must be a non-negative integer");
            d.seed = j["seed"].get<std::uint64_t>();
        }
        e.decomposition = std::move(d);
    }

    if (j.contains("human_scores")) {
        const auto& hs = j["human_scores"];
        if (!hs.is_object()) throw DatasetError(lineno, "\"human_scores\" must be an object");
        for (const auto& [name, levels] : hs.items()) {
            auto metric = metric_from_string(name);
            if (!metric) throw DatasetError(lineno, "unknown metric in human_scores: " + name);
            if (!levels.is_array()) throw DatasetError(lineno, "human_scores." + name + " must be a list");
            std::vector<int> values;
            for (const auto& l : levels) {
                auto v = parse_level(l, *metric);
                if (!v) throw DatasetError(lineno, "bad level in human_scores." + name + ": " + l.dump());
                values.push_back(*v);
            }
            e.human_scores[*metric] = std::move(values);
        }
    }
    return e;
}

inline std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError(0, "cannot open dataset " + path.string());
    std::vector<DatasetEntry> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto e = parse_dataset_line(line, lineno);
        if (!ids.insert(e.record.id).second) throw DatasetError(lineno, "duplicate id \"" + e.record.id + "\"");
        out.push_back(std::move(e));
    }
    return out;
}

inline nlohmann::json level_json(MetricKind metric, int level) {
    if (metric == MetricKind::Atomicity) return std::string(to_string(static_cast<AtomicityLabel>(level)));
    return std::string(to_string(static_cast<OrdinalScore>(level)));
}

inline nlohmann::json to_json(const DatasetEntry& e) {
    nlohmann::json j = {
        {"id", e.record.id},
        {"claim", e.record.claim},
        {"evidence", e.record.evidence},
        {"label", e.record.gold_label},
    };
    if (!e.record.source.empty()) j["source"] = e.record.source;
    if (e.decomposition) {
        j["sub_claims"] = e.decomposition->sub_claims;
        j["generator"] = e.decomposition->generator;
        j["seed"] = e.decomposition->seed;
    }
    if (!e.human_scores.empty()) {
        nlohmann::json hs = nlohmann::json::object();
        for (const auto& [m, levels] : e.human_scores) {
            auto& arr = hs[std::string(to_string(m))] = nlohmann::json::array();
            for (int l : levels) arr.push_back(level_json(m, l));
        }
        j["human_scores"] = std::move(hs);
    }
    return j;
}

inline void write_dataset(const std::filesystem::path& path, const std::vector<DatasetEntry>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError(0, "cannot write " + path.string());
    for (const auto& e : entries) out << to_json(e).dump() << '\n';
    if (!out) throw DatasetError(0, "write failed for " + path.string());
}

} // namespace factlens
