#pragma once

// Entity- and similarity-based scores for atomicity, fabrication, coverage
// and redundancy. Sufficiency and readability have no statistical form.

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "factlens/core.hpp"
#include "factlens/error.hpp"
#include "factlens/similarity.hpp"

namespace factlens {

struct StatisticalConfig {
    double similarity_threshold = 0.9;  // T
    int fab_medium_max = 2;
    int red_medium_max = 1;  // in unordered pairs

    void validate() const {
        if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0)) {
            throw ConfigError("statistical.similarity_threshold must be in (0, 1]");
        }
        if (fab_medium_max < 1) throw ConfigError("statistical.fab_medium_max must be >= 1");
        if (red_medium_max < 1) throw ConfigError("statistical.red_medium_max must be >= 1");
    }
};

// A subject-less annotation, or one subject with no object, carries no
// countable relation; such sub-claims are labeled atomic and flagged.
inline bool is_degenerate(const EntityAnnotation& ann) noexcept {
    return ann.subjects.empty() || (ann.subjects.size() == 1 && ann.objects.empty());
}

inline AtomicityLabel score_atomicity(const EntityAnnotation& ann) noexcept {
    if (ann.subjects.size() > 1) return AtomicityLabel::NonAtomic2;
    if (ann.subjects.size() == 1 && ann.objects.size() > 1) return AtomicityLabel::NonAtomic1;
    return AtomicityLabel::Atomic;
}

struct FabricationResult {
    OrdinalScore level = OrdinalScore::Low;
    int fab = 0;
};

inline OrdinalScore band_fabrication(int fab, const StatisticalConfig& cfg = {}) noexcept {
    if (fab == 0) return OrdinalScore::Low;
    if (fab <= cfg.fab_medium_max) return OrdinalScore::Medium;
    return OrdinalScore::High;
}

namespace detail {

inline int count_missing(const std::vector<std::string>& items, const std::vector<std::string>& reference) {
    int n = 0;
    for (const auto& e : items) {
        if (std::find(reference.begin(), reference.end(), e) == reference.end()) ++n;
    }
    return n;
}

inline std::set<std::string> union_of(std::span<const EntityAnnotation> anns, bool subjects) {
    std::set<std::string> out;
    for (const auto& a : anns) {
        const auto& list = subjects ? a.subjects : a.objects;
        out.insert(list.begin(), list.end());
    }
    return out;
}

} // namespace detail

// fab = sum over sub-claims of |s_i \ S| + |o_i \ O|.
inline FabricationResult score_fabrication(const ClaimEntities& claim, std::span<const EntityAnnotation> anns,
                                           const StatisticalConfig& cfg = {}) {
    int fab = 0;
    for (const auto& a : anns) {
        fab += detail::count_missing(a.subjects, claim.subjects);
        fab += detail::count_missing(a.objects, claim.objects);
    }
    return {band_fabrication(fab, cfg), fab};
}

inline OrdinalScore score_coverage(const ClaimEntities& claim, std::span<const EntityAnnotation> anns) {
    const auto subj = detail::union_of(anns, true);
    const auto obj = detail::union_of(anns, false);
    auto covers = [](const std::set<std::string>& have, const std::vector<std::string>& need) {
        return std::all_of(need.begin(), need.end(), [&](const std::string& e) { return have.count(e) != 0; });
    };
    auto overlaps = [](const std::set<std::string>& have, const std::vector<std::string>& need) {
        return std::any_of(need.begin(), need.end(), [&](const std::string& e) { return have.count(e) != 0; });
    };
    if (covers(subj, claim.subjects) && covers(obj, claim.objects)) return OrdinalScore::High;
    if (!overlaps(subj, claim.subjects) && !overlaps(obj, claim.objects)) return OrdinalScore::Low;
    return OrdinalScore::Medium;
}

struct RedundancyResult {
    OrdinalScore level = OrdinalScore::Low;
    int red = 0;  // ordered pairs (i != j) with similarity above T
};

inline OrdinalScore band_redundancy(int red, const StatisticalConfig& cfg = {}) noexcept {
    const int unordered = (red + 1) / 2;
    if (unordered == 0) return OrdinalScore::Low;
    if (unordered <= cfg.red_medium_max) return OrdinalScore::Medium;
    return OrdinalScore::High;
}

inline RedundancyResult score_redundancy(const std::vector<std::string>& sub_claims, const SimilarityBackend& sim,
                                         const StatisticalConfig& cfg = {}) {
    if (sub_claims.empty()) throw PreconditionError("redundancy needs at least one sub-claim");
    int red = 0;
    for (std::size_t i = 0; i < sub_claims.size(); ++i) {
        for (std::size_t j = 0; j < sub_claims.size(); ++j) {
            if (i != j && sim.similarity(sub_claims[i], sub_claims[j]) > cfg.similarity_threshold) ++red;
        }
    }
    return {band_redundancy(red, cfg), red};
}

} // namespace factlens
