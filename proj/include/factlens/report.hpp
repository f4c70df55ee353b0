#pragma once

// Run report: one JSON document with sorted keys, so identical runs give
// byte-identical files.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "factlens/analysis/summary.hpp"
#include "factlens/config.hpp"
#include "factlens/dataset.hpp"
#include "factlens/results.hpp"

namespace factlens {

namespace report_detail {

using nlohmann::json;

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T, typename F>
json optional_json(const std::optional<T>& v, F&& f) {
    return v ? f(*v) : json(nullptr);
}

inline json score_json(MetricKind m, int v) { return level_json(m, v); }

inline int score_from_json(MetricKind m, const json& j) {
    auto v = parse_level(j, m);
    if (!v) throw DatasetError(0, "bad score " + j.dump() + " for " + std::string(to_string(m)));
    return *v;
}

inline json metric_scores_json(MetricKind m, const MetricScores& s) {
    json per = json::array();
    for (int v : s.per_subclaim) per.push_back(score_json(m, v));
    return {
        {"source", std::string(to_string(s.source))},
        {"per_subclaim", per},
        {"claim_level", s.claim_level ? score_json(m, *s.claim_level) : json(nullptr)},
        {"mean", number(s.mean())},
    };
}

inline json annotation_json(const std::vector<std::string>& subjects, const std::vector<std::string>& objects) {
    return {{"subjects", subjects}, {"objects", objects}};
}

inline json evaluation_json(const EvaluationReport& r) {
    json metrics = json::object();
    for (const auto& [m, s] : r.metrics) metrics[std::string(to_string(m))] = metric_scores_json(m, s);
    const auto& d = r.diagnostics;
    json anns = json::array();
    for (const auto& a : d.annotations) anns.push_back(annotation_json(a.subjects, a.objects));
    return {
        {"metrics", metrics},
        {"diagnostics",
         {
             {"fab", d.fab ? json(*d.fab) : json(nullptr)},
             {"red", d.red ? json(*d.red) : json(nullptr)},
             {"claim_entities",
              d.claim_entities ? annotation_json(d.claim_entities->subjects, d.claim_entities->objects) : json(nullptr)},
             {"annotations", anns},
             {"degenerate_annotations", d.degenerate_annotations},
         }},
    };
}

inline json verification_json(const VerificationOutcome& v, bool gold) {
    return {
        {"subclaim_labels", v.subclaim_labels},
        {"aggregated_label", v.aggregated_label},
        {"holistic_label", v.holistic_label ? json(*v.holistic_label) : json(nullptr)},
        {"correct", v.aggregated_label == gold},
    };
}

inline json instance_json(const InstanceResult& r) {
    json j = {
        {"id", r.record.id},
        {"claim", r.record.claim},
        {"gold_label", r.record.gold_label},
        {"decomposition",
         {
             {"generator", r.decomposition.generator},
             {"seed", r.decomposition.seed},
             {"sub_claims", r.decomposition.sub_claims},
         }},
        {"evaluation", r.evaluation ? evaluation_json(*r.evaluation) : json(nullptr)},
        {"verification", r.verification ? verification_json(*r.verification, r.record.gold_label) : json(nullptr)},
    };
    if (!r.human_scores.empty()) {
        json hs = json::object();
        for (const auto& [m, levels] : r.human_scores) {
            json arr = json::array();
            for (int l : levels) arr.push_back(score_json(m, l));
            hs[std::string(to_string(m))] = arr;
        }
        j["human_scores"] = hs;
    }
    return j;
}

inline json class_json(const analysis::ClassScores& c) {
    return {{"precision", number(c.precision)}, {"recall", number(c.recall)}, {"f1", number(c.f1)}, {"support", c.support}};
}

inline json classification_json(const analysis::ClassificationMetrics& m) {
    return {
        {"positive", class_json(m.positive)},
        {"negative", class_json(m.negative)},
        {"macro_precision", number(m.macro_precision)},
        {"macro_recall", number(m.macro_recall)},
        {"macro_f1", number(m.macro_f1)},
        {"accuracy", number(m.accuracy)},
        {"count", m.count},
    };
}

inline json config_json(const RunConfig& c) {
    return {
        {"mode", std::string(to_string(c.mode))},
        {"seed", c.seed},
        {"models",
         {{"decomposer", c.decomposer_model}, {"judge", c.judge_model}, {"verifier", c.verifier_model},
          {"extractor", c.extractor_model}}},
        {"statistical",
         {{"similarity_threshold", c.statistical.similarity_threshold},
          {"fab_medium_max", c.statistical.fab_medium_max},
          {"red_medium_max", c.statistical.red_medium_max}}},
        {"similarity", std::string(to_string(c.similarity))},
        {"use_gold_subclaims", c.use_gold_subclaims},
        {"holistic", c.holistic},
        {"analysis_l2", c.regression_l2},
    };
}

inline json analysis_json(const analysis::AnalysisResults& a, std::size_t n_instances, std::size_t n_failures) {
    json out = json::object();

    json summary = {
        {"analyzed", n_instances},
        {"failed", n_failures},
        {"fine_grained", a.fine_grained ? classification_json(*a.fine_grained) : json(nullptr)},
        {"holistic", a.holistic ? classification_json(*a.holistic) : json(nullptr)},
    };
    out["summary"] = summary;

    json means = json::object();
    for (const auto& [m, v] : a.metric_means) means[std::string(to_string(m))] = number(v);
    out["metric_means"] = means;

    json bins = json::object();
    for (const auto& t : a.metric_bins) {
        json levels = json::object();
        for (const auto& [level, bin] : t.bins) {
            levels[std::string(to_string(level))] = {
                {"count", bin.count},
                {"metrics", bin.metrics ? classification_json(*bin.metrics) : json(nullptr)},
            };
        }
        bins[std::string(to_string(t.metric))] = {
            {"considered", t.considered},
            {"bins", levels},
            {"warning", t.warning ? json(*t.warning) : json(nullptr)},
        };
    }
    out["metric_bins"] = bins;

    json complexity = json::object();
    json distribution = json::object();
    if (a.complexity) {
        for (const auto& [n, bin] : a.complexity->bins) {
            complexity[std::to_string(n)] = {
                {"count", bin.count},
                {"fine_grained", classification_json(bin.fine_grained)},
                {"holistic", bin.holistic ? classification_json(*bin.holistic) : json(nullptr)},
            };
        }
        for (const auto& [n, c] : a.complexity->distribution) distribution[std::to_string(n)] = c;
    }
    out["complexity_bins"] = complexity;
    out["subclaim_count_distribution"] = distribution;

    const auto& reg = a.regression;
    json regression = {
        {"target", "aggregated fine-grained label equals gold"},
        {"instances", reg.instances},
        {"warning", reg.warning ? json(*reg.warning) : json(nullptr)},
        {"model", nullptr},
        {"training", reg.training ? classification_json(*reg.training) : json(nullptr)},
    };
    if (reg.model) {
        json weights = json::object();
        json means_j = json::object();
        json stds = json::object();
        for (std::size_t i = 0; i < analysis::kRegressionFeatures.size(); ++i) {
            const std::string name(to_string(analysis::kRegressionFeatures[i]));
            weights[name] = number(reg.model->weights[i]);
            means_j[name] = number(reg.model->standardization.means[i]);
            stds[name] = number(reg.model->standardization.stds[i]);
        }
        regression["model"] = {
            {"weights", weights},
            {"bias", number(reg.model->bias)},
            {"feature_means", means_j},
            {"feature_stds", stds},
            {"iterations", reg.model->iterations},
            {"converged", reg.model->converged},
            {"final_loss", number(reg.model->final_loss)},
        };
    }
    out["regression"] = regression;

    json agreement = json::object();
    for (const auto& [m, h] : a.human_agreement) {
        json corr = nullptr;
        if (h.correlation) {
            corr = {
                {"pearson", number(h.correlation->r)},
                {"pearson_p", number(h.correlation->p_r)},
                {"spearman", number(h.correlation->rho)},
                {"spearman_p", number(h.correlation->p_rho)},
                {"n", h.correlation->n},
            };
        }
        auto alpha = [&](const std::optional<analysis::AgreementResult>& r) -> json {
            if (!r) return nullptr;
            return {{"alpha", number(r->alpha)}, {"items", r->items}, {"raters", r->raters},
                    {"pairable_values", r->pairable_values}};
        };
        agreement[std::string(to_string(m))] = {
            {"items", h.items},
            {"correlation", corr},
            {"evaluator_alpha", alpha(h.evaluator_alpha)},
            {"annotator_alpha", alpha(h.annotator_alpha)},
            {"warnings", h.warnings},
        };
    }
    out["human_agreement"] = agreement;
    return out;
}

inline MetricScores metric_scores_from_json(MetricKind m, const json& j) {
    MetricScores s;
    s.source = j.at("source").get<std::string>() == "statistical" ? ScoreSource::Statistical : ScoreSource::Llm;
    for (const auto& v : j.at("per_subclaim")) s.per_subclaim.push_back(score_from_json(m, v));
    if (!j.at("claim_level").is_null()) s.claim_level = score_from_json(m, j.at("claim_level"));
    return s;
}

inline InstanceResult instance_from_json(const json& j) {
    InstanceResult r;
    r.record.id = j.at("id").get<std::string>();
    r.record.claim = j.at("claim").get<std::string>();
    r.record.gold_label = j.at("gold_label").get<bool>();
    const auto& d = j.at("decomposition");
    r.decomposition.claim_id = r.record.id;
    r.decomposition.generator = d.at("generator").get<std::string>();
    r.decomposition.seed = d.at("seed").get<std::uint64_t>();
    r.decomposition.sub_claims = d.at("sub_claims").get<std::vector<std::string>>();
    if (const auto& e = j.at("evaluation"); !e.is_null()) {
        EvaluationReport rep;
        rep.claim_id = r.record.id;
        rep.subclaim_count = r.decomposition.size();
        for (const auto& [name, scores] : e.at("metrics").items()) {
            auto m = metric_from_string(name);
            if (!m) throw DatasetError(0, "unknown metric in report: " + name);
            rep.metrics[*m] = metric_scores_from_json(*m, scores);
        }
        const auto& dj = e.at("diagnostics");
        if (!dj.at("fab").is_null()) rep.diagnostics.fab = dj.at("fab").get<int>();
        if (!dj.at("red").is_null()) rep.diagnostics.red = dj.at("red").get<int>();
        if (const auto& ce = dj.at("claim_entities"); !ce.is_null()) {
            rep.diagnostics.claim_entities = ClaimEntities{ce.at("subjects").get<std::vector<std::string>>(),
                                                           ce.at("objects").get<std::vector<std::string>>()};
        }
        for (const auto& a : dj.at("annotations")) {
            rep.diagnostics.annotations.push_back(EntityAnnotation{a.at("subjects").get<std::vector<std::string>>(),
                                                                   a.at("objects").get<std::vector<std::string>>()});
        }
        rep.diagnostics.degenerate_annotations = dj.at("degenerate_annotations").get<std::vector<std::size_t>>();
        r.evaluation = std::move(rep);
    }
    if (const auto& v = j.at("verification"); !v.is_null()) {
        VerificationOutcome o;
        o.claim_id = r.record.id;
        o.subclaim_labels = v.at("subclaim_labels").get<std::vector<bool>>();
        o.aggregated_label = v.at("aggregated_label").get<bool>();
        if (!v.at("holistic_label").is_null()) o.holistic_label = v.at("holistic_label").get<bool>();
        r.verification = std::move(o);
    }
    if (j.contains("human_scores")) {
        for (const auto& [name, levels] : j.at("human_scores").items()) {
            auto m = metric_from_string(name);
            if (!m) throw DatasetError(0, "unknown metric in report: " + name);
            for (const auto& l : levels) r.human_scores[*m].push_back(score_from_json(*m, l));
        }
    }
    return r;
}

} // namespace report_detail

inline nlohmann::json build_report(const RunConfig& config, const RunResults& run,
                                   const analysis::AnalysisResults& analysis) {
    using nlohmann::json;
    json doc = report_detail::analysis_json(analysis, run.instances.size(), run.failures.size());
    doc["config"] = report_detail::config_json(config);
    json instances = json::array();
    for (const auto& r : run.instances) instances.push_back(report_detail::instance_json(r));
    doc["instances"] = instances;
    json failures = json::array();
    for (const auto& f : run.failures) failures.push_back({{"id", f.claim_id}, {"stage", f.stage}, {"message", f.message}});
    doc["failures"] = failures;
    doc["provider_calls"] = run.provider_calls;
    return doc;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write report to " + path.string());
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

inline void emit_report(const std::filesystem::path& path, const RunConfig& config, const RunResults& run,
                        const analysis::AnalysisResults& analysis) {
    write_json_file(path, build_report(config, run, analysis));
}

// Rebuilds the per-instance part of a report; analyses are recomputed.
inline RunResults load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError(0, "cannot open report " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
        RunResults run;
        for (const auto& j : doc.at("instances")) run.instances.push_back(report_detail::instance_from_json(j));
        for (const auto& f : doc.at("failures")) {
            run.failures.push_back(
                {f.at("id").get<std::string>(), f.at("stage").get<std::string>(), f.at("message").get<std::string>()});
        }
        if (doc.contains("provider_calls")) {
            run.provider_calls = doc.at("provider_calls").get<std::map<std::string, std::size_t>>();
        }
        return run;
    } catch (const nlohmann::json::exception& e) {
        throw DatasetError(0, "malformed report " + path.string() + ": " + e.what());
    }
}

} // namespace factlens
