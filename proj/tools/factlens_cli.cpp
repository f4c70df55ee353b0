// factlens command-line front end.
//
//   factlens run       --input data.jsonl --output report.json [--mock-fixtures routes.json]
//   factlens decompose --input data.jsonl --output decomposed.jsonl
//   factlens evaluate  --input data.jsonl --output report.json
//   factlens verify    --input data.jsonl --output report.json --holistic
//   factlens analyze   --input report.json --output reanalyzed.json
//
// Exit codes: 0 success, 2 some instances failed, 1 fatal error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "factlens/factlens.hpp"

namespace {

struct Flags {
    std::string input;
    std::string output;
    std::optional<std::string> config;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> parallelism;
    std::optional<std::string> cache_dir;
    std::optional<std::string> prompts_dir;
    std::optional<std::string> mock_fixtures;
    bool use_gold_subclaims = false;
    bool holistic = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--input", f.input, "input dataset (JSONL)")->required();
    cmd->add_option("--output", f.output, "output file")->required();
    cmd->add_option("--config", f.config, "key=value config file");
    cmd->add_option("--mode", f.mode, "evaluation mode: ensemble, statistical or llm");
    cmd->add_option("--seed", f.seed, "demonstration sampling seed");
    cmd->add_option("--parallelism", f.parallelism, "worker threads");
    cmd->add_option("--cache-dir", f.cache_dir, "response cache directory");
    cmd->add_option("--prompts-dir", f.prompts_dir, "prompt template directory");
    cmd->add_option("--mock-fixtures", f.mock_fixtures, "canned-response route file (offline runs)");
    cmd->add_flag("--use-gold-subclaims", f.use_gold_subclaims, "use sub_claims from the dataset when present");
    cmd->add_flag("--holistic", f.holistic, "also verify each claim as a whole");
}

factlens::RunConfig resolve_config(const Flags& f) {
    factlens::RunConfig c;
    if (f.config) factlens::load_config_file(c, *f.config);
    c.input = f.input;
    c.output = f.output;
    if (f.mode) factlens::apply_config_value(c, "mode", *f.mode);
    if (f.seed) c.seed = *f.seed;
    if (f.parallelism) c.parallelism = *f.parallelism;
    if (f.cache_dir) c.cache_dir = *f.cache_dir;
    if (f.prompts_dir) c.prompts_dir = *f.prompts_dir;
    if (f.mock_fixtures) c.mock_fixtures = *f.mock_fixtures;
    if (f.use_gold_subclaims) c.use_gold_subclaims = true;
    if (f.holistic) c.holistic = true;
    c.validate();
    return c;
}

void report_failures(const factlens::RunResults& r) {
    for (const auto& f : r.failures) std::cerr << "failed " << f.claim_id << " [" << f.stage << "]: " << f.message << '\n';
}

int run_stages(const Flags& flags, factlens::StageSet stages) {
    auto config = resolve_config(flags);
    auto entries = factlens::load_dataset(config.input);
    factlens::Pipeline pipeline(config, factlens::make_providers(config));
    auto results = pipeline.run(entries, stages);
    auto analysis = factlens::analysis::analyze_run(results, config.regression_l2);
    factlens::emit_report(config.output, config, results, analysis);
    report_failures(results);
    std::cerr << results.instances.size() << " analyzed, " << results.failures.size() << " failed\n";
    return factlens::run_exit_code(results);
}

int run_decompose(const Flags& flags) {
    auto config = resolve_config(flags);
    auto entries = factlens::load_dataset(config.input);
    factlens::Pipeline pipeline(config, factlens::make_providers(config));
    auto results = pipeline.run(entries, factlens::StageSet{false, false});
    std::vector<factlens::DatasetEntry> out;
    for (const auto& r : results.instances) out.push_back({r.record, r.decomposition, r.human_scores});
    factlens::write_dataset(config.output, out);
    report_failures(results);
    return factlens::run_exit_code(results);
}

int run_analyze(const Flags& flags) {
    factlens::RunConfig config;
    if (flags.config) factlens::load_config_file(config, *flags.config);
    auto results = factlens::load_report(flags.input);
    auto analysis = factlens::analysis::analyze_run(results, config.regression_l2);
    // Keep the producing run's configuration section.
    std::ifstream in(flags.input);
    auto original = nlohmann::json::parse(in);
    auto doc = factlens::build_report(config, results, analysis);
    doc["config"] = original.at("config");
    factlens::write_json_file(flags.output, doc);
    return factlens::run_exit_code(results);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Claim decomposition, sub-claim quality evaluation and fine-grained verification"};
    app.require_subcommand(1);

    Flags run_f, dec_f, eval_f, ver_f;
    add_common(app.add_subcommand("run", "decompose, evaluate, verify and analyze"), run_f);
    add_common(app.add_subcommand("decompose", "write the dataset back with generated sub_claims"), dec_f);
    add_common(app.add_subcommand("evaluate", "decompose and score sub-claim quality"), eval_f);
    add_common(app.add_subcommand("verify", "decompose and verify against evidence"), ver_f);

    Flags an_f;
    auto* analyze = app.add_subcommand("analyze", "recompute analyses of an existing report");
    analyze->add_option("--input", an_f.input, "report produced by run/evaluate/verify")->required();
    analyze->add_option("--output", an_f.output, "output report")->required();
    analyze->add_option("--config", an_f.config, "key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("run")) return run_stages(run_f, {true, true});
        if (app.got_subcommand("evaluate")) return run_stages(eval_f, {true, false});
        if (app.got_subcommand("verify")) return run_stages(ver_f, {false, true});
        if (app.got_subcommand("decompose")) return run_decompose(dec_f);
        if (app.got_subcommand("analyze")) return run_analyze(an_f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
