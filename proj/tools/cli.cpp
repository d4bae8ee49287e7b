/*
 * Copyright 2026 The logstruct Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include "logstruct/bench.hpp"
#include "logstruct/csv.hpp"
#include "logstruct/error.hpp"

namespace logstruct::cli {

namespace {

namespace fs = std::filesystem;

struct CliConfig {
    std::string subcommand;
    std::string manifest;
    std::string parser = "spell";
    double tau = 0.5;
    int depth = 4;
    double st = 0.4;
    int max_children = 100;
    std::string preprocess = "on";
    std::string out;
    std::string input;
    std::uint64_t limit = 2'000'000;
    double budget_seconds = 0.0;
    bool has_budget = false;
    int workers = 0;
};

class UsageError : public Error {
public:
    using Error::Error;
};

ParserSpec make_spec(const CliConfig& cfg) {
    auto kind = parse_parser_kind(cfg.parser);
    if (!kind) {
        throw UsageError("unknown parser '" + cfg.parser + "' (expected spell or drain)");
    }
    ParserSpec spec;
    spec.kind = *kind;
    spec.spell.tau = cfg.tau;
    spec.drain.depth = cfg.depth;
    spec.drain.st = cfg.st;
    spec.drain.max_children = cfg.max_children;
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

DatasetManifest require_manifest(const CliConfig& cfg) {
    if (cfg.manifest.empty()) {
        throw UsageError(cfg.subcommand + " needs --manifest");
    }
    return load_manifest(cfg.manifest);
}

fs::path output_dir(const CliConfig& cfg) {
    fs::path dir = cfg.out;
    if (dir.empty()) {
        const char* env = std::getenv("LOGSTRUCT_OUT");
        dir = env && *env ? fs::path(env) : fs::path(".");
    }
    fs::create_directories(dir);
    return dir;
}

fs::path output_file(const fs::path& dir, const std::string& dataset, const ParserSpec& spec,
                     const std::string& stem) {
    return dir / (dataset + "_" + std::string(to_string(spec.kind)) + "_" + stem);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

// --input wins; otherwise the full corpus when present, else the sample.
RawStream open_input(const CliConfig& cfg, const DatasetManifest* manifest, std::istream& in) {
    LineFormat format = manifest ? LineFormat::compile(manifest->log_format) : LineFormat();
    if (cfg.input == "-") {
        return RawStream(std::make_unique<std::istream>(in.rdbuf()), std::move(format));
    }
    if (!cfg.input.empty()) {
        return RawStream(fs::path(cfg.input), std::move(format));
    }
    if (!manifest) {
        throw UsageError(cfg.subcommand + " needs --manifest or --input");
    }
    const auto& path = fs::exists(manifest->raw_path) ? manifest->raw_path : manifest->sample_path;
    return RawStream(path, std::move(format));
}

std::string dataset_name(const CliConfig& cfg, const DatasetManifest* manifest) {
    if (manifest) {
        return manifest->name;
    }
    return cfg.input == "-" ? std::string("stdin") : fs::path(cfg.input).stem().string();
}

int cmd_parse(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto spec = make_spec(cfg);
    std::optional<DatasetManifest> manifest;
    if (!cfg.manifest.empty()) {
        manifest = load_manifest(cfg.manifest);
    }
    const auto masks = manifest ? MaskSet::compile(manifest->mask_patterns) : MaskSet();
    const bool masking = cfg.preprocess == "on";
    auto stream = open_input(cfg, manifest ? &*manifest : nullptr, in);

    // Parameters are reported under each template's final shape, so the
    // rows are written once the whole input has been seen.
    auto parser = make_parser(spec);
    std::vector<std::pair<TemplateId, TokenSequence>> rows;
    while (auto record = stream.next()) {
        auto tokens = preprocess_record(*record, masks, masking);
        const auto outcome = parser->feed(tokens);
        rows.emplace_back(outcome.template_id, std::move(tokens));
    }

    csv::write_row(out, {"line_index", "template_id", "template", "parameters"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [id, tokens] = rows[i];
        std::string params;
        for (const auto& p : parser->parameters(id, tokens)) {
            params += params.empty() ? p : "|" + p;
        }
        csv::write_row(out, {std::to_string(i), std::to_string(id_value(id)), parser->get(id).text(), params});
    }
    err << "lines: " << rows.size() << ", templates: " << parser->template_count() << '\n';
    return kExitOk;
}

int cmd_eval(const CliConfig& cfg, std::ostream& out) {
    const auto spec = make_spec(cfg);
    const auto manifest = require_manifest(cfg);
    const bool masking = cfg.preprocess == "on";
    const auto sample = prepare_sample(manifest, masking, cfg.workers);
    auto parser = make_parser(spec);
    const auto report = grouping_accuracy(run_parser(*parser, sample.records, sample.tokens), sample.truth);

    const auto path = output_file(output_dir(cfg), manifest.name, spec, "eval.csv");
    auto file = open_output(path);
    file << kEvalCsvHeader << '\n';
    write_eval_row(file, manifest.name, std::string(to_string(spec.kind)), masking, spec.describe(), report);

    out << manifest.name << ' ' << to_string(spec.kind) << " (" << spec.describe() << "): accuracy "
        << report.accuracy << ", templates " << report.predicted_template_count << " (truth "
        << report.truth_template_count << ")\n"
        << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_sweep(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto spec = make_spec(cfg);
    const auto manifest = require_manifest(cfg);
    const bool masking = cfg.preprocess == "on";
    auto grid = SweepGrid::defaults();
    grid.max_children = cfg.max_children;
    const auto rows = run_sweep(spec.kind, grid, manifest, masking, cfg.workers);

    const auto dir = output_dir(cfg);
    const auto path = output_file(dir, manifest.name, spec, "sweep.csv");
    {
        auto file = open_output(path);
        write_sweep_csv(file, manifest.name, masking, rows);
    }
    out << "wrote " << path.string() << " (" << rows.size() << " points)\n";

    std::size_t failed = 0;
    for (const auto& row : rows) {
        failed += row.report ? 0 : 1;
    }
    if (const auto* best = best_row(rows)) {
        out << "best: " << best->spec.describe() << " accuracy " << best->report->accuracy << '\n';
    }
    if (failed == 0) {
        return kExitOk;
    }
    const auto errors = output_file(dir, manifest.name, spec, "sweep_errors.csv");
    auto file = open_output(errors);
    write_sweep_errors_csv(file, rows);
    err << failed << " of " << rows.size() << " points failed; see " << errors.string() << '\n';
    return failed == rows.size() ? kExitFatal : kExitPartial;
}

int cmd_ab(const CliConfig& cfg, std::ostream& out) {
    const auto spec = make_spec(cfg);
    const auto manifest = require_manifest(cfg);
    const auto result = run_ab(spec, manifest);

    const auto path = output_file(output_dir(cfg), manifest.name, spec, "ab.csv");
    auto file = open_output(path);
    file << kEvalCsvHeader << '\n';
    const std::string parser(to_string(spec.kind));
    write_eval_row(file, manifest.name, parser, true, spec.describe(), result.with);
    write_eval_row(file, manifest.name, parser, false, spec.describe(), result.without);

    out << manifest.name << ' ' << parser << " (" << spec.describe() << ")\n"
        << "  accuracy  " << format_ab_cell(result.with.accuracy, 2, result.ratio.accuracy, 1) << "  without "
        << std::fixed << std::setprecision(2) << result.without.accuracy << std::defaultfloat << '\n'
        << "  templates "
        << format_ab_cell(static_cast<double>(result.with.predicted_template_count), 0, result.ratio.templates, 2)
        << "  without " << result.without.predicted_template_count << '\n'
        << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_bench(const CliConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto spec = make_spec(cfg);
    std::optional<DatasetManifest> manifest;
    if (!cfg.manifest.empty()) {
        manifest = load_manifest(cfg.manifest);
    }
    const auto* m = manifest ? &*manifest : nullptr;
    const auto masks = m ? MaskSet::compile(m->mask_patterns) : MaskSet();
    auto stream = open_input(cfg, m, in);

    TimingOptions options;
    options.limit = cfg.limit == 0 ? std::nullopt : std::optional<std::uint64_t>(cfg.limit);
    if (cfg.has_budget) {
        options.budget = std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::duration<double>(cfg.budget_seconds));
    }
    auto parser = make_parser(spec);
    // Timing is single-threaded; --workers does not apply here.
    const auto report = run_timing(*parser, stream, cfg.preprocess == "on" ? &masks : nullptr, options);

    const auto dataset = dataset_name(cfg, m);
    const auto dir = output_dir(cfg);
    const auto latency = output_file(dir, dataset, spec, "bench.csv");
    const auto cumulative = output_file(dir, dataset, spec, "bench_cumulative.csv");
    const auto summary = output_file(dir, dataset, spec, "bench_summary.txt");
    {
        auto file = open_output(latency);
        write_latency_csv(file, report);
    }
    {
        auto file = open_output(cumulative);
        write_cumulative_csv(file, report);
    }
    {
        auto file = open_output(summary);
        write_latency_summary(file, dataset, spec, report);
    }
    write_latency_summary(out, dataset, spec, report);
    for (const auto& problem : check_latency_consistency(report)) {
        err << "inconsistent latency report: " << problem << '\n';
    }
    out << "wrote " << latency.string() << ", " << cumulative.string() << ", " << summary.string() << '\n';
    return kExitOk;
}

void add_common(CLI::App* sub, CliConfig& cfg) {
    sub->add_option("--parser", cfg.parser, "spell or drain")->check(CLI::IsMember({"spell", "drain"}));
    sub->add_option("--tau", cfg.tau, "Spell match threshold in [0, 1]");
    sub->add_option("--depth", cfg.depth, "Drain tree depth (>= 3)");
    sub->add_option("--st", cfg.st, "Drain similarity threshold in [0, 1]");
    sub->add_option("--max-children", cfg.max_children, "Drain fan-out cap (>= 1)");
    sub->add_option("--preprocess", cfg.preprocess, "apply the manifest's masks")
        ->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--manifest", cfg.manifest, "dataset manifest (JSON)");
    sub->add_option("--out", cfg.out, "output directory (default $LOGSTRUCT_OUT or .)");
    sub->add_option("--limit", cfg.limit, "record cap for bench; 0 reads everything");
    sub->add_option("--budget", cfg.budget_seconds, "wall-clock budget in seconds")
        ->check(CLI::PositiveNumber)
        ->each([&cfg](const std::string&) { cfg.has_budget = true; });
    sub->add_option("--workers", cfg.workers, "worker threads (default: all cores, bench: 1)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--input", cfg.input, "log file overriding the manifest's; - for stdin");
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Streaming log template mining (Spell, Drain) and evaluation harness", "logstruct"};
    app.require_subcommand(1, 1);
    CliConfig cfg;
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"parse", "print template id, template and parameters for each line"},
             {"eval", "grouping accuracy on the manifest's labeled sample"},
             {"sweep", "accuracy over the default parameter grid"},
             {"ab", "accuracy and template count with and without preprocessing"},
             {"bench", "per-message latency over a log stream"},
         }) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, cfg);
        sub->callback([&cfg, name = name] { cfg.subcommand = name; });
    }

    std::vector<const char*> argv{"logstruct"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cfg.subcommand == "parse") {
            return cmd_parse(cfg, in, out, err);
        }
        if (cfg.subcommand == "eval") {
            return cmd_eval(cfg, out);
        }
        if (cfg.subcommand == "sweep") {
            return cmd_sweep(cfg, out, err);
        }
        if (cfg.subcommand == "ab") {
            return cmd_ab(cfg, out);
        }
        return cmd_bench(cfg, in, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFatal;
    }
}

} // namespace logstruct::cli
