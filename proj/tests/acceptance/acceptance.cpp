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

// Acceptance harness. Usage: logstruct_acceptance [criterion...]
// Prints one "PASS|FAIL|NOT RUN <criterion>" line per criterion,
// followed by indented detail lines. With a single criterion the exit
// status is 0 (pass), 1 (fail) or 77 (not run: dataset files missing).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "logstruct/bench.hpp"
#include "logstruct/drain.hpp"
#include "logstruct/eval.hpp"
#include "logstruct/ingest.hpp"
#include "logstruct/parsers.hpp"
#include "logstruct/preprocess.hpp"
#include "logstruct/spell.hpp"
#include "synthetic.hpp"

namespace logstruct {
namespace {

namespace fs = std::filesystem;

constexpr int kExitNotRun = 77;
const std::vector<std::string> kDatasets{"HDFS", "Android", "OpenStack"};

enum class Status { pass, fail, not_run };

struct Verdict {
    Status status = Status::pass;
    std::vector<std::string> details;

    // Records a clause; any failing clause fails the criterion.
    void check(bool ok, const std::string& what) {
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        if (!ok && status == Status::pass) {
            status = Status::fail;
        }
    }
    void note(const std::string& what) { details.push_back("info " + what); }
};

std::string fixed(double value, int decimals) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(decimals) << value;
    return out.str();
}

fs::path manifest_dir() {
    if (const char* env = std::getenv("LOGSTRUCT_MANIFEST_DIR")) {
        return env;
    }
    return fs::path(LOGSTRUCT_SOURCE_DIR) / "manifests";
}

DatasetManifest manifest_for(const std::string& name) { return load_manifest(manifest_dir() / (name + ".json")); }

// Names of datasets whose 2k sample or truth file is absent.
std::vector<std::string> missing_datasets() {
    std::vector<std::string> missing;
    for (const auto& name : kDatasets) {
        const auto m = manifest_for(name);
        if (!fs::exists(m.sample_path) || !fs::exists(m.truth_path)) {
            missing.push_back(name + " (" + m.sample_path.string() + ")");
        }
    }
    return missing;
}

// Samples and sweeps are shared between criteria within one process.
const PreparedSample& sample(const std::string& name, bool preprocessing) {
    static std::map<std::pair<std::string, bool>, PreparedSample> cache;
    auto key = std::make_pair(name, preprocessing);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, prepare_sample(manifest_for(name), preprocessing)).first;
    }
    return it->second;
}

const std::vector<SweepRow>& sweep(ParserKind kind, const std::string& name) {
    static std::map<std::pair<ParserKind, std::string>, std::vector<SweepRow>> cache;
    auto key = std::make_pair(kind, name);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const auto points = SweepGrid::defaults().points(kind);
        it = cache.emplace(key, run_sweep(points, sample(name, true))).first;
    }
    return it->second;
}

const SweepRow& best(ParserKind kind, const std::string& name) {
    const auto& rows = sweep(kind, name);
    const SweepRow* row = best_row(rows);
    if (row == nullptr) {
        throw std::runtime_error("every sweep point failed for " + name);
    }
    return *row;
}

std::string cell(ParserKind kind, const std::string& name) { return std::string(to_string(kind)) + " " + name; }

Verdict needs_data() {
    Verdict v;
    const auto missing = missing_datasets();
    if (!missing.empty()) {
        v.status = Status::not_run;
        for (const auto& m : missing) {
            v.note("missing " + m);
        }
    }
    return v;
}

// --- criteria --------------------------------------------------------------

Verdict accuracy() {
    Verdict v = needs_data();
    if (v.status == Status::not_run) {
        return v;
    }
    struct Target {
        ParserKind kind;
        std::string dataset;
        double accuracy;
        double accuracy_tol;
        std::optional<std::size_t> templates;
    };
    const std::vector<Target> targets{
        {ParserKind::spell, "HDFS", 1.00, 0.02, 14},  {ParserKind::drain, "HDFS", 1.00, 0.02, 16},
        {ParserKind::spell, "Android", 0.91, 0.05, {}}, {ParserKind::drain, "Android", 0.91, 0.05, {}},
        {ParserKind::spell, "OpenStack", 0.77, 0.05, {}},
    };
    for (const auto& t : targets) {
        const auto& row = best(t.kind, t.dataset);
        const auto& r = *row.report;
        const std::string where = cell(t.kind, t.dataset) + " [" + row.spec.describe() + "]";
        v.check(std::abs(r.accuracy - t.accuracy) <= t.accuracy_tol + 1e-9,
                where + " accuracy " + fixed(r.accuracy, 3) + " vs " + fixed(t.accuracy, 2) + " +/- " +
                    fixed(t.accuracy_tol, 2));
        if (t.templates) {
            const auto diff = static_cast<long>(r.predicted_template_count) - static_cast<long>(*t.templates);
            v.check(std::labs(diff) <= 2, where + " templates " + std::to_string(r.predicted_template_count) +
                                              " vs " + std::to_string(*t.templates) + " +/- 2");
        }
        v.check(row.runtime_ms < 60'000.0, where + " runtime " + fixed(row.runtime_ms, 1) + " ms < 60 s");
    }
    return v;
}

Verdict preprocessing_direction() {
    Verdict v = needs_data();
    if (v.status == Status::not_run) {
        return v;
    }
    auto ab = [](ParserKind kind, const std::string& name) {
        const auto spec = best(kind, name).spec;
        return run_ab(spec, sample(name, true), sample(name, false));
    };
    auto describe = [](const AbResult& r) {
        return "acc " + fixed(r.with.accuracy, 3) + " vs " + fixed(r.without.accuracy, 3) + ", templates " +
               std::to_string(r.with.predicted_template_count) + " vs " +
               std::to_string(r.without.predicted_template_count);
    };
    for (const auto& name : kDatasets) {
        const auto r = ab(ParserKind::spell, name);
        v.check(r.with.accuracy >= 1.4 * r.without.accuracy,
                cell(ParserKind::spell, name) + " accuracy with >= 1.4x without: " + describe(r));
        v.check(r.with.predicted_template_count < r.without.predicted_template_count,
                cell(ParserKind::spell, name) + " fewer templates with: " + describe(r));
    }
    const auto os = ab(ParserKind::drain, "OpenStack");
    v.check(os.with.accuracy < os.without.accuracy, "drain OpenStack accuracy drops with: " + describe(os));
    v.check(os.with.predicted_template_count >= 3 * os.without.predicted_template_count,
            "drain OpenStack templates with >= 3x without: " + describe(os));
    const auto hdfs = ab(ParserKind::drain, "HDFS");
    v.check(std::abs(hdfs.with.accuracy - hdfs.without.accuracy) <= 0.02 + 1e-9,
            "drain HDFS accuracy unchanged within 0.02: " + describe(hdfs));
    return v;
}

Verdict sweep_shape() {
    Verdict v = needs_data();
    if (v.status == Status::not_run) {
        return v;
    }
    const std::map<std::string, double> argmax_target{{"OpenStack", 0.8}, {"Android", 0.85}, {"HDFS", 0.5}};
    constexpr double kTauStep = 0.05;
    for (const auto& name : kDatasets) {
        const double tau = best(ParserKind::spell, name).spec.spell.tau;
        v.check(std::abs(tau - argmax_target.at(name)) <= kTauStep + 1e-9,
                "spell " + name + " argmax tau " + fixed(tau, 2) + " within one step of " +
                    fixed(argmax_target.at(name), 2));
    }

    const auto& hdfs = sweep(ParserKind::spell, "HDFS");
    std::size_t low = 0;
    double lowest = 1.0;
    for (const auto& row : hdfs) {
        const double acc = row.report ? row.report->accuracy : 0.0;
        low += acc < 0.7 ? 1 : 0;
        lowest = std::min(lowest, acc);
    }
    v.check(2 * low >= hdfs.size(), "spell HDFS points below 0.7: " + std::to_string(low) + "/" +
                                        std::to_string(hdfs.size()) + " >= 50%");
    v.check(lowest <= 0.05 + 1e-9, "spell HDFS minimum " + fixed(lowest, 3) + " <= 0.05");

    for (const auto& name : kDatasets) {
        double overall = 0.0;
        double high_st = 0.0;
        for (const auto& row : sweep(ParserKind::drain, name)) {
            const double acc = row.report ? row.report->accuracy : 0.0;
            overall = std::max(overall, acc);
            if (row.spec.drain.st > 0.7 + 1e-9) {
                high_st = std::max(high_st, acc);
            }
        }
        v.check(high_st < overall, "drain " + name + " best at st > 0.7 (" + fixed(high_st, 3) +
                                       ") below maximum " + fixed(overall, 3));
        if (name == "Android") {
            v.check(overall <= 0.80 + 1e-9, "drain Android maximum " + fixed(overall, 3) + " <= 0.80");
        } else {
            v.check(overall >= 0.88 - 1e-9, "drain " + name + " maximum " + fixed(overall, 3) + " >= 0.88");
        }
    }
    return v;
}

LatencyReport time_stream(const ParserSpec& spec, const fs::path& path, const std::string& format,
                          const MaskSet& masks) {
    auto parser = make_parser(spec);
    RawStream stream(path, LineFormat::compile(format));
    TimingOptions options;
    options.limit = std::nullopt;
    options.sample_every = 100;
    return run_timing(*parser, stream, &masks, options);
}

void record_report(Verdict& v, const std::string& where, const LatencyReport& report) {
    const auto problems = check_latency_consistency(report);
    std::string joined;
    for (const auto& p : problems) {
        joined += (joined.empty() ? "" : "; ") + p;
    }
    v.check(problems.empty(), where + " latency report consistent" + (joined.empty() ? "" : ": " + joined));
    v.note(where + " mean " + fixed(report.summary.mean_ns, 0) + " ns, max/mean " +
           fixed(report.summary.max_over_mean, 1));
}

Verdict timing() {
    Verdict v;
    // Consistency checks always run, on a synthetic stream.
    const auto dir = testing::scratch_dir("acceptance_timing");
    const auto corpus = testing::make_corpus(5000, 17);
    const auto synth = load_manifest(testing::write_dataset(corpus, dir, "Synth"));
    const auto synth_masks = MaskSet::compile(synth.mask_patterns);
    for (auto kind : {ParserKind::spell, ParserKind::drain}) {
        ParserSpec spec;
        spec.kind = kind;
        record_report(v, std::string(to_string(kind)) + " synthetic", time_stream(spec, synth.sample_path, synth.log_format,
                                                                     synth_masks));
    }
    fs::remove_all(dir);

    const auto missing = missing_datasets();
    if (!missing.empty()) {
        for (const auto& m : missing) {
            v.note("missing " + m);
        }
        if (v.status == Status::pass) {
            v.status = Status::not_run;
        }
        return v;
    }
    for (const auto& name : kDatasets) {
        const auto manifest = manifest_for(name);
        const auto masks = MaskSet::compile(manifest.mask_patterns);
        std::map<ParserKind, double> mean;
        for (auto kind : {ParserKind::spell, ParserKind::drain}) {
            const auto report =
                time_stream(best(kind, name).spec, manifest.sample_path, manifest.log_format, masks);
            record_report(v, cell(kind, name), report);
            mean[kind] = report.summary.mean_ns;
        }
        v.check(mean[ParserKind::drain] < mean[ParserKind::spell],
                name + " drain mean " + fixed(mean[ParserKind::drain], 0) + " ns < spell mean " +
                    fixed(mean[ParserKind::spell], 0) + " ns");
    }
    return v;
}

Verdict uuid_regression() {
    Verdict v;
    const std::string uuid = "54b44eb-2d1a-4aa2-ba6b-074d35f8f12c";
    const std::string fragmented = "<*>b<*>eb-<*>d<*>a-<*>aa<*>-ba<*>b-<*>d<*>f<*>f<*>c";
    const auto android = MaskSet::compile(manifest_for("Android").mask_patterns);
    const auto shape = android.apply(uuid);
    v.check(shape == fragmented, "Android masks turn the UUID into " + shape + " (expected " + fragmented + ")");
    v.note("OpenStack masks give " + MaskSet::compile(manifest_for("OpenStack").mask_patterns).apply(uuid));

    const std::string content = "[instance: " + uuid + "] Terminating instance";
    DrainConfig config;
    config.depth = 5;
    DrainParser raw_parser(config);
    DrainParser masked_parser(config);
    const auto raw = raw_parser.leaf_path(raw_parser.feed(tokenize(content)).template_id);
    const auto masked = masked_parser.leaf_path(masked_parser.feed(tokenize(android.apply(content))).template_id);
    v.check(raw != masked, "drain leaf unmasked {" + join_tokens(raw, ",") + "} differs from masked {" +
                               join_tokens(masked, ",") + "}");
    return v;
}

// --- properties ------------------------------------------------------------

std::size_t lcs_oracle(const TokenSequence& a, const TokenSequence& b, std::size_t i, std::size_t j,
                       std::map<std::pair<std::size_t, std::size_t>, std::size_t>& memo) {
    if (i == a.size() || j == b.size()) {
        return 0;
    }
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) {
        return it->second;
    }
    const std::size_t best = a[i] == b[j] ? 1 + lcs_oracle(a, b, i + 1, j + 1, memo)
                                          : std::max(lcs_oracle(a, b, i + 1, j, memo), lcs_oracle(a, b, i, j + 1, memo));
    memo[key] = best;
    return best;
}

bool is_subsequence(const TokenSequence& sub, const TokenSequence& seq) {
    std::size_t k = 0;
    for (const auto& token : seq) {
        if (k < sub.size() && sub[k] == token) {
            ++k;
        }
    }
    return k == sub.size();
}

std::vector<TemplateId> feed_all(LogParser& parser, const std::vector<TokenSequence>& stream) {
    std::vector<TemplateId> ids;
    for (const auto& tokens : stream) {
        ids.push_back(parser.feed(tokens).template_id);
    }
    return ids;
}

std::vector<TokenSequence> random_stream(std::mt19937_64& rng, std::size_t n) {
    std::vector<TokenSequence> stream;
    for (std::size_t i = 0; i < n; ++i) {
        stream.push_back(testing::random_tokens(rng, 1, 8, 5));
    }
    return stream;
}

Verdict properties() {
    Verdict v;
    std::mt19937_64 rng(7);

    bool lcs_ok = true;
    for (int trial = 0; trial < 1000 && lcs_ok; ++trial) {
        const auto a = testing::random_tokens(rng, 0, 12, 4);
        const auto b = testing::random_tokens(rng, 0, 12, 4);
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
        const auto got = lcs(a, b);
        lcs_ok = got.size() == lcs_oracle(a, b, 0, 0, memo) && is_subsequence(got, a) && is_subsequence(got, b);
    }
    v.check(lcs_ok, "LCS equals the recursive oracle on 1000 random pairs");

    bool accuracy_ok = true;
    for (int trial = 0; trial < 1000 && accuracy_ok; ++trial) {
        const std::size_t n = rng() % 51;
        Assignment a;
        GroundTruth t;
        std::vector<std::uint64_t> pred(n);
        std::vector<std::uint64_t> truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = rng() % 6;
            truth[i] = trial % 2 == 0 ? pred[i] ^ (rng() % 8 == 0 ? 1 : 0) : rng() % 6;
            a.entries[i] = static_cast<TemplateId>(pred[i]);
            t.labels[i] = "E" + std::to_string(truth[i]);
            t.truth_templates[t.labels[i]] = t.labels[i];
        }
        std::size_t correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool same = true;
            for (std::size_t j = 0; j < n && same; ++j) {
                same = (pred[i] == pred[j]) == (truth[i] == truth[j]);
            }
            correct += same ? 1 : 0;
        }
        const double expected = n == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(n);
        accuracy_ok = std::abs(grouping_accuracy(a, t).accuracy - expected) < 1e-12;
    }
    v.check(accuracy_ok, "grouping accuracy equals the set-equality oracle on 1000 random partitions");

    bool online_ok = true;
    for (auto kind : {ParserKind::spell, ParserKind::drain}) {
        for (int trial = 0; trial < 20 && online_ok; ++trial) {
            const auto stream = random_stream(rng, 200);
            ParserSpec spec;
            spec.kind = kind;
            auto first = make_parser(spec);
            auto second = make_parser(spec);
            const auto full = feed_all(*first, stream);
            online_ok = full == feed_all(*second, stream);
            const std::size_t cut = rng() % stream.size();
            auto prefix = make_parser(spec);
            const auto head = feed_all(*prefix, {stream.begin(), stream.begin() + static_cast<long>(cut)});
            online_ok = online_ok && std::equal(head.begin(), head.end(), full.begin());
        }
    }
    v.check(online_ok, "both parsers are deterministic and prefix-replay online on random streams");

    bool drain_ok = true;
    for (int trial = 0; trial < 20 && drain_ok; ++trial) {
        DrainConfig config;
        config.st = 0.3;
        DrainParser parser(config);
        std::map<TemplateId, TokenSequence> previous;
        for (const auto& tokens : random_stream(rng, 300)) {
            const auto id = parser.feed(tokens).template_id;
            const auto& now = parser.get(id).tokens;
            drain_ok = drain_ok && now.size() == tokens.size();
            if (auto it = previous.find(id); it != previous.end()) {
                for (std::size_t i = 0; i < now.size(); ++i) {
                    drain_ok = drain_ok && (!is_wildcard(it->second[i]) || is_wildcard(now[i]));
                }
            }
            previous[id] = now;
        }
    }
    v.check(drain_ok, "drain groups share one length and wildcards never revert to constants");

    bool spell_ok = true;
    for (int trial = 0; trial < 20 && spell_ok; ++trial) {
        SpellConfig config;
        config.tau = 0.3 + 0.05 * static_cast<double>(trial % 10);
        SpellParser fast(config, SpellLookup::prefix_tree);
        SpellParser slow(config, SpellLookup::exhaustive);
        for (const auto& tokens : random_stream(rng, 300)) {
            const auto a = fast.feed(tokens);
            const auto b = slow.feed(tokens);
            spell_ok = spell_ok && a.template_id == b.template_id && a.created == b.created &&
                       fast.get(a.template_id).tokens == slow.get(b.template_id).tokens &&
                       is_subsequence(fast.get(a.template_id).constants(), tokens);
        }
        spell_ok = spell_ok && fast.index_consistent();
    }
    v.check(spell_ok, "spell templates are subsequences of their messages; prefix tree equals exhaustive scan");
    return v;
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Verdict()>>> all{
        {"accuracy", accuracy},
        {"preprocessing-direction", preprocessing_direction},
        {"sweep-shape", sweep_shape},
        {"timing", timing},
        {"uuid-regression", uuid_regression},
        {"properties", properties},
    };
    return all;
}

Status run_one(const std::string& name, const std::function<Verdict()>& fn) {
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v.status = Status::fail;
        v.details.push_back(std::string("FAIL error: ") + e.what());
    }
    const char* label = v.status == Status::pass ? "PASS" : v.status == Status::fail ? "FAIL" : "NOT RUN";
    std::cout << label << ' ' << name << '\n';
    for (const auto& d : v.details) {
        std::cout << "    " << d << '\n';
    }
    std::cout.flush();
    return v.status;
}

} // namespace
} // namespace logstruct

int main(int argc, char** argv) {
    using namespace logstruct;
    std::vector<std::string> wanted(argv + 1, argv + argc);
    if (wanted.empty()) {
        for (const auto& [name, fn] : criteria()) {
            wanted.push_back(name);
        }
    }
    bool failed = false;
    bool skipped = false;
    for (const auto& name : wanted) {
        const auto it = std::find_if(criteria().begin(), criteria().end(),
                                     [&](const auto& c) { return c.first == name; });
        if (it == criteria().end()) {
            std::cerr << "unknown criterion: " << name << '\n';
            return 2;
        }
        const auto status = run_one(it->first, it->second);
        failed = failed || status == Status::fail;
        skipped = skipped || status == Status::not_run;
    }
    if (failed) {
        return 1;
    }
    // A lone skipped criterion reports ctest's skip code.
    return skipped && wanted.size() == 1 ? kExitNotRun : 0;
}
