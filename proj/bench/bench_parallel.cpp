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

// Serial reference vs OpenMP for the two data-parallel stages: batch
// masking/tokenization and the parameter sweep. The parsers themselves
// are online and stay sequential.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "logstruct/bench.hpp"
#include "logstruct/preprocess.hpp"
#include "synthetic.hpp"

namespace {

using namespace logstruct;

const testing::SyntheticCorpus& corpus() {
    static const auto c = testing::make_corpus(20000, 11);
    return c;
}

const MaskSet& masks() {
    static const auto m = MaskSet::compile(testing::synthetic_masks());
    return m;
}

const PreparedSample& prepared() {
    static const auto s = [] {
        Sample sample;
        sample.records.assign(corpus().records.begin(), corpus().records.begin() + 2000);
        for (std::uint64_t i = 0; i < 2000; ++i) {
            sample.truth.labels[i] = corpus().truth.labels.at(i);
        }
        sample.truth.truth_templates = corpus().truth.truth_templates;
        return prepare_sample("Synth", std::move(sample), masks(), true, 0);
    }();
    return s;
}

void BM_PreprocessSerial(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(preprocess_batch_serial(corpus().records, masks(), true));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().records.size()));
}

void BM_PreprocessParallel(benchmark::State& state) {
    const int workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(preprocess_batch(corpus().records, masks(), true, workers));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().records.size()));
}

void BM_SweepSerial(benchmark::State& state) {
    const auto points = SweepGrid::defaults().points(static_cast<ParserKind>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep_serial(points, prepared()));
    }
}

void BM_SweepParallel(benchmark::State& state) {
    const auto points = SweepGrid::defaults().points(static_cast<ParserKind>(state.range(0)));
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(points, prepared(), workers));
    }
}

void worker_counts(benchmark::internal::Benchmark* b) {
    for (int w = 1; w <= omp_get_max_threads(); w *= 2) {
        b->Arg(w);
    }
}

void sweep_args(benchmark::internal::Benchmark* b) {
    for (auto kind : {ParserKind::spell, ParserKind::drain}) {
        for (int w = 1; w <= omp_get_max_threads(); w *= 2) {
            b->Args({static_cast<std::int64_t>(kind), w});
        }
    }
}

BENCHMARK(BM_PreprocessSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PreprocessParallel)->Apply(worker_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Apply(sweep_args)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
