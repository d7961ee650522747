// Copyright 2026 The mcdenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <vector>

#include "mcdenoise/mc_dropout.hpp"
#include "mcdenoise/rng.hpp"
#include "mcdenoise/selector.hpp"
#include "support/test_signals.hpp"

using namespace mcdenoise;

namespace {

std::vector<float> random_nonneg(std::size_t n, std::uint64_t seed, double hi = 2.0) {
  Rng rng(seed);
  std::vector<float> v(n);
  for (float& x : v) x = static_cast<float>(rng.next_range(0.0, hi));
  return v;
}

}  // namespace

TEST_CASE("argmin picks the smallest value, lowest index on ties") {
  CHECK(argmin_lowest_index(std::vector<double>{3.0, 1.0, 2.0}) == 1);
  CHECK(argmin_lowest_index(std::vector<double>{1.0, 1.0, 2.0}) == 0);
  CHECK(argmin_lowest_index(std::vector<double>{2.0, 1.0, 1.0}) == 1);
  CHECK(argmin_lowest_index(std::vector<double>{5.0}) == 0);
  CHECK_THROWS_AS(argmin_lowest_index(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("argmin matches a brute-force oracle on random vectors") {
  Rng rng(11);
  for (int it = 0; it < 1000; ++it) {
    const std::size_t m = 1 + rng.next_below(8);
    std::vector<double> vars(m);
    for (double& v : vars) {
      // Coarse grid makes ties common.
      v = static_cast<double>(rng.next_below(6)) * 0.25;
    }
    // Brute force: scan every candidate, demand no strictly smaller value
    // and no equal value at a lower index.
    const std::size_t got = argmin_lowest_index(vars);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(vars[got] <= vars[i]);
      if (i < got) CHECK(vars[i] > vars[got]);
    }
  }
}

TEST_CASE("argmin is invariant to adding a constant") {
  Rng rng(12);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> vars(5);
    for (double& v : vars) v = rng.next_double();
    std::vector<double> shifted = vars;
    const double c = 3.75;
    for (double& v : shifted) v += c;
    CHECK(argmin_lowest_index(vars) == argmin_lowest_index(shifted));
  }
}

TEST_CASE("select_frame returns the argmin model with its mean") {
  ModelBank bank;
  for (std::uint64_t i = 0; i < 3; ++i) {
    bank.models.push_back({"model" + std::to_string(i), make_model({7, 12, 7}, 0.3, 40 + i)});
  }
  const std::vector<float> x = random_nonneg(7, 50);
  McConfig cfg;
  cfg.t_passes = 20;
  cfg.seed = 51;

  const FrameSelection sel = select_frame(bank, x, cfg);
  REQUIRE(sel.var_traces.size() == 3);
  CHECK(sel.chosen_index == argmin_lowest_index(sel.var_traces));
  CHECK(sel.chosen_model_id == bank.models[sel.chosen_index].id);
  for (double v : sel.var_traces) {
    CHECK(sel.var_traces[sel.chosen_index] <= v);
  }
  // The carried mean is the winner's own mc_forward mean.
  const McEstimate direct = mc_forward(bank.models[sel.chosen_index].model, x, cfg);
  CHECK(sel.chosen_mean == direct.mean);
}

TEST_CASE("a one-model bank reproduces single-model mc_forward") {
  ModelBank bank;
  bank.models.push_back({"only", make_model({6, 10, 6}, 0.25, 60)});
  const std::vector<float> x = random_nonneg(6, 61);
  McConfig cfg;
  cfg.t_passes = 15;
  cfg.seed = 62;
  const FrameSelection sel = select_frame(bank, x, cfg);
  CHECK(sel.chosen_index == 0);
  const McEstimate direct = mc_forward(bank.models[0].model, x, cfg);
  CHECK(sel.chosen_mean == direct.mean);
  CHECK(sel.var_traces[0] == direct.var_trace);
}

TEST_CASE("identical models tie on every frame and break to index 0") {
  const MlpModel model = make_model({5, 9, 5}, 0.4, 70);
  ModelBank bank;
  for (int i = 0; i < 3; ++i) bank.models.push_back({"m" + std::to_string(i), model});
  const std::vector<float> x = random_nonneg(5, 71);
  McConfig cfg;
  cfg.t_passes = 12;
  cfg.seed = 72;
  const FrameSelection sel = select_frame(bank, x, cfg);
  CHECK(sel.var_traces[0] == sel.var_traces[1]);
  CHECK(sel.var_traces[1] == sel.var_traces[2]);
  CHECK(sel.chosen_index == 0);
}

TEST_CASE("enhance_multi with a bank of identical models equals single-model enhancement") {
  StftConfig cfg;
  cfg.frame_len = 32;
  cfg.hop = 16;
  cfg.fft_size = 32;
  cfg.n_bins = 17;

  const MlpModel model = make_model({17, 20, 17}, 0.3, 80);
  ModelBank bank;
  for (int i = 0; i < 3; ++i) bank.models.push_back({"m" + std::to_string(i), model});

  Waveform noisy = testsig::uniform_noise(700, 81);
  noisy.sample_rate = cfg.sample_rate;
  McConfig mc;
  mc.t_passes = 10;
  mc.seed = 82;

  const MultiEnhanceResult multi = enhance_multi(bank, noisy, cfg, mc);
  const EnhanceResult single = enhance_waveform(model, noisy, cfg, mc);
  CHECK(multi.enhanced.samples == single.enhanced.samples);
  for (const FrameSelection& sel : multi.selections) {
    CHECK(sel.chosen_index == 0);
  }
}

TEST_CASE("selection log covers every frame and is parseable") {
  StftConfig cfg;
  cfg.frame_len = 32;
  cfg.hop = 16;
  cfg.fft_size = 32;
  cfg.n_bins = 17;

  ModelBank bank;
  bank.models.push_back({"a", make_model({17, 20, 17}, 0.3, 90)});
  bank.models.push_back({"b", make_model({17, 20, 17}, 0.3, 91)});

  Waveform noisy = testsig::uniform_noise(700, 92);
  noisy.sample_rate = cfg.sample_rate;
  McConfig mc;
  mc.t_passes = 8;
  mc.seed = 93;

  const MultiEnhanceResult result = enhance_multi(bank, noisy, cfg, mc);
  const std::size_t n_frames = cfg.frame_count(noisy.size());
  REQUIRE(result.selections.size() == n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    CHECK(result.selections[f].frame_index == f);
    CHECK(result.selections[f].var_traces.size() == 2);
  }

  std::ostringstream log;
  write_selection_log(log, result.selections, bank.size());
  std::istringstream in(log.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# frame_idx,chosen_model_id,var_0,var_1");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == n_frames);
}

TEST_CASE("selection is deterministic under a fixed seed") {
  ModelBank bank;
  bank.models.push_back({"a", make_model({6, 9, 6}, 0.35, 95)});
  bank.models.push_back({"b", make_model({6, 9, 6}, 0.35, 96)});
  const std::vector<float> x = random_nonneg(6, 97);
  McConfig cfg;
  cfg.t_passes = 16;
  cfg.seed = 98;
  const FrameSelection a = select_frame(bank, x, cfg);
  const FrameSelection b = select_frame(bank, x, cfg);
  CHECK(a.chosen_index == b.chosen_index);
  CHECK(a.var_traces == b.var_traces);
  CHECK(a.chosen_mean == b.chosen_mean);
}

TEST_CASE("bank validation rejects empty banks and arch mismatches") {
  ModelBank empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  ModelBank mixed;
  mixed.models.push_back({"a", make_model({5, 8, 5}, 0.2, 1)});
  mixed.models.push_back({"b", make_model({5, 9, 5}, 0.2, 2)});
  CHECK_THROWS_WITH_AS(mixed.validate(), doctest::Contains("architecture"),
                       std::invalid_argument);
}
