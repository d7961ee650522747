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

// Command-line front end: mix | train | enhance | enhance-multi | evaluate |
// correlate. All randomized behavior flows from one --seed value
// (MCDENOISE_SEED as fallback) through fixed substream derivations.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcdenoise/mc_dropout.hpp"
#include "mcdenoise/metrics.hpp"
#include "mcdenoise/mixer.hpp"
#include "mcdenoise/mlp.hpp"
#include "mcdenoise/parallel.hpp"
#include "mcdenoise/rng.hpp"
#include "mcdenoise/selector.hpp"
#include "mcdenoise/stft.hpp"
#include "mcdenoise/wav_io.hpp"

namespace fs = std::filesystem;
using namespace mcdenoise;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;  // 0 = all cores
  std::size_t frame_len = 512;
  std::size_t hop = 160;
  std::size_t fft_size = 512;

  StftConfig stft() const {
    StftConfig cfg;
    cfg.frame_len = frame_len;
    cfg.hop = hop;
    cfg.fft_size = fft_size;
    cfg.n_bins = fft_size / 2 + 1;
    cfg.validate();
    return cfg;
  }
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "Random seed (default: MCDENOISE_SEED env var, else 0)")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--threads", opts.threads, "Worker threads; 0 = all cores")
      ->default_val(0);
  cmd->add_option("--frame-len", opts.frame_len, "Analysis frame length in samples")
      ->default_val(512);
  cmd->add_option("--hop", opts.hop, "Frame shift in samples")->default_val(160);
  cmd->add_option("--fft-size", opts.fft_size, "FFT size (power of two)")->default_val(512);
}

void resolve_seed(CommonOpts& opts) {
  if (opts.seed_given) return;
  if (const char* env = std::getenv("MCDENOISE_SEED")) {
    try {
      std::size_t used = 0;
      opts.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("MCDENOISE_SEED is not a valid integer: ") + env);
    }
  }
}

// Every run leaves the fully resolved configuration beside its outputs.
void write_config_echo(const std::string& path, const CommonOpts& opts,
                       const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write config echo to " + path);
  out << "seed " << opts.seed << "\n";
  out << "threads " << resolve_threads(opts.threads) << "\n";
  out << "frame_len " << opts.frame_len << "\n";
  out << "hop " << opts.hop << "\n";
  out << "fft_size " << opts.fft_size << "\n";
  out << "n_bins " << (opts.fft_size / 2 + 1) << "\n";
  for (const auto& [k, v] : extra) out << k << " " << v << "\n";
}

std::string fmt_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

// "-5" -> "m5", "2.5" -> "2p5": filesystem-safe SNR tag.
std::string snr_tag(double snr_db) {
  std::ostringstream ss;
  ss << snr_db;
  std::string s = ss.str();
  for (char& c : s) {
    if (c == '-') c = 'm';
    if (c == '.') c = 'p';
  }
  return s;
}

Waveform read_wav_16k(const std::string& path) {
  Waveform w = read_wav(path);
  if (w.sample_rate != 16000) {
    throw std::runtime_error(path + ": sample rate " + std::to_string(w.sample_rate) +
                             " is not supported; inputs must be 16 kHz (no resampling)");
  }
  return w;
}

void warn_clipped(const std::string& path, std::size_t clipped) {
  if (clipped > 0) {
    std::cerr << "warning: " << path << ": clamped " << clipped
              << " samples to [-1, 1] at WAV export\n";
  }
}

std::vector<std::size_t> parse_hidden_dims(const std::string& csv) {
  std::vector<std::size_t> dims;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const long v = std::stol(tok);
    if (v <= 0) throw std::runtime_error("bad hidden layer width: " + tok);
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw std::runtime_error("no hidden layer widths given");
  return dims;
}

// ---------------------------------------------------------------------------
// mix

int cmd_mix(const CommonOpts& opts, const std::string& manifest_path,
            const std::string& out_dir, bool pcm16) {
  const StftConfig stft_cfg = opts.stft();
  (void)stft_cfg;  // validated for consistency; mixing itself is time-domain
  const DatasetManifest manifest = load_manifest(manifest_path);
  const std::vector<MixJob> jobs = manifest.jobs();
  fs::create_directories(out_dir);

  std::ofstream index(fs::path(out_dir) / "index.tsv", std::ios::trunc);
  if (!index) throw std::runtime_error("cannot write index in " + out_dir);
  index << "out\tclean\tnoise\tsnr_target_db\tsnr_achieved_db\toffset\tgain\n";
  index.precision(17);

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const MixJob& job = jobs[j];
    const Waveform clean = read_wav_16k(job.clean_path);
    const Waveform noise = read_wav_16k(job.noise_path);
    const std::size_t offset = pick_noise_offset(noise.size(), clean.size(),
                                                 derive_seed(opts.seed, 0x04, j));
    const MixResult mixed = mix_at_snr(clean, noise, job.snr_db, offset);

    const std::string name = fs::path(job.clean_path).stem().string() + "__" +
                             fs::path(job.noise_path).stem().string() + "__snr" +
                             snr_tag(job.snr_db) + "dB.wav";
    const fs::path out_path = fs::path(out_dir) / name;
    const std::size_t clipped = write_wav(out_path.string(), mixed.noisy,
                                          pcm16 ? WavFormat::pcm16 : WavFormat::float32);
    warn_clipped(out_path.string(), clipped);
    index << out_path.string() << '\t' << job.clean_path << '\t' << job.noise_path << '\t'
          << job.snr_db << '\t' << mixed.achieved_snr_db << '\t' << mixed.offset << '\t'
          << mixed.gain << "\n";
  }
  if (!index) throw std::runtime_error("failed writing index in " + out_dir);

  write_config_echo((fs::path(out_dir) / "run_config.txt").string(), opts,
                    {{"command", "mix"},
                     {"manifest", manifest_path},
                     {"out_dir", out_dir},
                     {"jobs", std::to_string(jobs.size())},
                     {"format", pcm16 ? "pcm16" : "float32"}});
  std::cout << "mixed " << jobs.size() << " files into " << out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const CommonOpts& opts, const std::string& manifest_path,
              const std::string& out_model, const std::string& hidden_csv, double lr,
              std::size_t batch, std::size_t epochs, double dropout, double weight_decay,
              const std::string& optimizer) {
  const StftConfig stft_cfg = opts.stft();
  TrainConfig cfg;
  cfg.learning_rate = lr;
  cfg.batch_size = batch;
  cfg.epochs = epochs;
  cfg.dropout_rate = dropout;
  cfg.weight_decay = weight_decay;
  cfg.seed = opts.seed;
  cfg.threads = opts.threads;
  if (optimizer == "sgd") {
    cfg.use_sgd = true;
  } else if (optimizer != "adam") {
    throw std::runtime_error("unknown optimizer '" + optimizer + "' (adam|sgd)");
  }
  cfg.arch.clear();
  cfg.arch.push_back(stft_cfg.n_bins);
  for (std::size_t h : parse_hidden_dims(hidden_csv)) cfg.arch.push_back(h);
  cfg.arch.push_back(stft_cfg.n_bins);

  if (lr == 0.0) {
    std::cerr << "warning: learning rate is 0; parameters will not change\n";
  }

  const DatasetManifest manifest = load_manifest(manifest_path);
  const TrainResult result = train(manifest, stft_cfg, cfg);
  save_model(result.model, out_model);

  const std::string loss_path = out_model + ".loss.csv";
  std::ofstream loss(loss_path, std::ios::trunc);
  if (!loss) throw std::runtime_error("cannot write " + loss_path);
  loss << "epoch,loss\n";
  loss.precision(17);
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    loss << e << ',' << result.epoch_loss[e] << "\n";
  }

  std::ostringstream arch_ss;
  for (std::size_t i = 0; i < cfg.arch.size(); ++i) {
    if (i) arch_ss << ',';
    arch_ss << cfg.arch[i];
  }
  write_config_echo(out_model + ".config.txt", opts,
                    {{"command", "train"},
                     {"manifest", manifest_path},
                     {"out_model", out_model},
                     {"arch", arch_ss.str()},
                     {"learning_rate", fmt_double(lr)},
                     {"batch_size", std::to_string(batch)},
                     {"epochs", std::to_string(epochs)},
                     {"dropout", fmt_double(dropout)},
                     {"weight_decay", fmt_double(weight_decay)},
                     {"optimizer", optimizer}});
  if (!result.epoch_loss.empty()) {
    std::cout << "trained " << epochs << " epochs; first-epoch loss "
              << result.epoch_loss.front() << ", final loss " << result.epoch_loss.back()
              << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// enhance

int cmd_enhance(const CommonOpts& opts, const std::string& model_path,
                const std::string& in_wav, const std::string& out_wav, bool deterministic,
                std::size_t t_passes, const std::string& csv_path, bool pcm16) {
  const StftConfig stft_cfg = opts.stft();
  MlpModel model = load_model(model_path);
  if (deterministic) model.dropout_rate = 0.0;

  McConfig mc;
  mc.t_passes = t_passes;
  mc.seed = opts.seed;

  const Waveform noisy = read_wav_16k(in_wav);
  const EnhanceResult result = enhance_waveform(model, noisy, stft_cfg, mc, opts.threads);
  const std::size_t clipped = write_wav(out_wav, result.enhanced,
                                        pcm16 ? WavFormat::pcm16 : WavFormat::float32);
  warn_clipped(out_wav, clipped);

  const std::string csv = csv_path.empty() ? out_wav + ".uncertainty.csv" : csv_path;
  std::ofstream out(csv, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + csv);
  out << "frame_idx,var_trace\n";
  out.precision(17);
  for (std::size_t f = 0; f < result.frame_var_trace.size(); ++f) {
    out << f << ',' << result.frame_var_trace[f] << "\n";
  }

  write_config_echo(out_wav + ".config.txt", opts,
                    {{"command", "enhance"},
                     {"model", model_path},
                     {"input", in_wav},
                     {"output", out_wav},
                     {"mode", deterministic ? "deterministic" : "mc"},
                     {"t_passes", std::to_string(t_passes)},
                     {"dropout", fmt_double(model.dropout_rate)}});
  std::cout << "enhanced " << result.frame_var_trace.size() << " frames -> " << out_wav
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// enhance-multi

int cmd_enhance_multi(const CommonOpts& opts, const std::vector<std::string>& model_paths,
                      const std::string& in_wav, const std::string& out_wav,
                      std::size_t t_passes, const std::string& log_path, bool pcm16) {
  const StftConfig stft_cfg = opts.stft();
  ModelBank bank;
  for (const std::string& p : model_paths) {
    bank.models.push_back({fs::path(p).stem().string(), load_model(p)});
  }

  McConfig mc;
  mc.t_passes = t_passes;
  mc.seed = opts.seed;

  const Waveform noisy = read_wav_16k(in_wav);
  const MultiEnhanceResult result = enhance_multi(bank, noisy, stft_cfg, mc, opts.threads);
  const std::size_t clipped = write_wav(out_wav, result.enhanced,
                                        pcm16 ? WavFormat::pcm16 : WavFormat::float32);
  warn_clipped(out_wav, clipped);

  const std::string log = log_path.empty() ? out_wav + ".selection.csv" : log_path;
  std::ofstream out(log, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + log);
  write_selection_log(out, result.selections, bank.size());

  write_config_echo(out_wav + ".config.txt", opts,
                    {{"command", "enhance-multi"},
                     {"models", std::to_string(bank.size())},
                     {"input", in_wav},
                     {"output", out_wav},
                     {"t_passes", std::to_string(t_passes)}});
  std::cout << "enhanced " << result.selections.size() << " frames with " << bank.size()
            << " models -> " << out_wav << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const CommonOpts& opts, const std::string& clean_wav,
                 const std::string& test_wav, const std::string& report_path) {
  const StftConfig stft_cfg = opts.stft();
  const Waveform clean = read_wav_16k(clean_wav);
  const Waveform test = read_wav_16k(test_wav);
  if (clean.size() != test.size()) {
    throw std::runtime_error("evaluate: length mismatch (" + std::to_string(clean.size()) +
                             " vs " + std::to_string(test.size()) + " samples)");
  }

  const auto [clean_mag, cp] = stft(clean, stft_cfg);
  const auto [test_mag, tp] = stft(test, stft_cfg);
  (void)cp;
  (void)tp;

  EvalReport report;
  report.sse = sse(test_mag, clean_mag);
  SsnrConfig ssnr_cfg;
  ssnr_cfg.frame_len = stft_cfg.frame_len;
  ssnr_cfg.hop = stft_cfg.hop;
  report.ssnr_db = ssnr(clean, test, ssnr_cfg);
  report.n_frames = clean_mag.frame_count();
  const std::vector<double> sq = per_frame_squared_error(test_mag, clean_mag);
  for (double v : sq) report.per_frame.push_back({v, 0.0});  // no model: no uncertainty
  report.pearson_r = {0.0, false};

  std::ofstream out(report_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + report_path);
  write_report(out, report);
  std::ofstream csv(report_path + ".per_frame.csv", std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + report_path + ".per_frame.csv");
  write_per_frame_csv(csv, report.per_frame);

  write_config_echo(report_path + ".config.txt", opts,
                    {{"command", "evaluate"},
                     {"clean", clean_wav},
                     {"test", test_wav},
                     {"report", report_path}});
  std::cout << "sse " << report.sse << "\nssnr_db " << report.ssnr_db << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// correlate

int cmd_correlate(const CommonOpts& opts, const std::string& model_path,
                  const std::string& clean_wav, const std::string& noisy_wav,
                  std::size_t t_passes, const std::string& csv_path) {
  const StftConfig stft_cfg = opts.stft();
  const MlpModel model = load_model(model_path);
  model.validate();

  const Waveform clean = read_wav_16k(clean_wav);
  const Waveform noisy = read_wav_16k(noisy_wav);
  if (clean.size() != noisy.size()) {
    throw std::runtime_error("correlate: clean/noisy length mismatch");
  }
  const auto [clean_mag, cp] = stft(clean, stft_cfg);
  const auto [noisy_mag, np] = stft(noisy, stft_cfg);
  (void)cp;
  (void)np;
  if (model.input_dim() != stft_cfg.n_bins || model.output_dim() != stft_cfg.n_bins) {
    throw std::runtime_error("correlate: model width must equal n_bins");
  }

  const std::size_t n_frames = noisy_mag.frame_count();
  std::vector<std::pair<double, double>> per_frame(n_frames);
  parallel_chunks(n_frames, opts.threads, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t f = begin; f < end; ++f) {
      McConfig mc;
      mc.t_passes = t_passes;
      mc.seed = detail::frame_seed(opts.seed, f);
      const McEstimate est = detail::mc_forward_unchecked(model, noisy_mag.frames[f], mc);
      double sq = 0.0;
      for (std::size_t k = 0; k < stft_cfg.n_bins; ++k) {
        const double d = est.mean[k] - static_cast<double>(clean_mag.frames[f][k]);
        sq += d * d;
      }
      per_frame[f] = {sq, est.var_trace};
    }
  });

  std::vector<double> errs(n_frames), vars(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    errs[f] = per_frame[f].first;
    vars[f] = per_frame[f].second;
  }
  const PearsonResult r = pearson(errs, vars);

  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  write_per_frame_csv(csv, per_frame);

  std::ofstream rep(csv_path + ".report.txt", std::ios::trunc);
  if (!rep) throw std::runtime_error("cannot write " + csv_path + ".report.txt");
  rep.precision(17);
  rep << "n_frames " << n_frames << "\n";
  if (r.defined) {
    rep << "pearson_r " << r.r << "\n";
  } else {
    rep << "pearson_r undefined\n";
  }

  write_config_echo(csv_path + ".config.txt", opts,
                    {{"command", "correlate"},
                     {"model", model_path},
                     {"clean", clean_wav},
                     {"noisy", noisy_wav},
                     {"t_passes", std::to_string(t_passes)}});
  if (r.defined) {
    std::cout << "pearson_r " << r.r << "\n";
  } else {
    std::cout << "pearson_r undefined\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnitude-spectrum MLP speech denoiser with Monte-Carlo-dropout "
               "uncertainty and per-frame minimum-uncertainty model selection"};
  app.require_subcommand(1);

  int rc = 1;

  // mix
  CommonOpts mix_opts;
  std::string mix_manifest, mix_out_dir;
  bool mix_pcm16 = false;
  CLI::App* mix = app.add_subcommand("mix", "Synthesize noisy WAVs from a manifest");
  mix->add_option("manifest", mix_manifest, "Dataset manifest")->required();
  mix->add_option("out_dir", mix_out_dir, "Output directory")->required();
  mix->add_flag("--pcm16", mix_pcm16, "Write PCM16 instead of float32");
  add_common_options(mix, mix_opts);
  mix->callback([&] {
    resolve_seed(mix_opts);
    rc = cmd_mix(mix_opts, mix_manifest, mix_out_dir, mix_pcm16);
  });

  // train
  CommonOpts train_opts;
  std::string train_manifest, train_out = "model.mcdn", train_hidden = "2048,2048,2048";
  std::string train_optimizer = "adam";
  double train_lr = 1e-4, train_dropout = 0.2, train_decay = 0.0;
  std::size_t train_batch = 128, train_epochs = 10;
  CLI::App* tr = app.add_subcommand("train", "Train a denoising model from a manifest");
  tr->add_option("manifest", train_manifest, "Dataset manifest")->required();
  tr->add_option("-o,--out", train_out, "Output model file")->required();
  tr->add_option("--hidden", train_hidden, "Hidden layer widths, comma separated")
      ->default_val("2048,2048,2048");
  tr->add_option("--lr", train_lr, "Learning rate")->default_val(1e-4);
  tr->add_option("--batch", train_batch, "Batch size")->default_val(128);
  tr->add_option("--epochs", train_epochs, "Training epochs")->default_val(10);
  tr->add_option("--dropout", train_dropout, "Dropout rate p")->default_val(0.2);
  tr->add_option("--weight-decay", train_decay, "L2 weight decay lambda")->default_val(0.0);
  tr->add_option("--optimizer", train_optimizer, "adam|sgd")->default_val("adam");
  add_common_options(tr, train_opts);
  tr->callback([&] {
    resolve_seed(train_opts);
    rc = cmd_train(train_opts, train_manifest, train_out, train_hidden, train_lr,
                   train_batch, train_epochs, train_dropout, train_decay, train_optimizer);
  });

  // enhance
  CommonOpts enh_opts;
  std::string enh_model, enh_in, enh_out, enh_csv;
  std::size_t enh_t = 50;
  bool enh_mc = false, enh_det = false, enh_pcm16 = false;
  CLI::App* enh = app.add_subcommand("enhance", "Enhance a noisy WAV with one model");
  enh->add_option("model", enh_model, "Model file")->required();
  enh->add_option("input", enh_in, "Noisy input WAV")->required();
  enh->add_option("output", enh_out, "Enhanced output WAV")->required();
  enh->add_flag("--mc", enh_mc, "Monte-Carlo dropout inference (default)");
  enh->add_flag("--deterministic", enh_det, "Disable dropout at inference");
  enh->add_option("-T,--passes", enh_t, "Stochastic passes T")->default_val(50);
  enh->add_option("--uncertainty-csv", enh_csv, "Per-frame uncertainty CSV path");
  enh->add_flag("--pcm16", enh_pcm16, "Write PCM16 instead of float32");
  add_common_options(enh, enh_opts);
  enh->callback([&] {
    resolve_seed(enh_opts);
    if (enh_mc && enh_det) throw std::runtime_error("--mc and --deterministic conflict");
    rc = cmd_enhance(enh_opts, enh_model, enh_in, enh_out, enh_det, enh_t, enh_csv,
                     enh_pcm16);
  });

  // enhance-multi
  CommonOpts multi_opts;
  std::vector<std::string> multi_models;
  std::string multi_in, multi_out, multi_log;
  std::size_t multi_t = 50;
  bool multi_pcm16 = false;
  CLI::App* multi = app.add_subcommand(
      "enhance-multi", "Enhance with per-frame minimum-uncertainty model selection");
  // One value per occurrence so positionals after --model still bind.
  multi->add_option("--model", multi_models, "Model file (repeat per model)")
      ->required()
      ->allow_extra_args(false);
  multi->add_option("input", multi_in, "Noisy input WAV")->required();
  multi->add_option("output", multi_out, "Enhanced output WAV")->required();
  multi->add_option("-T,--passes", multi_t, "Stochastic passes T per model")->default_val(50);
  multi->add_option("--selection-log", multi_log, "Per-frame selection log path");
  multi->add_flag("--pcm16", multi_pcm16, "Write PCM16 instead of float32");
  add_common_options(multi, multi_opts);
  multi->callback([&] {
    resolve_seed(multi_opts);
    rc = cmd_enhance_multi(multi_opts, multi_models, multi_in, multi_out, multi_t,
                           multi_log, multi_pcm16);
  });

  // evaluate
  CommonOpts eval_opts;
  std::string eval_clean, eval_test, eval_report = "eval_report.txt";
  CLI::App* ev = app.add_subcommand("evaluate", "SSE/SSNR of a test WAV against clean");
  ev->add_option("clean", eval_clean, "Clean reference WAV")->required();
  ev->add_option("test", eval_test, "WAV under test (noisy or enhanced)")->required();
  ev->add_option("-o,--out", eval_report, "Report path")->default_val("eval_report.txt");
  add_common_options(ev, eval_opts);
  ev->callback([&] {
    resolve_seed(eval_opts);
    rc = cmd_evaluate(eval_opts, eval_clean, eval_test, eval_report);
  });

  // correlate
  CommonOpts corr_opts;
  std::string corr_model, corr_clean, corr_noisy, corr_csv = "correlate.csv";
  std::size_t corr_t = 50;
  CLI::App* corr = app.add_subcommand(
      "correlate", "Per-frame (squared error, uncertainty) pairs and their correlation");
  corr->add_option("model", corr_model, "Model file")->required();
  corr->add_option("clean", corr_clean, "Clean reference WAV")->required();
  corr->add_option("noisy", corr_noisy, "Noisy input WAV")->required();
  corr->add_option("-T,--passes", corr_t, "Stochastic passes T")->default_val(50);
  corr->add_option("-o,--out", corr_csv, "Output CSV path")->default_val("correlate.csv");
  add_common_options(corr, corr_opts);
  corr->callback([&] {
    resolve_seed(corr_opts);
    rc = cmd_correlate(corr_opts, corr_model, corr_clean, corr_noisy, corr_t, corr_csv);
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
