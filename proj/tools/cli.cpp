#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "srirnn/adaptation.hpp"
#include "srirnn/error.hpp"
#include "srirnn/linear_analysis.hpp"
#include "srirnn/metrics.hpp"
#include "srirnn/model_io.hpp"
#include "srirnn/rtf_bench.hpp"
#include "srirnn/sweeps.hpp"
#include "srirnn/wav.hpp"

namespace srirnn::cli {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct NamedModel {
  std::string name;
  RnnModel model;
};

NamedModel synthetic(const std::string& spec, CellType cell) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) {
    throw srirnn::ParseError("--synthetic expects H,seed, got '" + spec + "'");
  }
  int hidden = 0;
  unsigned long long seed = 0;
  try {
    hidden = std::stoi(spec.substr(0, comma));
    seed = std::stoull(spec.substr(comma + 1));
  } catch (const std::exception&) {
    throw srirnn::ParseError("--synthetic expects H,seed, got '" + spec + "'");
  }
  if (hidden < 1) throw DomainError("synthetic hidden size must be >= 1");
  NamedModel m{"synthetic-" + std::string(to_string(cell)) + "-h" + std::to_string(hidden) + "-s" +
                   std::to_string(seed),
               synthetic_model(cell, hidden, seed)};
  return m;
}

std::vector<NamedModel> gather_models(const std::vector<std::string>& paths,
                                      const std::vector<std::string>& synthetic_specs,
                                      const std::string& cell_name) {
  std::vector<NamedModel> models;
  for (const auto& p : paths) models.push_back({fs::path(p).stem().string(), load_model(p)});
  const CellType cell = parse_cell_type(cell_name);
  for (const auto& s : synthetic_specs) models.push_back(synthetic(s, cell));
  if (models.empty()) throw Error("missing_model", "no model given (use --model or --synthetic)");
  return models;
}

std::vector<Method> methods_from(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

// Output sink: a file, or `fallback` for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ofstream open_csv(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

// ---------------------------------------------------------------- process

struct ProcessOptions {
  std::string input;
  std::string output;
  std::vector<std::string> model;
  std::vector<std::string> synthetic;
  std::string cell = "lstm";
  std::string method = "cidl";
  std::string precision = "double";
};

void cmd_process(const ProcessOptions& o, std::ostream& out) {
  const auto models = gather_models(o.model, o.synthetic, o.cell);
  if (models.size() != 1) throw Error("usage", "process takes exactly one model");
  const RnnModel& model = models.front().model;
  const AudioBuffer input = read_wav(o.input);
  if (input.rate < model.train_rate * (1.0 - kRateTolerance)) {
    throw RateError("input rate " + num(input.rate) + " Hz is below the training rate " +
                    num(model.train_rate) + " Hz; M < 1 is not supported");
  }
  const double factor = std::max(1.0, input.rate / model.train_rate);
  const AdaptationMethod method(parse_method(o.method), factor);
  const AudioBuffer y = process_adapted(model, method, input, parse_precision(o.precision));
  write_wav(o.output, y);
  out << "wrote " << y.size() << " samples at " << num(y.rate) << " Hz to " << o.output
      << " (method " << to_string(method.kind()) << ", M = " << num(factor) << ")\n";
}

// ----------------------------------------------------------------- linear

struct LinearOptions {
  std::vector<std::string> methods = {"naive", "stn", "delay", "lidl", "apdl", "cidl"};
  std::vector<double> factors = {1.0884, 2.0, 2.1768};
  std::string out_dir = ".";
  double pole = 0.0;  // 0 selects the reference pole
  std::size_t points = 4096;
  double lo_hz = 10.0;
  double hi_hz = 22040.0;
  std::size_t sweep_points = 64;
  std::size_t impulse_length = linear::kImpulseLength;
  bool skip_oracle = false;
};

void cmd_linear(const LinearOptions& o, std::ostream& out) {
  constexpr double kBase = 44100.0;
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const auto system = linear::OnePole::from_pole(o.pole > 0.0 ? o.pole : linear::reference_pole(), kBase);
  const auto grid = linear::FrequencyGrid::log_spaced(o.points, o.lo_hz, o.hi_hz);
  const auto poles = linear::default_pole_grid(o.sweep_points, 20.0, 20000.0, kBase);
  const double period = 1.0 / kBase;

  auto errors = open_csv(dir / "spectral_error.csv");
  auto response = open_csv(dir / "response.csv");
  auto oracle = open_csv(dir / "oracle.csv");
  errors << "method,M,A,f_c,omega,L_dB\n";
  response << "method,M,A,f_c,omega,H_re,H_im,H_dB\n";
  oracle << "method,M,A,max_rel_error,worst_bin,bins\n";

  const std::string pole_cols = num(system.pole) + "," + num(system.cutoff_hz);
  for (double f : grid.hz) {
    const double w = 2.0 * std::numbers::pi * f;
    const auto h = linear::base_response(w, system.pole, period);
    response << "base,1," << pole_cols << "," << num(w) << "," << num(h.real()) << ","
             << num(h.imag()) << "," << num(20.0 * std::log10(std::abs(h))) << "\n";
  }

  std::size_t rows = 0;
  for (Method kind : methods_from(o.methods)) {
    for (double factor : o.factors) {
      const AdaptationMethod method(kind, factor);
      const std::string head = std::string(to_string(kind)) + "," + num(factor) + ",";
      for (double f : grid.hz) {
        const double w = 2.0 * std::numbers::pi * f;
        const auto h = linear::analytic_response(method, w, system.pole, period);
        const double l = linear::spectral_error(h, linear::base_response(w, system.pole, period));
        errors << head << pole_cols << "," << num(w) << "," << num(l) << "\n";
        response << head << pole_cols << "," << num(w) << "," << num(h.real()) << ","
                 << num(h.imag()) << "," << num(20.0 * std::log10(std::abs(h))) << "\n";
        ++rows;
      }
      errors << head << pole_cols << ",,"
             << num(linear::mean_spectral_error(method, system.pole, grid, kBase)) << "\n";
      for (const auto& p : pole_sweep(method, poles, grid)) {
        errors << head << num(p.system.pole) << "," << num(p.system.cutoff_hz) << ",,"
               << num(p.mean_error_db) << "\n";
      }
      if (!o.skip_oracle) {
        const auto c = linear::check_against_analytic(method, system.pole, o.impulse_length, kBase);
        oracle << head << num(system.pole) << "," << num(c.max_relative_error) << ","
               << c.worst_bin << "," << c.bins << "\n";
      }
    }
  }
  out << "wrote " << rows << " curve points to " << (dir / "spectral_error.csv").string() << ", "
      << (dir / "response.csv").string() << " and " << (dir / "oracle.csv").string() << "\n";
}

// ---------------------------------------------------------------- metrics

struct MetricsOptions {
  std::vector<std::string> model;
  std::vector<std::string> synthetic;
  std::string cell = "lstm";
  std::vector<std::string> methods = {"naive", "stn", "delay", "lidl", "apdl", "cidl"};
  std::vector<double> rates = {48000.0, 88200.0, 96000.0};
  std::vector<double> tones;  // empty: piano keys
  std::size_t key_step = 1;
  double amplitude = 0.1;
  double duration = 1.0;
  double transient = 0.1;
  std::string precision = "double";
  std::string audio;
  std::string output = "-";
  bool serial = false;
};

void cmd_metrics(const MetricsOptions& o, std::ostream& out) {
  const auto models = gather_models(o.model, o.synthetic, o.cell);
  const auto methods = methods_from(o.methods);
  const Precision precision = parse_precision(o.precision);
  Sink sink(o.output, out);

  if (!o.audio.empty()) {
    const AudioBuffer input = read_wav(o.audio);
    *sink << "model,method,M,snr_db\n";
    for (const auto& m : models) {
      if (std::abs(input.rate - m.model.train_rate) > 1e-9 * m.model.train_rate) {
        throw RateError("audio input must be at the training rate " + num(m.model.train_rate) + " Hz");
      }
      for (Method method : methods) {
        for (double rate : o.rates) {
          const double snr = metrics::audio_snr_db(m.model, method, rate, input, precision);
          *sink << m.name << "," << to_string(method) << "," << num(rate / m.model.train_rate) << ","
                << num(snr) << "\n";
        }
      }
    }
    return;
  }

  std::vector<double> tones = o.tones;
  if (tones.empty()) {
    if (o.key_step == 0) throw DomainError("--key-step must be >= 1");
    const auto keys = metrics::piano_tones();
    for (std::size_t k = 0; k < keys.size(); k += o.key_step) tones.push_back(keys[k]);
  }
  std::vector<ToneTask> tasks;
  for (const auto& m : models) {
    for (Method method : methods) {
      for (double rate : o.rates) {
        for (double f0 : tones) {
          ToneTask t;
          t.model_name = m.name;
          t.model = &m.model;
          t.method = method;
          t.target_rate = rate;
          t.tone = {f0, o.duration, o.amplitude, o.transient};
          t.precision = precision;
          tasks.push_back(t);
        }
      }
    }
  }
  const auto results = run_tone_sweep(tasks, o.serial ? Execution::Serial : Execution::Parallel);
  *sink << "model,method,M,f0_hz,snrh_db,snra_db,amplitude\n";
  for (const auto& r : results) {
    *sink << r.model_name << "," << to_string(r.method) << "," << num(r.factor) << "," << num(r.f0)
          << "," << num(r.snrh_db) << "," << num(r.snra_db) << "," << num(r.amplitude) << "\n";
  }
}

// ------------------------------------------------------------------ bench

struct BenchOptions {
  std::vector<int> sizes = {24, 32, 40, 48, 56, 64, 72};
  std::vector<std::string> methods = {"naive", "delay", "stn", "lidl", "apdl", "cidl"};
  double seconds = 100.0;
  double rate = 96000.0;
  int repeats = 5;
  std::uint64_t seed = 1;
  std::string precision = "single";
  std::string csv;
};

void cmd_bench(const BenchOptions& o, std::ostream& out) {
  RtfConfig config;
  config.hidden_sizes = o.sizes;
  config.methods = methods_from(o.methods);
  config.seconds = o.seconds;
  config.rate = o.rate;
  config.repeats = o.repeats;
  config.seed = o.seed;
  config.precision = parse_precision(o.precision);
  const RtfReport report = run_rtf_benchmark(config);
  out << format_report(report);
  if (!o.csv.empty()) {
    auto f = open_csv(o.csv);
    f << "hidden_size,method,t_proc_s,rtf,percent_change\n";
    for (const auto& c : report.cells) {
      f << c.hidden_size << "," << to_string(c.method) << "," << num(c.t_proc) << "," << num(c.rtf)
        << "," << num(percent_change(c.rtf, report.rtf(c.hidden_size, Method::Naive))) << "\n";
    }
  }
}

void error_line(std::ostream& err, const std::string& code, const std::string& message) {
  err << nlohmann::json{{"error", code}, {"message", message}}.dump() << "\n";
}

void route_logs_to_stderr() {
  static const bool done = [] {
    auto logger = spdlog::stderr_color_mt("srirnn-cli");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)done;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  route_logs_to_stderr();

  CLI::App app{"Sample-rate independent recurrent neural network audio effects"};
  app.name("srirnn");
  app.set_config("--config", "", "TOML/INI file of option defaults ([subcommand] sections); command-line flags win");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP worker threads for sweeps (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  ProcessOptions po;
  auto* process = app.add_subcommand("process", "Run a model on a WAV file at the file's own rate");
  process->add_option("-i,--input", po.input, "Input mono WAV (16/24-bit PCM or 32-bit float)")->required();
  process->add_option("-o,--output", po.output, "Output WAV (32-bit float)")->required();
  process->add_option("-m,--model", po.model, "Model weight file (JSON)");
  process->add_option("--synthetic", po.synthetic, "Synthetic model H,seed instead of a file");
  process->add_option("--cell", po.cell, "Cell type of synthetic models (lstm|gru)")->capture_default_str();
  process->add_option("--method", po.method, "naive|stn|delay|lidl|apdl|cidl")->capture_default_str();
  process->add_option("--precision", po.precision, "double|single")->capture_default_str();

  LinearOptions lo;
  auto* lin = app.add_subcommand("linear", "One-pole frequency-response analysis, CSV output");
  lin->add_option("--methods", lo.methods, "Methods to analyse")->delimiter(',')->capture_default_str();
  lin->add_option("--factors", lo.factors, "Oversampling factors M")->delimiter(',')->capture_default_str();
  lin->add_option("--out-dir", lo.out_dir, "Directory for the CSV files")->capture_default_str();
  lin->add_option("--pole", lo.pole, "Pole A in (0,1); default exp(-20 pi / 44.1)");
  lin->add_option("--points", lo.points, "Frequency grid points")->capture_default_str();
  lin->add_option("--lo", lo.lo_hz, "Lowest grid frequency, Hz")->capture_default_str();
  lin->add_option("--hi", lo.hi_hz, "Highest grid frequency, Hz")->capture_default_str();
  lin->add_option("--sweep-points", lo.sweep_points, "Log-spaced cutoffs in the pole sweep")->capture_default_str();
  lin->add_option("--impulse-length", lo.impulse_length, "Simulated impulse length for the oracle check")
      ->capture_default_str();
  lin->add_flag("--skip-oracle", lo.skip_oracle, "Do not simulate impulse responses");

  MetricsOptions mo;
  auto* met = app.add_subcommand("metrics", "Sine-tone SNRH/SNRA sweeps or audio-file SNR, CSV output");
  met->add_option("-m,--model", mo.model, "Model weight file(s)");
  met->add_option("--synthetic", mo.synthetic, "Synthetic model(s) H,seed");
  met->add_option("--cell", mo.cell, "Cell type of synthetic models (lstm|gru)")->capture_default_str();
  met->add_option("--methods", mo.methods, "Methods")->delimiter(',')->capture_default_str();
  met->add_option("--rates", mo.rates, "Target sample rates, Hz")->delimiter(',')->capture_default_str();
  met->add_option("--tones", mo.tones, "Tone frequencies, Hz (default: the 88 piano keys)")->delimiter(',');
  met->add_option("--key-step", mo.key_step, "Use every k-th piano key")->capture_default_str();
  met->add_option("--amplitude", mo.amplitude, "Tone amplitude")->capture_default_str();
  met->add_option("--duration", mo.duration, "Tone duration, s")->capture_default_str();
  met->add_option("--transient", mo.transient, "Discarded start of each tone, s")->capture_default_str();
  met->add_option("--precision", mo.precision, "double|single")->capture_default_str();
  met->add_option("--audio", mo.audio, "Score this WAV (at the training rate) instead of sine tones");
  met->add_option("-o,--output", mo.output, "CSV path, - for stdout")->capture_default_str();
  met->add_flag("--serial", mo.serial, "Run the sweep on one thread");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Real-time factor of every method on synthetic GRUs");
  bench->add_option("--sizes", bo.sizes, "GRU hidden sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--methods", bo.methods, "Methods (must include naive)")->delimiter(',')->capture_default_str();
  bench->add_option("--seconds", bo.seconds, "Audio duration T_audio, s")->capture_default_str();
  bench->add_option("--rate", bo.rate, "Processing rate, Hz")->capture_default_str();
  bench->add_option("--repeats", bo.repeats, "Timed repeats (median reported)")->capture_default_str();
  bench->add_option("--seed", bo.seed, "Seed of the synthetic models")->capture_default_str();
  bench->add_option("--precision", bo.precision, "single|double")->capture_default_str();
  bench->add_option("--csv", bo.csv, "Also write per-cell results as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return 2;
  }

  try {
    if (threads > 0) omp_set_num_threads(threads);
    if (*process) cmd_process(po, out);
    if (*lin) cmd_linear(lo, out);
    if (*met) cmd_metrics(mo, out);
    if (*bench) cmd_bench(bo, out);
  } catch (const Error& e) {
    error_line(err, e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "internal", e.what());
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"srirnn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(int(argv.size()), argv.data(), out, err);
}

}  // namespace srirnn::cli
