// fdcp: simulate, threshold, detect, theory and verify commands.
//
// Exit codes: 0 success, 1 verification failed, 2 invalid parameter or
// argument, 3 I/O error, 4 malformed input file, 5 inconsistent configuration.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdcp/fdcp.hpp"

namespace fs = std::filesystem;
using namespace fdcp;

namespace {

enum ExitCode { ok = 0, verify_failed = 1, bad_parameter = 2, io_error = 3, parse_error = 4, config_error = 5 };

struct Settings {
  double p1 = 1.0, l1 = 1.0, p2 = 1.0, l2 = 20.0;
  double c = 500.0, T = 1000.0;
  int n = 1;
  std::vector<double> h{150.0};
  double delta = 0.0;  // 0: min(h) / 50
  double alpha = 0.05;
  std::size_t n_sims = 10'000;
  std::size_t n_reps = 500;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
  std::string out_dir = ".";
  std::string events;
  std::string threshold;
  std::string config;
};

/// Flags registered on a subcommand, each able to pull its value from the
/// JSON config when it was not given on the command line.
class Bindings {
 public:
  explicit Bindings(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& flag, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + flag, target, help)->capture_default_str();
    std::string key = flag;
    std::replace(key.begin(), key.end(), '-', '_');
    entries_.push_back({opt, key, [&target](const Json& j) {
                          if constexpr (std::is_same_v<T, std::vector<double>>) {
                            target = j.is_array() ? j.get<std::vector<double>>() : std::vector<double>{j.get<double>()};
                          } else {
                            target = j.get<T>();
                          }
                        }});
    return opt;
  }

  void apply(const Json& config) const {
    for (const auto& e : entries_) {
      if (e.option->count() > 0 || !config.contains(e.key)) continue;
      try {
        e.assign(config.at(e.key));
      } catch (const nlohmann::json::exception& ex) {
        throw ConfigurationError("config key '" + e.key + "': " + ex.what());
      }
    }
  }

 private:
  struct Entry {
    CLI::Option* option;
    std::string key;
    std::function<void(const Json&)> assign;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigurationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

fs::path output_dir(const Settings& s) {
  std::error_code ec;
  fs::create_directories(s.out_dir, ec);
  if (ec || !fs::is_directory(s.out_dir)) throw IoError("cannot create output directory '" + s.out_dir + "'");
  return s.out_dir;
}

unsigned worker_count(const Settings& s) { return s.workers ? s.workers : std::max(1u, std::thread::hardware_concurrency()); }

double grid_step(const Settings& s) {
  if (s.h.empty()) throw ParameterError("at least one window size --h is required");
  return s.delta > 0.0 ? s.delta : *std::min_element(s.h.begin(), s.h.end()) / 50.0;
}

ChangePointModel model_of(const Settings& s) {
  ChangePointModel m{RenewalSpec::gamma(s.p1, s.l1), RenewalSpec::gamma(s.p2, s.l2), s.c, s.T, s.n};
  m.validate();
  return m;
}

Json model_json(const Settings& s) {
  Json j;
  j["phi1"] = {{"family", "gamma"}, {"shape", s.p1}, {"rate", s.l1}};
  j["phi2"] = {{"family", "gamma"}, {"shape", s.p2}, {"rate", s.l2}};
  j["c"] = s.c;
  j["T"] = s.T;
  j["n"] = s.n;
  j["seed"] = s.seed;
  return j;
}

int cmd_simulate(const Settings& s) {
  // Validate both laws before anything else, also when the horizon is empty.
  RenewalSpec::gamma(s.p1, s.l1);
  RenewalSpec::gamma(s.p2, s.l2);
  if (!(s.T >= 0.0)) throw ParameterError("T must be non-negative");
  if (s.n < 1) throw ParameterError("scale n must be a positive integer");
  const auto dir = output_dir(s);
  const EventSequence seq = s.T == 0.0 ? EventSequence::from_times({}, 0.0) : simulate_compound(model_of(s), s.seed);
  write_events((dir / "events.txt").string(), seq);
  write_text(dir / "model.json", model_json(s).dump(2) + "\n");
  std::cout << "wrote " << seq.size() << " events to " << (dir / "events.txt").string() << "\n";
  return ok;
}

ThresholdTable obtain_threshold(const Settings& s, const fs::path& dir) {
  const double step = grid_step(s);
  const std::string key = ThresholdTable::cache_key(s.T, s.h, step, s.alpha, s.n_sims, s.seed);
  const fs::path cached = dir / ("threshold_" + key + ".json");
  if (fs::exists(cached)) {
    std::cout << "cache hit: " << cached.string() << "\n";
    return ThresholdTable::from_json(load_json(cached.string()));
  }
  ThresholdTable table = simulate_threshold(s.T, s.h, step, s.alpha, s.n_sims, s.seed, worker_count(s));
  write_text(cached, table.to_json().dump(2) + "\n");
  std::cout << "simulated " << s.n_sims << " null paths, wrote " << cached.string() << "\n";
  return table;
}

int cmd_threshold(const Settings& s) {
  const auto dir = output_dir(s);
  const ThresholdTable table = obtain_threshold(s, dir);
  std::printf("Q = %.6f (alpha %g, %zu paths)\n", table.Q, table.alpha, table.n_sims);
  return ok;
}

int cmd_detect(const Settings& s, bool T_given) {
  if (s.events.empty()) throw ParameterError("--events is required");
  const EventSequence seq = read_events(s.events);
  if (s.n < 1) throw ParameterError("scale n must be a positive integer");
  Settings eff = s;
  if (!T_given) eff.T = seq.horizon() / s.n;
  const auto dir = output_dir(eff);
  const ThresholdTable table =
      eff.threshold.empty() ? obtain_threshold(eff, dir) : ThresholdTable::from_json(load_json(eff.threshold));
  const DetectionResult res = detect(seq, eff.T, eff.n, eff.h, table);

  std::vector<std::string> csv_names;
  for (const auto& series : res.per_h_series) {
    const std::string name = "G_h" + detail::format_double(series.h) + ".csv";
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
    series.write_csv(out);
    csv_names.push_back(name);
  }
  write_text(dir / "detection.json", res.to_json(csv_names).dump(2) + "\n");
  std::printf("reject = %s, max |G| = %.4f, Q = %.4f\n", res.reject ? "true" : "false", res.global_max, res.Q);
  for (const auto& cp : res.change_points) std::printf("change point %.4g (h %g, G %.3f)\n", cp.location, cp.h, cp.statistic);
  return ok;
}

int cmd_theory(const Settings& s) {
  const ChangePointModel m = model_of(s);
  if (s.h.size() != 1) throw ParameterError("theory takes exactly one window size --h");
  const TheoryParams p = TheoryParams::from_model(m, s.h.front());
  const double step = s.delta > 0.0 ? s.delta : p.h / 50.0;
  const WindowConfig cfg(p.T, {p.h}, step, p.c);
  const auto dir = output_dir(s);
  std::ofstream out(dir / "theory.csv", std::ios::binary);
  if (!out) throw IoError("cannot write '" + (dir / "theory.csv").string() + "'");
  out << "t,m,s,lambda,delta,distorted_lambda\r\n";
  for (double t : cfg.grid(p.h)) {
    const double lambda = shark_fin(t, p);
    const double d = distortion(t, p);
    out << detail::format_double(t) << ',' << detail::format_double(m_function(t, p)) << ','
        << detail::format_double(s_function(t, p)) << ',' << detail::format_double(lambda) << ','
        << detail::format_double(d) << ',' << detail::format_double(d * lambda) << "\r\n";
  }
  if (!out) throw IoError("write to theory.csv failed");
  std::printf("shape %s, |Lambda_c| = %.4f\n", std::string(to_string(classify_shark(p))).c_str(), shark_height(p));
  return ok;
}

int cmd_verify(const Settings& s) {
  if (s.n_reps < 10) throw ParameterError("--n-reps must be at least 10");
  const auto dir = output_dir(s);
  const auto reports = lab::run_suite(s.seed, s.n_reps, worker_count(s));
  Json all = Json::array();
  std::string text;
  bool pass = true;
  for (const auto& r : reports) {
    all.push_back(r.to_json());
    text += r.summary();
    pass = pass && r.pass();
  }
  text += pass ? "all experiments passed\n" : "some experiments failed\n";
  write_text(dir / "verify_report.json", Json{{"seed", s.seed}, {"n_reps", s.n_reps}, {"pass", pass}, {"reports", all}}.dump(2) + "\n");
  write_text(dir / "verify_report.txt", text);
  std::cout << text;
  return pass ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filtered-derivative change-point detection for renewal processes"};
  app.require_subcommand(1);
  // --h is a window size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  Settings s;

  auto* sim = app.add_subcommand("simulate", "Simulate a compound renewal process with one change point");
  auto* thr = app.add_subcommand("threshold", "Simulate (or load cached) rejection threshold Q");
  auto* det = app.add_subcommand("detect", "Run the multiple filter test on an event file");
  auto* the = app.add_subcommand("theory", "Export m, s, Lambda and Delta curves as CSV");
  auto* ver = app.add_subcommand("verify", "Run the Monte Carlo verification suite");

  std::vector<std::pair<CLI::App*, Bindings>> bound;
  CLI::Option* T_opt_detect = nullptr;
  for (auto* cmd : {sim, thr, det, the, ver}) {
    cmd->set_help_flag("--help", "Print this help message and exit");
    Bindings b(cmd);
    b.add("seed", s.seed, "Master random seed");
    b.add("workers", s.workers, "Worker threads (0 = all cores)");
    b.add("out-dir", s.out_dir, "Output directory");
    cmd->add_option("--config", s.config, "JSON config file; flags override its values");
    if (cmd == sim || cmd == the) {
      b.add("p1", s.p1, "Gamma shape before the change");
      b.add("l1", s.l1, "Gamma rate before the change");
      b.add("p2", s.p2, "Gamma shape after the change");
      b.add("l2", s.l2, "Gamma rate after the change");
      b.add("c", s.c, "Change point");
    }
    if (cmd != ver) {
      auto* t = b.add("T", s.T, "Time horizon (detect: defaults to horizon / n)");
      if (cmd == det) T_opt_detect = t;
    }
    if (cmd == sim || cmd == det || cmd == the) b.add("n", s.n, "Asymptotic scale n");
    if (cmd == thr || cmd == det || cmd == the) {
      b.add("h", s.h, "Window size (repeat for a window set)");
      b.add("delta", s.delta, "Grid step (default min h / 50)");
    }
    if (cmd == thr || cmd == det) {
      b.add("alpha", s.alpha, "Significance level");
      b.add("n-sims", s.n_sims, "Null paths for the threshold");
    }
    if (cmd == det) {
      b.add("events", s.events, "Event file");
      b.add("threshold", s.threshold, "Threshold table JSON (otherwise simulated and cached in out-dir)");
    }
    if (cmd == ver) b.add("n-reps", s.n_reps, "Replicates per scale level");
    bound.emplace_back(cmd, std::move(b));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (const auto& [cmd, b] : bound) {
      if (!cmd->parsed()) continue;
      if (!s.config.empty()) b.apply(load_json(s.config));
      if (cmd == sim) return cmd_simulate(s);
      if (cmd == thr) return cmd_threshold(s);
      if (cmd == det) {
        bool T_given = T_opt_detect->count() > 0;
        if (!T_given && !s.config.empty()) T_given = load_json(s.config).contains("T");
        return cmd_detect(s, T_given);
      }
      if (cmd == the) return cmd_theory(s);
      if (cmd == ver) return cmd_verify(s);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return parse_error;
  } catch (const IoError& e) {
    std::cerr << "error: I/O: " << e.what() << "\n";
    return io_error;
  } catch (const ConfigurationError& e) {
    std::cerr << "error: configuration: " << e.what() << "\n";
    return config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid parameter: " << e.what() << "\n";
    return bad_parameter;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: out of range: " << e.what() << "\n";
    return bad_parameter;
  }
  return bad_parameter;
}
