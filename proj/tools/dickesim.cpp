#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "dickesim/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dickesim;

namespace {

bool color_allowed() { return std::getenv("NO_COLOR") == nullptr; }

void print_error(const std::string& msg) {
  if (color_allowed())
    std::cerr << "\x1b[31merror:\x1b[0m " << msg << "\n";
  else
    std::cerr << "error: " << msg << "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write '" + path.string() + "'");
  out << text;
}

std::optional<FidelityModel> parse_model_flag(const std::string& word) {
  if (word.empty()) return std::nullopt;
  if (word == "two-level") return FidelityModel::TwoLevel;
  if (word == "symmetric") return FidelityModel::FullSymmetric;
  if (word == "full") return FidelityModel::FullRegister;
  throw ParameterError("unknown model '" + word + "' (two-level, symmetric, full)");
}

std::vector<double> parse_ratio_list(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string item =
        list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      throw ParameterError("malformed ratio '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// one coefficient per line, "re" or "re im"; # comments and blanks skipped
VectorXcd parse_coeffs(const std::string& text) {
  std::vector<Complex> values;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    if (!(ls >> re)) continue;
    ls >> im;
    std::string rest;
    if (ls >> rest)
      throw ParseError(line_no, 1, "expected 're' or 're im' on a coefficient line");
    values.emplace_back(re, im);
  }
  VectorXcd out(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<int>(i)) = values[i];
  return out;
}

void write_trace_svg(const fs::path& path, const BasisTag& basis,
                     const std::vector<TraceRow>& trace) {
  // plot the six most populated labels so the chart stays readable
  const int dim = basis.dim();
  std::vector<std::pair<double, int>> ranked;
  for (int i = 0; i < dim; ++i) {
    double peak = 0.0;
    for (const TraceRow& row : trace) peak = std::max(peak, row.populations(i));
    ranked.push_back({peak, i});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  std::vector<SvgSeries> series;
  for (const auto& [peak, idx] : ranked) {
    if (series.size() >= 6 || peak < 1e-3) break;
    SvgSeries s;
    s.name = basis.label(idx);
    for (const TraceRow& row : trace) {
      s.x.push_back(row.t);
      s.y.push_back(row.populations(idx));
    }
    series.push_back(std::move(s));
  }
  std::ostringstream svg;
  write_line_svg(svg, "populations", "t", "population", series);
  spill(path, svg.str());
}

int cmd_run(const std::string& schedule_path, const std::string& model_word,
            std::uint64_t seed, const std::string& out_dir, const std::string& phase_word,
            int trace_points, bool with_svg) {
  ScheduleDocument doc = parse_schedule(slurp(schedule_path));
  doc.schedule.seed = seed;

  ExecutionOptions options;
  options.model_override = parse_model_flag(model_word);
  if (phase_word == "reset")
    options.phase_mode = PhaseMode::Reset;
  else if (phase_word != "carry")
    throw ParameterError("unknown phase mode '" + phase_word + "' (carry, reset)");
  options.trace_points_per_segment = trace_points;

  CompiledSchedule compiled = compile_schedule(doc.schedule);
  ExecutionResult result = execute_schedule(compiled, options);

  fs::create_directories(out_dir);
  {
    std::ostringstream csv;
    write_trace_csv(csv, result.basis, result.trace);
    spill(fs::path(out_dir) / "trace.csv", csv.str());
  }
  spill(fs::path(out_dir) / "result.json",
        result_json(doc, compiled, result, model_word.empty() ? "per-step" : model_word,
                    seed));
  if (with_svg) write_trace_svg(fs::path(out_dir) / "trace.svg", result.basis, result.trace);

  std::cout << "fidelity_to_ideal=" << csv_number(result.fidelity_to_ideal)
            << " total_time=" << csv_number(result.total_time) << "\n";
  std::cout << "wrote " << (fs::path(out_dir) / "trace.csv").string() << ", "
            << (fs::path(out_dir) / "result.json").string()
            << (with_svg ? ", " + (fs::path(out_dir) / "trace.svg").string() : "") << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& protocol,
              const std::string& ratio_list, const std::string& out_dir) {
  ScheduleDocument doc = parse_schedule(slurp(config_path));
  std::vector<double> ratios = ratio_list.empty()
                                   ? std::vector<double>{10.0, 30.0, 100.0, 300.0, 1000.0}
                                   : parse_ratio_list(ratio_list);
  SweepResult sweep = selectivity_sweep(doc.schedule.config, protocol, ratios);

  fs::create_directories(out_dir);
  {
    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    spill(fs::path(out_dir) / "sweep.csv", csv.str());
  }
  {
    SvgSeries s;
    s.name = sweep.protocol;
    s.x = sweep.axis;
    s.y = sweep.infidelity;
    std::ostringstream svg;
    write_line_svg(svg, "selectivity sweep", "omega0 / |omega_eff|", "infidelity", {s},
                   true, true);
    spill(fs::path(out_dir) / "sweep.svg", svg.str());
  }
  for (std::size_t i = 0; i < sweep.axis.size(); ++i)
    std::cout << "ratio " << csv_number(sweep.axis[i]) << ": infidelity "
              << csv_number(sweep.infidelity[i]) << "\n";
  std::cout << "wrote " << (fs::path(out_dir) / "sweep.csv").string() << ", "
            << (fs::path(out_dir) / "sweep.svg").string() << "\n";
  return 0;
}

int cmd_discriminate(const std::string& config_path, const std::string& coeffs_path, int k0,
                     int trials, std::uint64_t seed, const std::string& out_dir) {
  ScheduleDocument doc = parse_schedule(slurp(config_path));
  VectorXcd coeffs = parse_coeffs(slurp(coeffs_path));
  if (trials < 1) throw ParameterError("trials must be >= 1");

  long excited = 0;
  double expected = 0.0;
  for (int t = 0; t < trials; ++t) {
    DiscriminationResult r = discriminate_excitation(
        doc.schedule.config, coeffs, k0, seed + static_cast<std::uint64_t>(t));
    expected = r.expected_excited_probability;
    if (r.record.outcome == AncillaOutcome::Excited) ++excited;
  }
  const double freq = static_cast<double>(excited) / trials;

  nlohmann::ordered_json j;
  j["k0"] = k0;
  j["trials"] = trials;
  j["seed"] = seed;
  j["expected_probability"] = expected;
  j["excited_count"] = excited;
  j["frequency"] = freq;
  fs::create_directories(out_dir);
  spill(fs::path(out_dir) / "discriminate.json", j.dump(2) + "\n");

  std::cout << "excited " << excited << "/" << trials << " (frequency "
            << csv_number(freq) << ", expected " << csv_number(expected) << ")\n";
  std::cout << "wrote " << (fs::path(out_dir) / "discriminate.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trapped-ion Dicke-subspace pulse toolkit"};
  app.require_subcommand(1);

  std::string schedule_path, model_word, out_dir = ".", phase_word = "carry";
  std::uint64_t seed = 0;
  int trace_points = 32;
  bool with_svg = false;
  CLI::App* run = app.add_subcommand("run", "compile and execute a schedule file");
  run->add_option("schedule", schedule_path, "schedule file")->required();
  run->add_option("--model", model_word, "override every step: two-level|symmetric|full");
  run->add_option("--seed", seed, "measurement seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--phase-mode", phase_word, "carry|reset inter-pulse phases");
  run->add_option("--trace-points", trace_points, "interior trace samples per pulse");
  run->add_flag("--svg", with_svg, "also write trace.svg");

  std::string sweep_config, protocol = "w", ratio_list;
  std::string sweep_out = ".";
  CLI::App* sweep = app.add_subcommand("sweep", "selectivity error vs coupling ratio");
  sweep->add_option("config", sweep_config, "schedule file providing the config stanza")
      ->required();
  sweep->add_option("--protocol", protocol, "w or ladder:K");
  sweep->add_option("--ratios", ratio_list, "comma separated, increasing");
  sweep->add_option("--out", sweep_out, "output directory");

  std::string disc_config, coeffs_path, disc_out = ".";
  int k0 = 1, trials = 1;
  std::uint64_t disc_seed = 0;
  CLI::App* disc = app.add_subcommand("discriminate", "excitation-number measurement trials");
  disc->add_option("config", disc_config, "schedule file providing the config stanza")
      ->required();
  disc->add_option("--coeffs", coeffs_path, "Dicke coefficient file, N+1 lines")->required();
  disc->add_option("--k0", k0, "probed excitation number")->required();
  disc->add_option("--trials", trials, "number of seeded trials");
  disc->add_option("--seed", disc_seed, "base seed");
  disc->add_option("--out", disc_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(schedule_path, model_word, seed, out_dir, phase_word, trace_points,
                     with_svg);
    if (sweep->parsed()) return cmd_sweep(sweep_config, protocol, ratio_list, sweep_out);
    if (disc->parsed())
      return cmd_discriminate(disc_config, coeffs_path, k0, trials, disc_seed, disc_out);
  } catch (const SimError& e) {
    print_error(e.what());
    return 1;
  }
  return 0;
}
