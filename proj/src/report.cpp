#include "dickesim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "dickesim/spaces.hpp"
#include "json.hpp"

namespace dickesim {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const BasisTag& basis,
                     const std::vector<TraceRow>& trace) {
  out << "t";
  for (int i = 0; i < basis.dim(); ++i) out << "," << basis.label(i);
  out << "\n";
  for (const TraceRow& row : trace) {
    out << csv_number(row.t);
    for (int i = 0; i < row.populations.size(); ++i)
      out << "," << csv_number(row.populations(i));
    out << "\n";
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "ratio,infidelity,wall_ms\n";
  for (std::size_t i = 0; i < sweep.axis.size(); ++i)
    out << csv_number(sweep.axis[i]) << "," << csv_number(sweep.infidelity[i]) << ","
        << csv_number(sweep.wall_ms[i]) << "\n";
}

namespace {

std::string step_kind_word(const CompiledSegment& seg) {
  switch (seg.kind) {
    case StepKind::SelectiveSideband:
      return seg.target.sideband == Sideband::Blue ? "blue" : "red";
    case StepKind::Carrier: return "carrier";
    case StepKind::AncillaRedSideband: return "ancilla_red";
    case StepKind::Measure: return "measure";
  }
  return "?";
}

// probability of |fock>|D_k> irrespective of the ancilla state
double expect_probability(const ExecutionResult& result, const ExpectTarget& target) {
  const BasisTag& basis = result.basis;
  const int fock = basis.fock_levels();
  const int blocks = basis.with_ancilla ? 2 : 1;
  const VectorXcd& amp = result.final_state.amplitudes;
  double p = 0.0;
  if (basis.kind == BasisKind::DickeFock) {
    const int block = (basis.num_ions + 1) * fock;
    for (int a = 0; a < blocks; ++a)
      p += std::norm(amp(a * block + target.dicke * fock + target.fock));
  } else {
    const int ion_dim = 1 << basis.num_ions;
    const int block = ion_dim * fock;
    const StateVector d = dicke_state(basis.num_ions, target.dicke);
    for (int a = 0; a < blocks; ++a) {
      Complex ov = 0.0;
      for (int b = 0; b < ion_dim; ++b)
        ov += std::conj(d.amplitudes(b)) * amp(a * block + b * fock + target.fock);
      p += std::norm(ov);
    }
  }
  return p;
}

}  // namespace

std::string result_json(const ScheduleDocument& doc, const CompiledSchedule& compiled,
                        const ExecutionResult& result, const std::string& model_word,
                        std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["model"] = model_word;
  j["basis"] = to_string(result.basis);
  j["num_ions"] = compiled.schedule.config.num_ions;
  j["n_max"] = compiled.schedule.config.n_max;
  j["dt"] = 0.0;  // segments are solved in closed form, no stepping
  j["generator"] = "retuned-effective-sideband";
  j["tolerances"] = {{"norm", EvolutionSpec{}.norm_tol},
                     {"truncation", EvolutionSpec{}.truncation_tol}};
  j["total_time"] = result.total_time;
  j["fidelity_to_ideal"] = result.fidelity_to_ideal;

  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < compiled.segments.size(); ++i) {
    const CompiledSegment& seg = compiled.segments[i];
    nlohmann::ordered_json s;
    s["index"] = seg.step_index;
    s["kind"] = step_kind_word(seg);
    if (seg.kind == StepKind::SelectiveSideband) {
      s["k0"] = seg.target.k0;
      s["n0"] = seg.target.n0;
      s["rabi_frequency"] = seg.rabi_frequency;
      s["delta0"] = std::vector<double>(seg.delta0.data(),
                                        seg.delta0.data() + seg.delta0.size());
    }
    if (seg.kind != StepKind::Measure) {
      s["angle"] = seg.rabi_angle;
      s["phase"] = seg.phase;
      s["duration"] = seg.duration;
    }
    if (i < result.steps.size() && result.steps[i].outcome) {
      s["outcome"] = *result.steps[i].outcome == AncillaOutcome::Excited ? "excited"
                                                                         : "ground";
      s["outcome_probability"] = result.steps[i].outcome_probability;
    }
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);

  nlohmann::ordered_json expects = nlohmann::ordered_json::array();
  for (const ExpectTarget& e : doc.expects) {
    expects.push_back({{"fock", e.fock},
                       {"dicke", e.dicke},
                       {"probability", expect_probability(result, e)}});
  }
  j["expectations"] = std::move(expects);

  nlohmann::ordered_json amps = nlohmann::ordered_json::array();
  const VectorXcd& amp = result.final_state.amplitudes;
  for (int i = 0; i < amp.size(); ++i) {
    if (std::abs(amp(i)) <= 1e-12) continue;
    amps.push_back({{"label", result.basis.label(i)},
                    {"re", amp(i).real()},
                    {"im", amp(i).imag()}});
  }
  j["final_state"] = std::move(amps);
  return j.dump(2) + "\n";
}

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 40.0, kBottom = 52.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#8c564b", "#e377c2"};

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_line_svg(std::ostream& out, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const SvgSeries& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (log_x && !(s.x[i] > 0.0)) continue;
      if (log_y && !(s.y[i] > 0.0)) continue;
      x_min = std::min(x_min, tx(s.x[i]));
      x_max = std::max(x_max, tx(s.x[i]));
      y_min = std::min(y_min, ty(s.y[i]));
      y_max = std::max(y_max, ty(s.y[i]));
    }
  if (!(x_min <= x_max)) { x_min = 0.0; x_max = 1.0; }
  if (!(y_min <= y_max)) { y_min = 0.0; y_max = 1.0; }
  if (x_max - x_min < 1e-12) { x_min -= 0.5; x_max += 0.5; }
  if (y_max - y_min < 1e-12) { y_min -= 0.5; y_max += 0.5; }
  const double x_pad = 0.04 * (x_max - x_min), y_pad = 0.06 * (y_max - y_min);
  x_min -= x_pad; x_max += x_pad; y_min -= y_pad; y_max += y_pad;

  auto px = [&](double v) {
    return kLeft + (tx(v) - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double v) {
    return kHeight - kBottom -
           (ty(v) - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // frame and ticks
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double fy = y_min + (y_max - y_min) * i / ticks;
    const double gx = kLeft + (kWidth - kLeft - kRight) * i / ticks;
    const double gy = kHeight - kBottom - (kHeight - kTop - kBottom) * i / ticks;
    out << "<line x1=\"" << gx << "\" y1=\"" << kTop << "\" x2=\"" << gx << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"#ddd\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << gy << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << gy << "\" stroke=\"#ddd\"/>\n";
    const double x_val = log_x ? std::pow(10.0, fx) : fx;
    const double y_val = log_y ? std::pow(10.0, fy) : fy;
    out << "<text x=\"" << gx << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(x_val, "%.3g") << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(y_val, "%.3g") << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << (kTop + kHeight - kBottom) / 2 << ")\">"
      << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const SvgSeries& ser = series[s];
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (log_x && !(ser.x[i] > 0.0)) continue;
      if (log_y && !(ser.y[i] > 0.0)) continue;
      if (!first) out << " ";
      out << fmt(px(ser.x[i]), "%.6g") << "," << fmt(py(ser.y[i]), "%.6g");
      first = false;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 15 * s
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << color << "\">" << ser.name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace dickesim
