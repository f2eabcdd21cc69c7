#include "dickesim/schedule_text.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace dickesim {

namespace {

struct Token {
  std::string text;
  int col = 1;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

struct KeyValue {
  std::string key;
  std::string value;
  int col = 1;
};

KeyValue split_key_value(const Token& tok, int line_no) {
  const auto eq = tok.text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.text.size())
    throw ParseError(line_no, tok.col, "expected key=value, got '" + tok.text + "'");
  return {tok.text.substr(0, eq), tok.text.substr(eq + 1), tok.col};
}

double parse_decimal(const KeyValue& kv, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(kv.value.c_str(), &end);
  if (end == kv.value.c_str() || *end != '\0')
    throw ParseError(line_no, kv.col, "malformed number '" + kv.value + "'");
  return v;
}

long parse_integer(const KeyValue& kv, int line_no) {
  char* end = nullptr;
  const long v = std::strtol(kv.value.c_str(), &end, 10);
  if (end == kv.value.c_str() || *end != '\0')
    throw ParseError(line_no, kv.col, "malformed integer '" + kv.value + "'");
  return v;
}

// pi, pi/2, 3pi/4, -pi/2, 0.25pi, or a plain decimal
double parse_angle(const KeyValue& kv, int line_no) {
  const std::string& s = kv.value;
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return parse_decimal(kv, line_no);

  const std::string head = s.substr(0, pi_pos);
  const std::string tail = s.substr(pi_pos + 2);
  double coeff = 1.0;
  if (head == "-") {
    coeff = -1.0;
  } else if (!head.empty()) {
    char* end = nullptr;
    coeff = std::strtod(head.c_str(), &end);
    if (end == head.c_str() || *end != '\0')
      throw ParseError(line_no, kv.col, "malformed angle '" + s + "'");
  }
  double denom = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/' || tail.size() < 2)
      throw ParseError(line_no, kv.col, "malformed angle '" + s + "'");
    char* end = nullptr;
    denom = std::strtod(tail.c_str() + 1, &end);
    if (end == tail.c_str() + 1 || *end != '\0' || denom == 0.0)
      throw ParseError(line_no, kv.col, "malformed angle '" + s + "'");
  }
  return coeff * 3.14159265358979323846 / denom;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string model_word(FidelityModel m) {
  switch (m) {
    case FidelityModel::TwoLevel: return "two-level";
    case FidelityModel::FullSymmetric: return "symmetric";
    case FidelityModel::FullRegister: return "full";
  }
  return "two-level";
}

FidelityModel parse_model(const KeyValue& kv, int line_no) {
  if (kv.value == "two-level") return FidelityModel::TwoLevel;
  if (kv.value == "symmetric") return FidelityModel::FullSymmetric;
  if (kv.value == "full") return FidelityModel::FullRegister;
  throw ParseError(line_no, kv.col,
                   "unknown model '" + kv.value + "' (two-level, symmetric, full)");
}

// tracks which keys appeared on one line, rejecting repeats
struct KeySet {
  std::vector<std::string> seen;
  void add(const KeyValue& kv, int line_no) {
    for (const auto& k : seen)
      if (k == kv.key) throw ParseError(line_no, kv.col, "duplicate key '" + kv.key + "'");
    seen.push_back(kv.key);
  }
};

}  // namespace

ScheduleDocument parse_schedule(const std::string& text) {
  ScheduleDocument doc;
  doc.raw = text;

  bool have_config = false;
  bool have_init = false;
  int line_no = 0;
  std::istringstream stream(text);
  std::string raw_line;

  // config keys held until the end of the config line
  int cfg_n = 0, cfg_nmax = 0;
  double cfg_ratio = -1.0, cfg_omega0 = -1.0, cfg_omega_eff = -1.0;
  double cfg_eta1 = 0.1, cfg_eta2 = 0.1, cfg_delta = 1.0;
  std::vector<double> cfg_scales;

  while (std::getline(stream, raw_line)) {
    ++line_no;
    if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
    const auto hash = raw_line.find('#');
    if (hash != std::string::npos) raw_line.resize(hash);
    std::vector<Token> tokens = tokenize(raw_line);
    if (tokens.empty()) continue;
    const Token& head = tokens[0];

    if (head.text == "config") {
      if (have_config)
        throw ParseError(line_no, head.col, "duplicate config stanza");
      have_config = true;
      doc.config_line = line_no;
      KeySet keys;
      bool have_n = false, have_nmax = false;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        KeyValue kv = split_key_value(tokens[i], line_no);
        keys.add(kv, line_no);
        if (kv.key == "N") {
          cfg_n = static_cast<int>(parse_integer(kv, line_no));
          if (cfg_n < 1) throw ParseError(line_no, kv.col, "N must be >= 1");
          have_n = true;
        } else if (kv.key == "nmax") {
          cfg_nmax = static_cast<int>(parse_integer(kv, line_no));
          if (cfg_nmax < 1) throw ParseError(line_no, kv.col, "nmax must be >= 1");
          have_nmax = true;
        } else if (kv.key == "ratio") {
          cfg_ratio = parse_decimal(kv, line_no);
          if (!(cfg_ratio > 0.0)) throw ParseError(line_no, kv.col, "ratio must be > 0");
        } else if (kv.key == "omega0") {
          cfg_omega0 = parse_decimal(kv, line_no);
          if (!(cfg_omega0 > 0.0)) throw ParseError(line_no, kv.col, "omega0 must be > 0");
        } else if (kv.key == "omega_eff") {
          cfg_omega_eff = parse_decimal(kv, line_no);
          if (!(cfg_omega_eff > 0.0))
            throw ParseError(line_no, kv.col, "omega_eff must be > 0");
        } else if (kv.key == "eta1") {
          cfg_eta1 = parse_decimal(kv, line_no);
          if (!(cfg_eta1 > 0.0 && cfg_eta1 < 1.0))
            throw ParseError(line_no, kv.col, "eta1 must lie in (0, 1)");
        } else if (kv.key == "eta2") {
          cfg_eta2 = parse_decimal(kv, line_no);
          if (!(cfg_eta2 > 0.0 && cfg_eta2 < 1.0))
            throw ParseError(line_no, kv.col, "eta2 must lie in (0, 1)");
        } else if (kv.key == "delta") {
          cfg_delta = parse_decimal(kv, line_no);
          if (!(cfg_delta > 0.0)) throw ParseError(line_no, kv.col, "delta must be > 0");
        } else if (kv.key == "inhomogeneity") {
          cfg_scales.clear();
          std::size_t pos = 0;
          const std::string& list = kv.value;
          while (pos <= list.size()) {
            const auto comma = list.find(',', pos);
            const std::string item =
                list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            KeyValue fake{kv.key, item, kv.col};
            const double s = parse_decimal(fake, line_no);
            if (!(s > 0.0))
              throw ParseError(line_no, kv.col, "inhomogeneity entries must be > 0");
            cfg_scales.push_back(s);
            if (comma == std::string::npos) break;
            pos = comma + 1;
          }
        } else {
          throw ParseError(line_no, kv.col, "unknown key '" + kv.key + "'");
        }
      }
      if (!have_n) throw ParseError(line_no, head.col, "config needs an N= key");
      if (!have_nmax) throw ParseError(line_no, head.col, "config needs an nmax= key");
      const bool pair_form = cfg_omega0 > 0.0 || cfg_omega_eff > 0.0;
      if (cfg_ratio > 0.0 && pair_form)
        throw ParseError(line_no, head.col,
                         "give either ratio or the omega0/omega_eff pair, not both");
      if (!(cfg_ratio > 0.0) && !(cfg_omega0 > 0.0 && cfg_omega_eff > 0.0))
        throw ParseError(line_no, head.col,
                         "config needs ratio= or the omega0=/omega_eff= pair");
      if (!cfg_scales.empty() && static_cast<int>(cfg_scales.size()) != cfg_n)
        throw ParseError(line_no, head.col, "inhomogeneity needs exactly N = " +
                                                std::to_string(cfg_n) + " entries");

      // omega0(0) must come out as `target0` and |omega_eff(0)| as `scale_eff`
      const double target0 = cfg_ratio > 0.0 ? cfg_ratio : cfg_omega0;
      const double scale_eff = cfg_ratio > 0.0 ? 1.0 : cfg_omega_eff;
      IonChainConfig& cfg = doc.schedule.config;
      cfg.num_ions = cfg_n;
      cfg.n_max = cfg_nmax;
      cfg.eta1 = cfg_eta1;
      cfg.eta2 = cfg_eta2;
      cfg.delta = cfg_delta;
      const double o1 = std::sqrt(target0 * cfg_delta / (2.0 * cfg_eta1 * cfg_eta1));
      const double o2 = scale_eff * cfg_delta / (2.0 * cfg_eta2 * o1);
      cfg.omega1.resize(cfg_n);
      cfg.omega2.resize(cfg_n);
      for (int j = 0; j < cfg_n; ++j) {
        const double s = cfg_scales.empty() ? 1.0 : cfg_scales[j];
        cfg.omega1(j) = Complex(s * o1, 0.0);
        cfg.omega2(j) = Complex(o2, 0.0);
      }
      cfg.delta0 = VectorXd::Zero(cfg_n);

      ScheduleDocument::ConfigSurface surface;
      surface.ratio_form = cfg_ratio > 0.0;
      surface.ratio = cfg_ratio;
      surface.omega0 = cfg_omega0;
      surface.omega_eff = cfg_omega_eff;
      surface.eta1 = cfg_eta1;
      surface.eta2 = cfg_eta2;
      surface.delta = cfg_delta;
      surface.scales = cfg_scales;
      doc.surface = std::move(surface);
      continue;
    }

    if (!have_config)
      throw ParseError(line_no, head.col, "missing config stanza before '" + head.text + "'");
    const IonChainConfig& cfg = doc.schedule.config;

    if (head.text == "init") {
      if (have_init) throw ParseError(line_no, head.col, "duplicate init stanza");
      have_init = true;
      doc.init_line = line_no;
      if (!doc.schedule.steps.empty())
        throw ParseError(line_no, head.col, "init must precede every pulse");
      KeySet keys;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        KeyValue kv = split_key_value(tokens[i], line_no);
        keys.add(kv, line_no);
        if (kv.key == "fock") {
          const long v = parse_integer(kv, line_no);
          if (v < 0 || v > cfg.n_max)
            throw ParseError(line_no, kv.col, "fock exceeds n_max = " +
                                                  std::to_string(cfg.n_max));
          doc.schedule.initial.fock = static_cast<int>(v);
        } else if (kv.key == "dicke") {
          if (doc.schedule.initial.bits)
            throw ParseError(line_no, kv.col, "give dicke= or bits=, not both");
          const long v = parse_integer(kv, line_no);
          if (v < 0 || v > cfg.num_ions)
            throw ParseError(line_no, kv.col, "dicke exceeds N = " +
                                                  std::to_string(cfg.num_ions));
          doc.schedule.initial.dicke = static_cast<int>(v);
        } else if (kv.key == "bits") {
          for (const auto& k : keys.seen)
            if (k == "dicke")
              throw ParseError(line_no, kv.col, "give dicke= or bits=, not both");
          if (static_cast<int>(kv.value.size()) != cfg.num_ions)
            throw ParseError(line_no, kv.col, "bits needs exactly N = " +
                                                  std::to_string(cfg.num_ions) + " digits");
          std::vector<int> bits;
          for (char c : kv.value) {
            if (c != '0' && c != '1')
              throw ParseError(line_no, kv.col, "bits digits must be 0 or 1");
            bits.push_back(c - '0');
          }
          doc.schedule.initial.bits = std::move(bits);
        } else {
          throw ParseError(line_no, kv.col, "unknown key '" + kv.key + "'");
        }
      }
      continue;
    }

    if (head.text == "pulse") {
      if (tokens.size() < 2)
        throw ParseError(line_no, head.col, "pulse needs a kind (blue, red, carrier, ancilla_red)");
      const Token& kind_tok = tokens[1];
      PulseStep step;
      bool needs_k0 = false, needs_n0 = false, allow_model = true;
      if (kind_tok.text == "blue" || kind_tok.text == "red") {
        step.kind = StepKind::SelectiveSideband;
        step.target.sideband = kind_tok.text == "blue" ? Sideband::Blue : Sideband::Red;
        needs_k0 = needs_n0 = true;
      } else if (kind_tok.text == "carrier") {
        step.kind = StepKind::Carrier;
      } else if (kind_tok.text == "ancilla_red") {
        step.kind = StepKind::AncillaRedSideband;
        needs_n0 = true;
        allow_model = false;
      } else {
        throw ParseError(line_no, kind_tok.col,
                         "unknown pulse kind '" + kind_tok.text + "'");
      }

      KeySet keys;
      bool have_k0 = false, have_n0 = false, have_angle = false;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        KeyValue kv = split_key_value(tokens[i], line_no);
        keys.add(kv, line_no);
        if (kv.key == "k0" && needs_k0) {
          const long v = parse_integer(kv, line_no);
          if (v < 0) throw ParseError(line_no, kv.col, "k0 must be >= 0");
          if (v > cfg.num_ions - 1)
            throw ParseError(line_no, kv.col, "k0 exceeds N-1 = " +
                                                  std::to_string(cfg.num_ions - 1));
          step.target.k0 = static_cast<int>(v);
          have_k0 = true;
        } else if (kv.key == "n0" && needs_n0) {
          const long v = parse_integer(kv, line_no);
          if (v < 0) throw ParseError(line_no, kv.col, "n0 must be >= 0");
          if (v > cfg.n_max - 1)
            throw ParseError(line_no, kv.col, "n0 exceeds n_max-1 = " +
                                                  std::to_string(cfg.n_max - 1));
          step.target.n0 = static_cast<int>(v);
          have_n0 = true;
        } else if (kv.key == "angle") {
          step.rabi_angle = parse_angle(kv, line_no);
          if (step.rabi_angle < 0.0)
            throw ParseError(line_no, kv.col, "angle must be >= 0");
          have_angle = true;
        } else if (kv.key == "phase") {
          step.phase = parse_angle(kv, line_no);
        } else if (kv.key == "model" && allow_model) {
          step.fidelity_model = parse_model(kv, line_no);
        } else {
          throw ParseError(line_no, kv.col, "unknown key '" + kv.key + "' for " +
                                                kind_tok.text + " pulses");
        }
      }
      if (needs_k0 && !have_k0)
        throw ParseError(line_no, head.col, kind_tok.text + " pulse needs a k0= key");
      if (needs_n0 && !have_n0)
        throw ParseError(line_no, head.col, kind_tok.text + " pulse needs an n0= key");
      if (!have_angle)
        throw ParseError(line_no, head.col, kind_tok.text + " pulse needs an angle= key");
      doc.schedule.steps.push_back(step);
      doc.step_lines.push_back(line_no);
      continue;
    }

    if (head.text == "measure") {
      if (tokens.size() != 2 || tokens[1].text != "ancilla")
        throw ParseError(line_no, head.col, "only 'measure ancilla' is supported");
      PulseStep step;
      step.kind = StepKind::Measure;
      doc.schedule.steps.push_back(step);
      doc.step_lines.push_back(line_no);
      continue;
    }

    if (head.text == "expect") {
      ExpectTarget target;
      KeySet keys;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        KeyValue kv = split_key_value(tokens[i], line_no);
        keys.add(kv, line_no);
        if (kv.key == "fock") {
          const long v = parse_integer(kv, line_no);
          if (v < 0 || v > cfg.n_max)
            throw ParseError(line_no, kv.col, "fock exceeds n_max = " +
                                                  std::to_string(cfg.n_max));
          target.fock = static_cast<int>(v);
        } else if (kv.key == "dicke") {
          const long v = parse_integer(kv, line_no);
          if (v < 0 || v > cfg.num_ions)
            throw ParseError(line_no, kv.col, "dicke exceeds N = " +
                                                  std::to_string(cfg.num_ions));
          target.dicke = static_cast<int>(v);
        } else {
          throw ParseError(line_no, kv.col, "unknown key '" + kv.key + "'");
        }
      }
      doc.expects.push_back(target);
      continue;
    }

    throw ParseError(line_no, head.col, "unknown stanza '" + head.text + "'");
  }

  if (!have_config) throw ParseError(1, 1, "missing config stanza");
  return doc;
}

std::string serialize_schedule(const ScheduleDocument& doc) {
  const IonChainConfig& cfg = doc.schedule.config;
  std::string out;

  ScheduleDocument::ConfigSurface s;
  if (doc.surface) {
    s = *doc.surface;
  } else {
    // hand-built document: recover the surface numbers from the couplings
    const double eff0 = std::abs(cfg.omega_eff(0));
    s.ratio_form = eff0 == 1.0;
    s.ratio = cfg.omega0(0) / eff0;
    s.omega0 = cfg.omega0(0);
    s.omega_eff = eff0;
    s.eta1 = cfg.eta1;
    s.eta2 = cfg.eta2;
    s.delta = cfg.delta;
    for (int j = 0; j < cfg.num_ions; ++j)
      s.scales.push_back(std::abs(cfg.omega_eff(j)) / eff0);
  }
  bool scaled = false;
  for (double v : s.scales)
    if (v != 1.0) scaled = true;

  out += "config N=" + std::to_string(cfg.num_ions) +
         " nmax=" + std::to_string(cfg.n_max);
  if (s.ratio_form) {
    out += " ratio=" + format_number(s.ratio);
  } else {
    out += " omega0=" + format_number(s.omega0) +
           " omega_eff=" + format_number(s.omega_eff);
  }
  out += " eta1=" + format_number(s.eta1) + " eta2=" + format_number(s.eta2) +
         " delta=" + format_number(s.delta);
  if (scaled) {
    out += " inhomogeneity=";
    for (std::size_t j = 0; j < s.scales.size(); ++j) {
      if (j > 0) out += ",";
      out += format_number(s.scales[j]);
    }
  }
  out += "\n";

  out += "init fock=" + std::to_string(doc.schedule.initial.fock);
  if (doc.schedule.initial.bits) {
    out += " bits=";
    for (int b : *doc.schedule.initial.bits) out += b ? "1" : "0";
  } else {
    out += " dicke=" + std::to_string(doc.schedule.initial.dicke);
  }
  out += "\n";

  for (const PulseStep& step : doc.schedule.steps) {
    switch (step.kind) {
      case StepKind::SelectiveSideband:
        out += std::string("pulse ") +
               (step.target.sideband == Sideband::Blue ? "blue" : "red") +
               " k0=" + std::to_string(step.target.k0) +
               " n0=" + std::to_string(step.target.n0) +
               " angle=" + format_number(step.rabi_angle) +
               " phase=" + format_number(step.phase) + " model=" +
               model_word(step.fidelity_model) + "\n";
        break;
      case StepKind::Carrier:
        out += "pulse carrier angle=" + format_number(step.rabi_angle) +
               " phase=" + format_number(step.phase) + " model=" +
               model_word(step.fidelity_model) + "\n";
        break;
      case StepKind::AncillaRedSideband:
        out += "pulse ancilla_red n0=" + std::to_string(step.target.n0) +
               " angle=" + format_number(step.rabi_angle) +
               " phase=" + format_number(step.phase) + "\n";
        break;
      case StepKind::Measure:
        out += "measure ancilla\n";
        break;
    }
  }

  for (const ExpectTarget& e : doc.expects)
    out += "expect fock=" + std::to_string(e.fock) +
           " dicke=" + std::to_string(e.dicke) + "\n";
  return out;
}

}  // namespace dickesim
