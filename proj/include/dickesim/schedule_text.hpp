#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dickesim/protocols.hpp"

namespace dickesim {

// Line-oriented schedule format, one stanza per line, `#` starts a comment:
//
//   config N=4 nmax=8 ratio=100 [omega0=.. omega_eff=..] [eta1=..] [eta2=..]
//          [delta=..] [inhomogeneity=1,1.3,...]
//   init [fock=0] [dicke=0 | bits=0110]
//   pulse blue|red k0=.. n0=.. angle=.. [phase=..] [model=two-level|symmetric|full]
//   pulse carrier angle=.. [phase=..] [model=..]
//   pulse ancilla_red n0=.. angle=.. [phase=..]
//   measure ancilla
//   expect fock=.. dicke=..
//
// Angle and phase literals accept pi-rational syntax (pi, pi/2, 3pi/4,
// -pi/2, 0.25pi) next to plain decimals. The config stanza must come first
// and appear exactly once; couplings are given either as ratio (with
// |omega_eff| = 1) or as the omega0 / omega_eff pair.
struct ExpectTarget {
  int fock = 0;
  int dicke = 0;
};

struct ScheduleDocument {
  std::string raw;
  PulseSchedule schedule;
  std::vector<ExpectTarget> expects;
  std::vector<int> step_lines;  // 1-based source line of each step
  int config_line = 0;
  int init_line = 0;

  // Coupling numbers exactly as the config stanza gave them. The serializer
  // reuses them verbatim, so round-trips never re-derive through sqrt chains
  // and stay bit-exact. Absent on hand-built documents.
  struct ConfigSurface {
    bool ratio_form = true;
    double ratio = 0.0;      // ratio form
    double omega0 = 0.0;     // pair form
    double omega_eff = 0.0;  // pair form
    double eta1 = 0.1;
    double eta2 = 0.1;
    double delta = 1.0;
    std::vector<double> scales;  // empty = homogeneous
  };
  std::optional<ConfigSurface> surface;
};

// Throws ParseError with a line / column anchor on any lexical or semantic
// violation.
ScheduleDocument parse_schedule(const std::string& text);

// Canonical text form: one stanza per line, every optional key written out,
// numbers with 17 significant digits. parse(serialize(parse(x))) equals
// parse(x), and serialize is a fixpoint on its own output.
std::string serialize_schedule(const ScheduleDocument& doc);

}  // namespace dickesim
