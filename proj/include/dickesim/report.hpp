#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dickesim/analysis.hpp"
#include "dickesim/schedule_text.hpp"

namespace dickesim {

// 17-significant-digit decimal, enough to round-trip any double exactly.
std::string csv_number(double v);

// header "t,<label>,..." then one row per trace sample
void write_trace_csv(std::ostream& out, const BasisTag& basis,
                     const std::vector<TraceRow>& trace);

// header "ratio,infidelity,wall_ms"
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Run summary with the final amplitudes, the per-expect fidelities and the
// reproducibility metadata. Timing never goes in here so reruns with the
// same seed are byte-identical.
std::string result_json(const ScheduleDocument& doc, const CompiledSchedule& compiled,
                        const ExecutionResult& result, const std::string& model_word,
                        std::uint64_t seed);

// Minimal hand-emitted SVG line chart; log axes drop nonpositive points.
struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

void write_line_svg(std::ostream& out, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_x = false,
                    bool log_y = false);

}  // namespace dickesim
