#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ssg/action.hpp"
#include "ssg/kms.hpp"
#include "ssg/periodicity.hpp"

namespace ssg {

struct AnalysisParams {
  int box = 4;
  int ball = 3;
  double tol = 1e-12;
  std::size_t degenerate_depth = 64;
};

// Hypotheses, Perron data, periodicity lattice and KMS simplex summary as a
// deterministic JSON report. `validation` is merged in when given.
nlohmann::json run_analysis(ActionSystem& sys, const AnalysisParams& params,
                            const ValidationReport* validation = nullptr);

nlohmann::json periodicity_report(ActionSystem& sys, const AnalysisParams& params);

// Parses "haar" or "character:t1,t2,...".
TraceSpec parse_trace(const std::string& text);

// Evaluates the periodicity unitaries of the lattice basis and the identity,
// or the given element, under the chosen trace.
nlohmann::json kms_evaluation(ActionSystem& sys, const AnalysisParams& params, const TraceSpec& trace,
                              const std::optional<nlohmann::json>& element);

}  // namespace ssg
