#include "ssg/analysis.hpp"

#include <algorithm>
#include <sstream>

#include "ssg/errors.hpp"
#include "ssg/model_io.hpp"
#include "ssg/models.hpp"
#include "ssg/perron.hpp"

namespace ssg {

using nlohmann::json;

namespace {

// Sections that fail are embedded as {"error": ...}; the overall status tracks
// the most serious failure so the CLI can map it to an exit code.
struct StatusTracker {
  std::string status = "ok";
  void limited() {
    if (status == "ok") status = "parameter-limited";
  }
  void failed() { status = "error"; }
};

json witness_json(const ActionSystem& sys, const PropertyVerdict& v) {
  json out = {{"holds", v.holds}};
  if (v.witness) {
    out["witness"] = {{"element", sys.word_of(v.witness->element)},
                      {"element_text", sys.describe(v.witness->element)},
                      {"path", path_to_json(sys.graph(), v.witness->path)},
                      {"path_text", sys.graph().describe(v.witness->path)},
                      {"detail", v.witness->detail}};
  }
  return out;
}

json perron_json(const PerronData& d) {
  json exact = json::array();
  for (const auto& r : d.exact_rho) exact.push_back(r ? json(*r) : json(nullptr));
  return {{"rho", d.rho},
          {"x", d.x},
          {"residuals", d.residuals},
          {"exact_rho", exact},
          {"integral", d.all_integral()},
          {"iterations", d.iterations}};
}

template <class F>
json guarded(StatusTracker& st, F&& f) {
  try {
    return f();
  } catch (const ClosureExceeded& e) {
    st.limited();
    return {{"error", e.what()}};
  } catch (const WitnessIncomplete& e) {
    st.limited();
    return {{"error", e.what()}};
  } catch (const Error& e) {
    st.failed();
    return {{"error", e.what()}};
  }
}

PeriodicityParams periodicity_params(const AnalysisParams& p) {
  // The Perron tolerance is tight; the rho pre-filter works on products of
  // powers and needs more slack.
  return {p.box, p.ball, std::max(p.tol, 1e-9)};
}

json lattice_json(const PeriodicityLattice& lat) {
  return {{"box", lat.box},
          {"ball", lat.ball},
          {"rank", lat.rank()},
          {"basis", lat.basis},
          {"members_in_box", lat.members.size()},
          {"group_elements_searched", lat.group_elements_searched}};
}

json model_json(const ActionSystem& sys) {
  json names = json::array();
  for (std::size_t i = 0; i < sys.num_generators(); ++i) names.push_back(sys.generator_name(i));
  return {{"k", sys.graph().k()},
          {"vertices", sys.graph().num_vertices()},
          {"edges", sys.graph().num_edges()},
          {"generators", names},
          {"backend", sys.backend_kind()}};
}

}  // namespace

json periodicity_report(ActionSystem& sys, const AnalysisParams& params) {
  StatusTracker st;
  json out;
  out["schema"] = kReportSchema;
  out["model"] = model_json(sys);
  std::optional<PerronData> data;
  out["perron"] = guarded(st, [&]() -> json {
    data = spectral_data(sys.graph(), {params.tol, 100000});
    return perron_json(*data);
  });
  if (data) {
    out["periodicity"] = guarded(st, [&]() -> json {
      const auto pp = periodicity_params(params);
      json j = lattice_json(periodicity_group(sys, *data, pp));
      j["rho_kernel_basis"] = rho_kernel_lattice(*data, params.box, pp.tol);
      return j;
    });
  }
  out["status"] = st.status;
  return out;
}

json run_analysis(ActionSystem& sys, const AnalysisParams& params, const ValidationReport* validation) {
  StatusTracker st;
  json out;
  out["schema"] = kReportSchema;
  out["model"] = model_json(sys);

  ValidationReport rep;
  if (validation)
    rep = *validation;
  else
    rep = validate_action(sys);
  out["validation"] = {{"ok", rep.ok()}, {"issues", rep.issues}};

  json hyp;
  hyp["strongly_connected"] = strongly_connected(sys.graph());
  std::vector<GroupElement> closure;
  hyp["finite_state"] = guarded(st, [&]() -> json {
    closure = sys.restriction_closure(sys.generators());
    return {{"holds", true}, {"closure_size", closure.size()}, {"cap", sys.caps().max_states}};
  });
  if (!closure.empty() || sys.num_generators() == 0) {
    auto states = closure;
    states.push_back(sys.identity());
    hyp["pseudo_free"] = guarded(st, [&]() -> json { return witness_json(sys, check_pseudo_free(sys, states)); });
    hyp["locally_faithful"] =
        guarded(st, [&]() -> json { return witness_json(sys, check_locally_faithful(sys, states)); });
  }
  Tristate degenerate = Tristate::unknown;
  hyp["degenerate_property"] = guarded(st, [&]() -> json {
    degenerate = check_degenerate_property(sys, params.degenerate_depth);
    return to_string(degenerate);
  });
  out["hypotheses"] = std::move(hyp);

  std::optional<PerronData> data;
  out["perron"] = guarded(st, [&]() -> json {
    data = spectral_data(sys.graph(), {params.tol, 100000});
    return perron_json(*data);
  });

  std::optional<PeriodicityLattice> lattice;
  if (data) {
    const auto pp = periodicity_params(params);
    out["periodicity"] = guarded(st, [&]() -> json {
      lattice = periodicity_group(sys, *data, pp);
      json j = lattice_json(*lattice);
      j["rho_kernel_basis"] = rho_kernel_lattice(*data, params.box, pp.tol);
      // With the degenerate property every cycline witness is reachable from a
      // restriction of a short word, so the ball caveat is lifted.
      j["ball_sufficient"] = degenerate == Tristate::yes;
      return j;
    });
  }
  if (data && lattice) {
    out["kms"] = guarded(st, [&]() -> json {
      const auto s = simplex_summary(sys, *data, *lattice);
      return {{"exists", s.exists}, {"rank", s.rank}, {"verdict", s.verdict}, {"box", s.box}, {"ball", s.ball}};
    });
  }
  out["status"] = st.status;
  return out;
}

TraceSpec parse_trace(const std::string& text) {
  if (text == "haar") return TraceSpec::haar();
  const std::string prefix = "character:";
  if (text.rfind(prefix, 0) != 0) throw ParseError("trace must be 'haar' or 'character:t1,t2,...'");
  std::vector<double> theta;
  std::stringstream ss(text.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      theta.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("trace: '" + item + "' is not a number");
    }
  }
  if (theta.empty()) throw ParseError("trace: character needs at least one angle");
  return TraceSpec::character(std::move(theta));
}

json kms_evaluation(ActionSystem& sys, const AnalysisParams& params, const TraceSpec& trace,
                    const std::optional<json>& element) {
  PerronData data = spectral_data(sys.graph(), {params.tol, 100000});
  PeriodicityLattice lattice = periodicity_group(sys, data, periodicity_params(params));
  if (trace.kind == TraceSpec::Kind::character && trace.theta.size() != lattice.rank())
    throw ParseError("trace: character needs " + std::to_string(lattice.rank()) + " angles, got " +
                     std::to_string(trace.theta.size()));
  const auto basis = lattice.basis;
  KmsState state(sys, data, lattice, trace);

  json out;
  out["schema"] = kReportSchema;
  out["model"] = model_json(sys);
  out["lattice"] = lattice_json(state.lattice());
  auto value = [](std::complex<double> c) { return json{{"re", c.real()}, {"im", c.imag()}}; };
  json evals = json::array();
  if (element) {
    const ComplexElement a = element_from_json(sys, *element);
    evals.push_back({{"element", "input"}, {"value", value(state.evaluate(a))}});
  } else {
    evals.push_back({{"element", "identity"}, {"value", value(state.evaluate(identity_element<std::complex<double>>(sys)))}});
    const auto group = sys.group_ball(params.ball);
    for (const auto& z : basis) {
      const auto [m, n] = split_degree(z);
      const ComplexElement v = periodicity_unitary<std::complex<double>>(sys, m, n, group);
      evals.push_back({{"element", "V"}, {"m", m}, {"n", n}, {"terms", v.size()}, {"value", value(state.evaluate(v))}});
    }
  }
  out["evaluations"] = std::move(evals);
  return out;
}

}  // namespace ssg
