#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssg/analysis.hpp"
#include "ssg/errors.hpp"
#include "ssg/model_io.hpp"
#include "ssg/models.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kOther = 1, kInvalid = 2, kLimited = 3 };

std::string read_input(const std::string& file) {
  if (file == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ssg::ParseError("cannot open " + file);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const json& j, const std::string& out) {
  const std::string text = ssg::dump_canonical(j);
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

std::vector<std::int64_t> parse_list(const std::string& s, char sep = ',') {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ssg::ParseError("'" + item + "' is not an integer");
    }
  }
  return out;
}

// "a,b;c,d" -> rows
ssg::IntGrid parse_matrix(const std::string& s) {
  ssg::IntGrid out;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) out.push_back(parse_list(row));
  return out;
}

// Parse and validate; on failure print the report and return nullopt.
std::optional<ssg::ActionSystem> load(const std::string& file, const std::string& out, ssg::ValidationReport& rep) {
  const ssg::ModelDocument doc = ssg::parse_document(read_input(file));
  rep = ssg::validate_document(doc);
  if (!rep.ok()) {
    write_output({{"schema", ssg::kReportSchema}, {"ok", false}, {"issues", rep.issues}}, out);
    return std::nullopt;
  }
  return ssg::ActionSystem::from_tables(doc.graph, doc.tables);
}

int status_code(const json& report) {
  const std::string s = report.value("status", "ok");
  if (s == "parameter-limited") return kLimited;
  if (s == "error") return kOther;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar k-graph analysis toolkit"};
  app.require_subcommand(1);

  std::string file = "-";
  std::string out;
  ssg::AnalysisParams params;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--box", params.box, "half-width of the degree box searched for periods")->check(CLI::NonNegativeNumber);
    sub->add_option("--ball", params.ball, "word length of group elements searched")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", params.tol, "numerical tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--json", out, "write the JSON result here instead of stdout");
  };

  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("file", file, "model file, - for stdin");
  validate->add_option("--json", out, "write the JSON result here instead of stdout");

  auto* analyze = app.add_subcommand("analyze", "full analysis report");
  analyze->add_option("file", file, "model file, - for stdin");
  add_common(analyze);

  auto* per = app.add_subcommand("per", "periodicity lattice only");
  per->add_option("file", file, "model file, - for stdin");
  add_common(per);

  std::string trace_text = "haar";
  std::string element_file;
  auto* kms = app.add_subcommand("kms-eval", "evaluate a KMS state");
  kms->add_option("file", file, "model file, - for stdin");
  kms->add_option("--trace", trace_text, "haar or character:t1,t2,...");
  kms->add_option("--element", element_file, "JSON element to evaluate; default is the periodicity unitaries");
  add_common(kms);

  auto* gen = app.add_subcommand("gen", "emit a built-in model family");
  gen->require_subcommand(1);
  std::string radix;
  auto* gen_odo = gen->add_subcommand("odometer", "product of odometers");
  gen_odo->add_option("--n", radix, "radices, e.g. 2,3")->required();
  gen_odo->add_option("--json", out, "write the model here instead of stdout");
  std::string tmat, bmat;
  auto* gen_kat = gen->add_subcommand("katsura", "integer-matrix model");
  gen_kat->add_option("--t", tmat, "edge counts, rows separated by ';'")->required();
  gen_kat->add_option("--b", bmat, "multipliers, rows separated by ';'")->required();
  gen_kat->add_option("--json", out, "write the model here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_odo) {
      std::vector<int> n;
      for (auto v : parse_list(radix)) n.push_back(static_cast<int>(v));
      const auto sys = ssg::build_odometer(n);
      write_output(ssg::emit_model(sys, {{"family", "odometer"}, {"n", n}}), out);
      return kOk;
    }
    if (*gen_kat) {
      const auto t = parse_matrix(tmat), b = parse_matrix(bmat);
      const auto sys = ssg::build_katsura(t, b);
      write_output(ssg::emit_model(sys, {{"family", "katsura"}, {"T", t}, {"B", b}}), out);
      return kOk;
    }

    ssg::ValidationReport rep;
    auto sys = load(file, out, rep);
    if (!sys) return kInvalid;

    if (*validate) {
      write_output({{"schema", ssg::kReportSchema}, {"ok", true}, {"issues", json::array()}}, out);
      return kOk;
    }
    if (*analyze) {
      const json report = ssg::run_analysis(*sys, params, &rep);
      write_output(report, out);
      return status_code(report);
    }
    if (*per) {
      const json report = ssg::periodicity_report(*sys, params);
      write_output(report, out);
      return status_code(report);
    }
    if (*kms) {
      std::optional<json> element;
      if (!element_file.empty()) {
        try {
          element = json::parse(read_input(element_file));
        } catch (const json::parse_error& e) {
          throw ssg::ParseError(std::string("element: ") + e.what());
        }
      }
      write_output(ssg::kms_evaluation(*sys, params, ssg::parse_trace(trace_text), element), out);
      return kOk;
    }
  } catch (const ssg::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const ssg::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const ssg::SpecViolation& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const ssg::ClosureExceeded& e) {
    std::cerr << e.what() << "\n";
    return kLimited;
  } catch (const ssg::WitnessIncomplete& e) {
    std::cerr << e.what() << "\n";
    return kLimited;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
