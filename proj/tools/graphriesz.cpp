#include "graphriesz/extremal.hpp"
#include "graphriesz/families.hpp"
#include "graphriesz/graph_io.hpp"
#include "graphriesz/report.hpp"
#include "graphriesz/spectral.hpp"
#include "graphriesz/suites.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace graphriesz;
using nlohmann::json;

namespace {

struct Options {
  std::string graph_file;
  std::optional<double> p;
  std::optional<double> a;
  double t = 1.0;
  std::uint64_t seed = 7;
  double tol = 1e-10;
  std::string out;
  std::string format = "json";
  int budget = 8;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

WeightedGraph require_graph(const Options& o) {
  if (o.graph_file.empty()) throw CLI::RequiredError("--graph");
  return load_graph(o.graph_file);
}

RatioFunctional functional_by_name(const std::string& name, double p, double t) {
  if (name == "riesz_edge") return riesz_edge(p);
  if (name == "riesz_vertex") return riesz_vertex(p);
  if (name == "reverse_riesz") return reverse_riesz(p);
  if (name == "mip") return mip(p);
  if (name == "mip_vertex") return mip_vertex(p);
  if (name == "gp") return gp(p, t);
  if (name == "sobolev") return sobolev(p);
  // norm_equiv:<num>/<den>[:mean_zero|:nonnegative]
  if (name.rfind("norm_equiv:", 0) == 0) {
    std::string rest = name.substr(11);
    Constraint c = Constraint::None;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      const std::string tag = rest.substr(colon + 1);
      rest = rest.substr(0, colon);
      if (tag == "mean_zero") c = Constraint::MeanZero;
      else if (tag == "nonnegative") c = Constraint::NonNegative;
      else throw CLI::ValidationError("functional", "unknown constraint '" + tag + "'");
    }
    const auto slash = rest.find('/');
    if (slash == std::string::npos) throw CLI::ValidationError("functional", "expected norm_equiv:<num>/<den>");
    auto quantity = [](const std::string& q) {
      for (Quantity k : {Quantity::Function, Quantity::MeanZeroPart, Quantity::EdgeGradient, Quantity::VertexGradient,
                         Quantity::HalfLaplacian, Quantity::Laplacian, Quantity::HeatEdgeGradient})
        if (quantity_name(k) == q) return k;
      throw CLI::ValidationError("functional", "unknown quantity '" + q + "'");
    };
    return norm_equiv(quantity(rest.substr(0, slash)), quantity(rest.substr(slash + 1)), p, c);
  }
  throw CLI::ValidationError("functional", "unknown functional '" + name + "'");
}

int run_gen(const Options& o, FamilySpec spec, const std::string& measure) {
  spec.seed = o.seed;
  spec.measure = measure == "degree" ? Measure::Degree : Measure::Unit;
  emit(o, serialize_graph(generate_family(spec)) + "\n");
  return 0;
}

int run_spec(const Options& o) {
  const WeightedGraph g = require_graph(o);
  const auto dec = spectral_decompose(g);
  const bool small = g.num_interior() <= 22;
  const GapReport gap = gap_report(g, dec, small);
  json j;
  j["eigenvalues"] = std::vector<double>(dec.eigenvalues().data(), dec.eigenvalues().data() + dec.size());
  j["M"] = gap.M;
  j["cheeger"] = gap.cheeger ? json(gap.cheeger->h) : json(nullptr);
  j["bottom"] = gap.bottom;
  j["gap"] = gap.gap_above_zero ? json(*gap.gap_above_zero) : json(nullptr);
  j["kernel_dimension"] = gap.kernel_dimension;
  j["sweeps"] = dec.sweeps();
  emit(o, dump(round_json(j)));
  return 0;
}

int run_check(const Options& o, const std::string& suite) {
  SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.p = o.p;
  cfg.a = o.a;
  cfg.t = o.t;
  cfg.tol = o.tol;
  cfg.budget.restarts = o.budget;
  if (!o.graph_file.empty()) cfg.graph = load_graph(o.graph_file);
  const SuiteReport r = run_suite(suite, cfg);
  emit(o, o.format == "csv" ? to_csv({r}) : dump(to_json(r)));
  if (r.passed()) return 0;
  for (const auto& c : r.checks)
    if (c.status == Status::Fail)
      std::cerr << "FAIL " << c.id << " " << round_json(c.values).dump() << "\n";
  return 1;
}

int run_extremal(const Options& o, const std::string& name) {
  const WeightedGraph g = require_graph(o);
  const auto dec = spectral_decompose(g);
  const RatioFunctional F = functional_by_name(name, o.p.value_or(2.0), o.t);
  Budget budget;
  budget.restarts = o.budget;
  const ExtremalEstimate est = maximize_ratio(g, dec, F, budget, o.seed);
  emit(o, dump(round_json(to_json(g, est))));
  return 0;
}

int run_report(const Options& o, const std::vector<std::string>& inputs) {
  std::vector<SuiteReport> reports;
  for (const auto& path : inputs) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read '" + path + "'");
    reports.push_back(report_from_json(json::parse(f)));
  }
  if (o.format == "json") {
    json all = json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    emit(o, dump(all));
  } else {
    emit(o, to_csv(reports));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of functional inequalities on weighted graphs", "graphriesz"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", GRAPHRIESZ_VERSION);

  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph_file, "graph JSON file")->check(CLI::ExistingFile);
    sub->add_option("--p", o.p, "exponent");
    sub->add_option("--a", o.a, "tilt parameter");
    sub->add_option("--t", o.t, "time parameter");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--tol", o.tol, "identity tolerance");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--budget", o.budget, "restarts per extremal search")->check(CLI::PositiveNumber);
  };

  FamilySpec spec;
  std::string measure = "unit";
  auto* gen = app.add_subcommand("gen", "emit graph JSON for a family");
  common(gen);
  gen->add_option("family", spec.name, "path|cycle|complete|eps_lattice|expanding_tree|regular_tree|random")
      ->required()
      ->check(CLI::IsMember({"path", "cycle", "complete", "eps_lattice", "expanding_tree", "regular_tree", "random"}));
  gen->add_option("--n", spec.n, "size");
  gen->add_option("--K", spec.K, "lattice half-width");
  gen->add_option("--eps", spec.eps, "lattice defect weight");
  gen->add_option("--depth", spec.depth, "tree depth");
  gen->add_option("--branching", spec.branching, "regular tree branching");
  gen->add_option("--m", spec.m_target, "random graph bound on deg/nu");
  gen->add_option("--boundary", spec.boundary_count, "random graph Dirichlet vertices");
  gen->add_option("--measure", measure, "unit or degree")->check(CLI::IsMember({"unit", "degree"}));

  auto* spec_cmd = app.add_subcommand("spec", "eigenvalues, gap, Cheeger constant and M as JSON");
  common(spec_cmd);

  std::string suite;
  auto* check = app.add_subcommand("check", "run a verification suite");
  common(check);
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  check->add_option("suite", suite, "suite id")->required()->check(CLI::IsMember(suites));

  std::string functional;
  auto* extremal = app.add_subcommand("extremal", "maximize one ratio functional on one graph");
  common(extremal);
  extremal->add_option("functional", functional,
                       "riesz_edge|riesz_vertex|reverse_riesz|mip|mip_vertex|gp|sobolev|norm_equiv:<num>/<den>[:mean_zero]")
      ->required();

  std::vector<std::string> inputs;
  auto* report = app.add_subcommand("report", "aggregate suite JSON outputs into CSV");
  common(report);
  report->add_option("inputs", inputs, "suite report JSON files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (report->parsed() && report->count("--format") == 0) o.format = "csv";

  try {
    if (gen->parsed()) return run_gen(o, spec, measure);
    if (spec_cmd->parsed()) return run_spec(o);
    if (check->parsed()) return run_check(o, suite);
    if (extremal->parsed()) return run_extremal(o, functional);
    if (report->parsed()) return run_report(o, inputs);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
