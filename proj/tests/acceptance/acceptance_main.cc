// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Details of failures go to stderr.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../fixtures/published_tables.h"
#include "../oracle/path_oracle.h"
#include "../oracle/plan_oracle.h"
#include "../support/toy_instances.h"
#include "pipeplan/candidate_graph.h"
#include "pipeplan/cost_model.h"
#include "pipeplan/economics.h"
#include "pipeplan/errors.h"
#include "pipeplan/planning.h"
#include "pipeplan/routing.h"

namespace {

using namespace pipeplan;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Collects failed checks of one criterion.
class Check {
 public:
  explicit Check(std::string name) : name_(std::move(name)) {}

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 10) std::cerr << "  [" << name_ << "] " << what << "\n";
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_ == 0; }
  int failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::string name_;
  int failures_ = 0;
  std::vector<std::string> notes_;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// 1. Least-cost routing equals exhaustive simple-path enumeration.
void routing_oracle(Check& c) {
  const auto t0 = Clock::now();
  std::mt19937 g(20240601);
  for (int k = 0; k < 20; ++k) {
    const int w = 3 + static_cast<int>(g() % 4);
    const int h = 3 + static_cast<int>(g() % 4);
    std::vector<int> mult(w * h);
    for (int& m : mult) m = 1 + static_cast<int>(g() % 9);
    GridSpec spec;
    spec.width = w;
    spec.height = h;
    spec.cell_size = 1.0 + static_cast<int>(g() % 3) * 0.5;
    RasterMap r(spec, std::vector<double>(mult.begin(), mult.end()));
    const Cell from{static_cast<int>(g() % h), static_cast<int>(g() % w)};
    Cell to = from;
    while (to == from) {
      to = {static_cast<int>(g() % h), static_cast<int>(g() % w)};
    }
    oracle::PathEnumerator e(w, h, mult);
    const oracle::ExactCost best = e.solve({from.row, from.col}, {to.row, to.col});
    const RouteResult got = least_cost_path(r, from, to);
    const double want = 0.5 * spec.cell_size * best.approx();
    c.expect(std::abs(got.penalty - want) <= 1e-12 * want,
             "raster " + std::to_string(k) + ": penalty " + fmt(got.penalty, 15) +
                 " vs " + fmt(want, 15));
    // The returned path must attain the optimum exactly.
    std::vector<oracle::GridCell> path;
    for (const Cell& cell : got.cells) path.push_back({cell.row, cell.col});
    c.expect(oracle::equal(e.cost_of(path), best),
             "raster " + std::to_string(k) + ": path is not exactly optimal");
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, "runtime " + fmt(secs) + " s");
  c.note(fmt(secs, 3) + " s");
}

// 2. Fitted trends are close to the exact curve and never above it.
void trend_soundness(Check& c) {
  const HydraulicParams h;
  CostParams cp;
  cp.c3 = 829.5;
  const double f_max = 30.0;
  const double tol = 0.02;
  const TrendFit fit = fit_trends(cp, h, f_max, 3, tol);
  c.expect(fit.trends.size() == 3, "expected 3 trends");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double q = f_max * (i + 0.5) / 1000.0;
    const double exact = unit_cost_from_flow(q, h, cp);
    for (const Trend& t : fit.trends) {
      if (q < t.q_min || q > t.q_max) continue;
      worst = std::max(worst, std::abs(t.value(q) - exact) / exact);
      c.expect(t.value(q) <= exact * (1 + 1e-12),
               "chord above curve at " + fmt(q));
    }
  }
  c.expect(worst <= tol, "max deviation " + fmt(worst));
  c.note("max deviation " + fmt(100 * worst, 3) + "% at c3 = 829.5");
  const TrendFit defaults = fit_trends({}, h, f_max, 3, tol);
  c.note("default constants reach " +
         fmt(100 * defaults.max_relative_error, 3) + "%");
}

struct Solved {
  std::string label;
  PlanningInput in;
  std::vector<PlanSolution> m1;
  std::vector<PlanSolution> m2;
  PlanSolution regret;
  bool same_first = false;
};

toy::Shape shape_of(int k) {
  static const toy::Shape shapes[] = {toy::Shape::kStar, toy::Shape::kPath,
                                      toy::Shape::kChain, toy::Shape::kMeshed};
  return shapes[k % 4];
}

// 3. Model objectives equal brute-force enumeration.
std::vector<Solved> milp_oracle(Check& c) {
  const auto t0 = Clock::now();
  std::vector<Solved> solved;
  for (int k = 0; k < 25; ++k) {
    const int scenarios = 1 + k % 3;
    const bool same_first = k % 5 == 4;
    const auto tc = toy::make_toy(1000 + k, shape_of(k), scenarios, same_first);
    Solved s{tc.label, tc.input, {}, {}, {}, same_first};
    s.m1 = best_solutions(s.in, {});
    std::map<std::string, double> best;
    std::vector<long double> best_mio;
    for (std::size_t i = 0; i < s.m1.size(); ++i) {
      best[s.in.scenarios.scenarios[i].id] = s.m1[i].objective;
      best_mio.push_back(s.m1[i].objective * 1e-6L);
    }
    for (int i = 0; i < scenarios; ++i) s.m2.push_back(solve_m2(s.in, i, {}));
    s.regret = solve_min_max_regret(s.in, best, {});

    oracle::PlanOracle o(toy::to_oracle(s.in));
    for (int i = 0; i < scenarios; ++i) {
      const double want = static_cast<double>(o.m1(i));
      c.expect(rel(s.m1[i].objective * 1e-6, want) <= 1e-6,
               s.label + " M1 S" + std::to_string(i + 1) + ": " +
                   fmt(s.m1[i].objective * 1e-6, 12) + " vs " + fmt(want, 12));
    }
    const double step1 = static_cast<double>(o.m2_step1());
    c.expect(rel(*s.m2[0].step1_i0 * 1e-6, step1) <= 1e-6,
             s.label + " M2 step 1: " + fmt(*s.m2[0].step1_i0 * 1e-6, 12) +
                 " vs " + fmt(step1, 12));
    // Regret is a difference of totals; compare on the scale of the totals.
    const double x = static_cast<double>(o.regret(best_mio));
    const double scale = std::max(1.0, static_cast<double>(best_mio[0]));
    c.expect(std::abs(s.regret.objective * 1e-6 - x) <= 1e-6 * scale,
             s.label + " regret: " + fmt(s.regret.objective * 1e-6, 12) +
                 " vs " + fmt(x, 12));
    solved.push_back(std::move(s));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 600.0, "runtime " + fmt(secs) + " s");
  c.note("25 instances, " + fmt(secs, 3) + " s");
  return solved;
}

// 4. Ordering properties of the solved instances.
void ordering(Check& c, const std::vector<Solved>& solved) {
  for (const Solved& s : solved) {
    const int n = static_cast<int>(s.m1.size());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::string& id = s.in.scenarios.scenarios[i].id;
      const double z1 = s.m1[i].objective;
      const double tol = 1e-6 * z1;
      const ScenarioResult* r = s.regret.find(id);
      c.expect(r != nullptr, s.label + ": regret plan lacks " + id);
      if (!r) continue;
      c.expect(z1 <= r->cost.total + tol, s.label + " " + id + ": z_M1 > z_R");
      c.expect(z1 <= s.m2[i].objective + tol, s.label + " " + id + ": z_M1 > z_M2");
      worst = std::max(worst, r->cost.total - z1);
    }
    const double x = s.regret.objective;
    c.expect(x >= -1e-6, s.label + ": negative regret " + fmt(x));
    const double gap_tol = std::max(1e-6 * s.m1[0].objective,
                                    s.regret.gap * std::abs(x));
    c.expect(std::abs(x - worst) <= gap_tol,
             s.label + ": x " + fmt(x, 12) + " vs max regret " + fmt(worst, 12));
    if (s.same_first) {
      c.expect(rel(s.m1[0].objective, s.m2[0].objective) <= 1e-6,
               s.label + ": repeated scenario gives z_M1 != z_M2");
    }
  }
  c.note(std::to_string(solved.size()) + " instances");
}

// 5. Published totals reproduce the published differences.
void published_arithmetic(Check& c) {
  const RegretReport rep = regret_report(fixtures::published_totals());
  const auto refs = fixtures::published_differences();
  const double tol = fixtures::kTableTolerance;
  for (const ReferenceRow& ref : refs) {
    const RegretRow* row = nullptr;
    for (const RegretRow& r : rep.rows) {
      if (r.scenario == ref.scenario) row = &r;
    }
    c.expect(row != nullptr, "missing row " + ref.scenario);
    if (!row) continue;
    if (ref.scenario != "S4") {
      c.expect(std::abs(row->potential - *ref.potential) <= tol,
               ref.scenario + " potential " + fmt(row->potential, 9));
    }
    c.expect(std::abs(row->regret - *ref.regret) <= tol,
             ref.scenario + " regret " + fmt(row->regret, 9));
    c.expect(std::abs(row->benefit - *ref.benefit) <= tol,
             ref.scenario + " benefit " + fmt(row->benefit, 9));
  }
  const auto diff = compare_with_reference(rep, refs, tol);
  c.expect(diff.size() == 1 && diff[0].scenario == "S4" &&
               diff[0].field == "potential",
           "expected exactly the S4 potential to be flagged");
  if (!diff.empty()) {
    c.note("flagged " + diff[0].scenario + " " + diff[0].field + ": " +
           fmt(round_report(diff[0].computed), 9) + " vs " +
           fmt(diff[0].reference, 9));
  }
}

// 6. Proration, discounting and the O&M overlap switch.
void economics(Check& c) {
  HorizonParams h;
  c.expect(std::abs(h.proration() - 0.8) <= 1e-15, "proration " + fmt(h.proration()));
  const double base = 1.7e8;
  for (auto [from, to] : {std::pair{1, 5}, std::pair{5, 25}, std::pair{6, 25}}) {
    double hand = 0.0;
    double f = 1.0;
    for (int n = 1; n <= to; ++n) {
      f /= 1.0 + h.tau;
      if (n >= from) hand += h.om * base * f;
    }
    const double got = om_discounted(base, h.om, h.tau, from, to);
    c.expect(std::abs(got - hand) <= 1e-9 * hand,
             "om_discounted(" + std::to_string(from) + ", " + std::to_string(to) +
                 ") = " + fmt(got, 15) + " vs " + fmt(hand, 15));
  }
  // The switch drops year n1 from the period-1 O&M sum, nothing else.
  const double i0 = 3.1e8;
  const double i1 = 0.9e8;
  const double r = 0.2e8;
  const CostBreakdown with = make_breakdown(i0, i1, r, h);
  HorizonParams h2 = h;
  h2.om_no_overlap = true;
  const CostBreakdown without = make_breakdown(i0, i1, r, h2);
  const double one_year = h.om * (i0 + i1 + r) / std::pow(1.0 + h.tau, h.n1);
  c.expect(std::abs((with.total - without.total) - one_year) <= 1e-9 * one_year,
           "overlap switch changes total by " + fmt(with.total - without.total, 12) +
               " vs " + fmt(one_year, 12));
  // Same check on a solved plan.
  const auto tc = toy::make_toy(77, toy::Shape::kChain, 1);
  const PlanSolution plan = solve_m1(tc.input, 0, {});
  PlanningInput in2 = tc.input;
  in2.horizon.om_no_overlap = true;
  const CostBreakdown a =
      recompute_breakdown(tc.input, plan.first, plan.scenarios[0].decision);
  const CostBreakdown b = recompute_breakdown(in2, plan.first, plan.scenarios[0].decision);
  const double year = h.om * (a.i0 + a.i1 + a.r) / std::pow(1.0 + h.tau, h.n1);
  c.expect(std::abs((a.total - b.total) - year) <= 1e-9 * a.total,
           "plan totals differ by " + fmt(a.total - b.total, 12));
}

// 7. Native indicators and big-M linearisation agree.
void indicator_vs_bigm(Check& c) {
  SolverConfig native;
  SolverConfig bigm;
  bigm.backend = "builtin-bigm";
  for (int k = 0; k < 10; ++k) {
    const auto tc = toy::make_toy(500 + k, shape_of(k), 1 + k % 2);
    for (int s = 0; s < static_cast<int>(tc.input.scenarios.scenarios.size()); ++s) {
      const double a = solve_m1(tc.input, s, native).objective;
      const double b = solve_m1(tc.input, s, bigm).objective;
      c.expect(rel(a, b) <= 1e-6,
               tc.label + " M1: " + fmt(a, 12) + " vs " + fmt(b, 12));
    }
    if (tc.input.scenarios.scenarios.size() > 1) {
      std::map<std::string, double> best;
      for (const PlanSolution& p : best_solutions(tc.input, native)) {
        best[p.scenarios[0].scenario] = p.objective;
      }
      const double a = solve_min_max_regret(tc.input, best, native).objective;
      const double b = solve_min_max_regret(tc.input, best, bigm).objective;
      c.expect(std::abs(a - b) <= 1e-6 * std::max(1.0, best.begin()->second),
               tc.label + " regret: " + fmt(a, 12) + " vs " + fmt(b, 12));
    }
  }
  c.note("10 instances");
}

// Arc lengths along a route, split at the graph's nodes.
double contracted_length(const CandidateGraph& g, const RasterMap& r,
                         const RouteResult& route, bool& missing) {
  std::map<int, int> node_at;
  for (int i = 0; i < g.num_nodes(); ++i) node_at[r.index(g.nodes[i].cell)] = i;
  double sum = 0.0;
  int last = -1;
  for (const Cell& cell : route.cells) {
    auto it = node_at.find(r.index(cell));
    if (it == node_at.end()) continue;
    if (last >= 0) {
      const int a = g.find_arc(last, it->second);
      if (a < 0) {
        missing = true;
      } else {
        sum += g.arcs[a].length_km;
      }
    }
    last = it->second;
  }
  return sum;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PIPEPLAN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 8. Contraction, scenario coverage and deterministic routing output.
void graph_pipeline(Check& c) {
  std::mt19937 g(8);
  for (int trial = 0; trial < 6; ++trial) {
    GridSpec spec;
    spec.width = 20 + static_cast<int>(g() % 15);
    spec.height = 20 + static_cast<int>(g() % 15);
    spec.cell_size = 1.5;
    std::vector<double> mult(spec.width * spec.height);
    for (double& m : mult) m = 1.0 + (g() % 4 == 0 ? 2.0 : 0.0);
    RasterMap r(spec, mult);
    // Terminals of three scenarios: a shared core and per-scenario extras.
    std::vector<TerminalSpec> terminals;
    std::set<int> used;
    const int count = 5 + static_cast<int>(g() % 3);
    while (static_cast<int>(terminals.size()) < count) {
      const Cell cell{static_cast<int>(g() % spec.height),
                      static_cast<int>(g() % spec.width)};
      if (!used.insert(r.index(cell)).second) continue;
      const NodeKind kind = terminals.empty() ? NodeKind::kSink : NodeKind::kEmitter;
      terminals.push_back({"n" + std::to_string(terminals.size()), kind, r.center(cell)});
    }
    const GraphBuild build = build_candidate_graph(r, terminals);
    bool missing = false;
    for (const RouteResult& route : build.routes) {
      const double got = contracted_length(build.graph, r, route, missing);
      c.expect(std::abs(got - route.length_km) <= 1e-9 * route.length_km,
               "trial " + std::to_string(trial) + ": contracted " + fmt(got, 15) +
                   " vs route " + fmt(route.length_km, 15));
    }
    c.expect(!missing, "trial " + std::to_string(trial) + ": route leaves the graph");

    nlohmann::json doc;
    doc["initial"] = "S1";
    doc["period0"] = {{"n0", -50.0}, {"n1", 2.0}, {"n2", 1.0}};
    doc["scenarios"] = nlohmann::json::array();
    for (int s = 0; s < 3; ++s) {
      nlohmann::json p1 = {{"n0", -50.0}, {"n1", 2.0}};
      for (int i = 2 + s; i < count; i += 2) p1["n" + std::to_string(i)] = 1.0;
      doc["scenarios"].push_back({{"id", "S" + std::to_string(s + 1)}, {"period1", p1}});
    }
    const ScenarioSet set = load_scenarios(doc, build.graph);
    for (const Scenario& s : set.scenarios) {
      for (const auto& [id, v] : s.period1_input) {
        c.expect(build.graph.find_node(id) >= 0, "node " + id + " missing");
      }
    }
    const std::string once = graph_to_json(build.graph, spec).dump();
    const std::string twice =
        graph_to_json(build_candidate_graph(r, terminals).graph, spec).dump();
    const std::string serial =
        graph_to_json(build_candidate_graph(r, terminals, false).graph, spec).dump();
    c.expect(once == twice && once == serial,
             "trial " + std::to_string(trial) + ": graph output not reproducible");
  }

  // The command-line route step writes identical files on a rerun.
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pipeplan_acceptance_route";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const nlohmann::json cfg = nlohmann::json::parse(R"({
    "output_dir": "out",
    "grid": {"width": 14, "height": 10, "cell_size": 1.5},
    "blocked": [[4, 6], [5, 6], [6, 6]],
    "nodes": [{"id": "A", "kind": "emitter", "cell": [1, 1]},
              {"id": "B", "kind": "emitter", "cell": [8, 2]},
              {"id": "C", "kind": "emitter", "cell": [2, 12]},
              {"id": "T", "kind": "sink", "cell": [8, 12]}],
    "scenarios": {"initial": "S1",
                  "period0": {"A": 1.0, "B": 1.0, "T": -9.0},
                  "scenarios": [{"id": "S1",
                                 "period1": {"A": 1.0, "C": 1.0, "T": -9.0}}]}
  })");
  std::ofstream(dir / "run.json") << cfg.dump(1);
  const std::string run = "route -q -c " + (dir / "run.json").string();
  std::string first_graph;
  std::string first_raster;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(dir / "out");
    c.expect(run_cli(run) == 0, "route command failed");
    const std::string graph = slurp(dir / "out/graph.json");
    const std::string raster = slurp(dir / "out/raster.txt");
    if (pass == 0) {
      first_graph = graph;
      first_raster = raster;
      c.expect(!graph.empty(), "route wrote no graph");
    } else {
      c.expect(graph == first_graph && raster == first_raster,
               "route rerun is not byte-identical");
    }
  }
  fs::remove_all(dir);
  c.note("6 rasters, CLI rerun compared");
}

// 9. Continuity sizing and the cost composition.
void hydraulics(Check& c) {
  const HydraulicParams h{900.0, 3.0};
  const double d = diameter_from_flow(2120.575, h);
  c.expect(std::abs(d - 1.0) <= 1e-3, "D(2120.575 kg/s) = " + fmt(d, 9));
  c.note("D(2120.575 kg/s) = " + fmt(d, 9) + " m");
  const CostParams cp;
  std::mt19937 g(9);
  for (int i = 0; i < 100; ++i) {
    const double q = 40.0 * (static_cast<double>(g()) / 4294967296.0);
    const double composed =
        1000.0 * cost_per_meter_from_diameter(
                     diameter_from_flow(mt_per_year_to_kg_per_s(q), h), cp);
    const double direct = unit_cost_from_flow(q, h, cp);
    c.expect(std::abs(composed - direct) <= 1e-9 * composed,
             "composition at " + fmt(q) + ": " + fmt(direct, 15) + " vs " +
                 fmt(composed, 15));
  }
}

}  // namespace

int main() {
  struct Item {
    int number;
    std::string title;
    std::function<void(Check&)> run;
  };
  std::vector<Solved> solved;
  const std::vector<Item> items = {
      {1, "routing matches exhaustive path enumeration", routing_oracle},
      {2, "trend fit within tolerance, chords below curve", trend_soundness},
      {3, "M1, M2 step 1 and regret match enumeration",
       [&](Check& c) { solved = milp_oracle(c); }},
      {4, "ordering properties", [&](Check& c) { ordering(c, solved); }},
      {5, "published table arithmetic", published_arithmetic},
      {6, "economics", economics},
      {7, "indicator and big-M formulations agree", indicator_vs_bigm},
      {8, "graph pipeline", graph_pipeline},
      {9, "hydraulics", hydraulics},
  };
  int failed = 0;
  for (const Item& item : items) {
    Check c(std::to_string(item.number));
    try {
      item.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::string notes;
    for (const std::string& n : c.notes()) notes += (notes.empty() ? "" : "; ") + n;
    std::cout << (c.ok() ? "PASS" : "FAIL") << "  " << item.number << ". "
              << item.title;
    if (!c.ok()) std::cout << " (" << c.failures() << " failed checks)";
    if (!notes.empty()) std::cout << "  [" << notes << "]";
    std::cout << std::endl;
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
