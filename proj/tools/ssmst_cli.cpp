// Command-line front end: reproducible simulation runs, the classical MST
// oracle, configuration verification, and convergence benchmarks.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ssmst/engine.hpp"
#include "ssmst/oracles.hpp"

using json = nlohmann::json;
using namespace ssmst;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;

struct GraphSource {
  std::string graph_path;
  std::string gen_spec;  // MODEL:N[:P]
  std::uint64_t seed = 0;
  Weight w_lo = 1, w_hi = 100;
};

GraphPtr open_graph(const GraphSource& src) {
  if (!src.graph_path.empty()) return load_graph_file(src.graph_path);
  if (src.gen_spec.empty()) throw GraphError("one of --graph/--gen is required");
  std::istringstream ss(src.gen_spec);
  std::string model, rest;
  std::getline(ss, model, ':');
  GenSpec spec;
  spec.w_lo = src.w_lo;
  spec.w_hi = src.w_hi;
  if (model == "path")
    spec.model = GraphModel::Path;
  else if (model == "cycle")
    spec.model = GraphModel::Cycle;
  else if (model == "complete")
    spec.model = GraphModel::Complete;
  else if (model == "random")
    spec.model = GraphModel::Random;
  else
    throw GraphError("unknown model " + model + " (path|cycle|complete|random)");
  if (!std::getline(ss, rest, ':')) throw GraphError("--gen needs MODEL:N[:P]");
  spec.n = std::stoull(rest);
  if (std::getline(ss, rest, ':')) spec.p = std::stod(rest);
  return generate_graph(spec, src.seed);
}

Configuration open_init(GraphPtr g, const std::string& init) {
  if (init == "singleton") return singleton_configuration(std::move(g));
  if (init.rfind("arbitrary", 0) == 0) {
    std::uint64_t seed = 0;
    auto colon = init.find(':');
    if (colon != std::string::npos) seed = std::stoull(init.substr(colon + 1));
    return arbitrary_configuration(std::move(g), seed);
  }
  throw GraphError("unknown init mode " + init + " (singleton|arbitrary:SEED)");
}

const char* verdict_name(MstVerdict v) {
  switch (v) {
    case MstVerdict::Legitimate: return "LEGITIMATE";
    case MstVerdict::NotSpanning: return "NOT_SPANNING";
    case MstVerdict::NotTree: return "NOT_TREE";
    case MstVerdict::NotMinimal: return "NOT_MINIMAL";
  }
  return "?";
}

// one JSON object per finished round
class TraceWriter : public RunObserver {
public:
  explicit TraceWriter(const std::string& path) : out_(path) {
    if (!out_) throw GraphError("cannot open trace file " + path);
  }
  void on_round(std::uint64_t round, const Configuration& c,
                const std::vector<std::pair<NodeId, RuleId>>& fired) override {
    json rec;
    rec["round"] = round;
    json fl = json::array();
    for (const auto& [id, rule] : fired) fl.push_back({id, rule_name(rule)});
    rec["fired"] = fl;
    auto f = phi(c);
    auto l = lambda(c);
    rec["phi"] = f.defined ? json(f.value.to_string()) : json(nullptr);
    rec["lambda"] = l.defined ? json(l.value.to_string()) : json(nullptr);
    auto forest = parent_forest(c);
    rec["fragments"] = forest.fragments.size();
    auto mst = check_mst(c);
    if (mst.verdict == MstVerdict::Legitimate || mst.verdict == MstVerdict::NotMinimal)
      rec["mst_gap"] = mst.tree_weight - mst.oracle_weight;
    else
      rec["mst_gap"] = nullptr;
    out_ << rec.dump() << '\n';
    out_.flush();
  }

private:
  std::ofstream out_;
};

std::uint64_t max_label_bits(const Configuration& c) {
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    best = std::max(best, label_bits(c.at_index(i).ell));
  return best;
}

std::uint64_t max_in_bits(const Configuration& c) {
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& in = c.at_index(i).in_sel;
    if (in)
      best = std::max(best, bit_length(in->w) + label_bits(in->label_a) + label_bits(in->label_b));
  }
  return best;
}

int cmd_run(const GraphSource& src, const std::string& init, const std::string& daemon,
            std::uint64_t max_rounds, std::uint64_t confirm, const std::string& trace_path,
            const std::string& format) {
  GraphPtr g = open_graph(src);
  Configuration start = open_init(g, init);
  RunConfig cfg;
  cfg.policy = parse_policy(daemon);
  cfg.max_rounds = max_rounds ? max_rounds : 40 * g->node_count() * g->node_count() + 100;
  cfg.confirm_window = confirm;

  std::unique_ptr<TraceWriter> tracer;
  if (!trace_path.empty()) tracer = std::make_unique<TraceWriter>(trace_path);

  // effective-config header so every run is reproducible from its output
  json header;
  header["graph"] = src.graph_path.empty() ? src.gen_spec : src.graph_path;
  header["gen_seed"] = src.seed;
  header["init"] = init;
  header["daemon"] = daemon;
  header["max_rounds"] = cfg.max_rounds;
  header["confirm"] = cfg.confirm_window ? cfg.confirm_window : 2 * g->node_count();

  RunResult res = run(std::move(start), cfg, tracer.get());
  MstCheck mst = check_mst(res.final_config);

  json report;
  report["config"] = header;
  report["stabilized"] = res.stabilized;
  report["rounds"] = res.rounds;
  report["moves"] = res.moves;
  report["verdict"] = verdict_name(mst.verdict);
  report["tree_weight"] = mst.tree_weight;
  report["oracle_weight"] = mst.oracle_weight;
  report["max_label_bits"] = max_label_bits(res.final_config);

  if (format == "json") {
    std::cout << report.dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << "stabilized,rounds,moves,verdict,tree_weight,oracle_weight,max_label_bits\n"
              << res.stabilized << ',' << res.rounds << ',' << res.moves << ','
              << verdict_name(mst.verdict) << ',' << mst.tree_weight << ',' << mst.oracle_weight
              << ',' << max_label_bits(res.final_config) << '\n';
  } else {
    std::cout << "run: " << header.dump() << '\n'
              << "stabilized: " << (res.stabilized ? "yes" : "no") << '\n'
              << "rounds: " << res.rounds << "  moves: " << res.moves << '\n'
              << "verdict: " << verdict_name(mst.verdict) << "  tree weight " << mst.tree_weight
              << " vs oracle " << mst.oracle_weight << '\n'
              << "max label bits: " << max_label_bits(res.final_config) << '\n';
  }
  if (!res.stabilized) return kExitNoConvergence;
  return mst.verdict == MstVerdict::Legitimate ? kExitOk : kExitNoConvergence;
}

int cmd_oracle(const GraphSource& src) {
  GraphPtr g = open_graph(src);
  MstResult mst = kruskal_mst(*g);
  std::cout << "weight " << mst.total << '\n';
  for (const auto& e : mst.edges) std::cout << e.u << ' ' << e.v << ' ' << e.w << '\n';
  return kExitOk;
}

int cmd_verify(const GraphSource& src, const std::string& state_path) {
  GraphPtr g = open_graph(src);
  std::ifstream in(state_path);
  if (!in) throw GraphError("cannot open " + state_path);
  Configuration c = deserialize_configuration(g, in);
  MstCheck mst = check_mst(c);
  std::cout << "verdict " << verdict_name(mst.verdict);
  if (mst.verdict == MstVerdict::NotMinimal) std::cout << " gap " << mst.gap;
  std::cout << '\n';
  for (NodeId v : g->node_ids()) {
    auto verdict = predicates(c, v);
    bool dist = guard_distance(c, v);
    if (dist && verdict.sizec && verdict.label_ok) continue;
    std::cout << "node " << v << " failing:";
    if (!dist) std::cout << " Distance";
    if (!verdict.sizec) std::cout << " SizeC";
    if (!verdict.label_ok) std::cout << " Label";
    std::cout << '\n';
  }
  auto f = phi(c);
  auto l = lambda(c);
  std::cout << "phi " << (f.defined ? f.value.to_string() : "undefined(cycle)") << '\n';
  std::cout << "lambda " << (l.defined ? l.value.to_string() : "undefined(cycle)") << '\n';
  return mst.verdict == MstVerdict::Legitimate ? kExitOk : kExitNoConvergence;
}

int cmd_bench(const std::string& sizes_csv, std::uint64_t trials, const std::string& daemon,
              std::uint64_t base_seed) {
  std::vector<std::size_t> sizes;
  std::istringstream ss(sizes_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) sizes.push_back(std::stoull(tok));

  std::cout << "n,trial,rounds,moves,stabilized,max_label_bits,max_in_bits\n";
  for (std::size_t n : sizes) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::uint64_t seed = base_seed + 1000003 * n + t;
      GenSpec spec;
      spec.model = GraphModel::Random;
      spec.n = n;
      spec.p = std::min(1.0, 4.0 / static_cast<double>(n));
      GraphPtr g = generate_graph(spec, seed);
      Configuration start = arbitrary_configuration(g, seed ^ 0x9e3779b97f4a7c15ULL);
      RunConfig cfg;
      cfg.policy = parse_policy(daemon);
      cfg.max_rounds = 60 * n * n + 200;

      // track the label/in-register footprint over the whole run
      struct BitsTracker : RunObserver {
        std::uint64_t lbits = 0, ibits = 0;
        void on_round(std::uint64_t, const Configuration& c,
                      const std::vector<std::pair<NodeId, RuleId>>&) override {
          lbits = std::max(lbits, max_label_bits(c));
          ibits = std::max(ibits, max_in_bits(c));
        }
      } tracker;

      RunResult res = run(std::move(start), cfg, &tracker);
      std::cout << n << ',' << t << ',' << res.rounds << ',' << res.moves << ','
                << res.stabilized << ',' << tracker.lbits << ',' << tracker.ibits << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"round-based simulator for a self-stabilizing MST protocol"};
  app.require_subcommand(1);

  GraphSource src;
  std::string init = "singleton", daemon = "sync", trace_path, format = "human";
  std::uint64_t max_rounds = 0, confirm = 0;

  auto add_graph_flags = [&](CLI::App* cmd) {
    cmd->add_option("--graph", src.graph_path, "edge-list file");
    cmd->add_option("--gen", src.gen_spec, "MODEL:N[:P] with MODEL path|cycle|complete|random");
    cmd->add_option("--seed", src.seed, "generator seed");
    cmd->add_option("--wmin", src.w_lo, "minimum edge weight");
    cmd->add_option("--wmax", src.w_hi, "maximum edge weight");
  };

  auto* runc = app.add_subcommand("run", "simulate until stabilization");
  add_graph_flags(runc);
  runc->add_option("--init", init, "singleton | arbitrary:SEED");
  runc->add_option("--daemon", daemon, "sync | rr | random:SEED");
  runc->add_option("--max-rounds", max_rounds, "round budget (default 40n^2+100)");
  runc->add_option("--confirm", confirm, "confirmation window in rounds (default 2n)");
  runc->add_option("--trace", trace_path, "JSON-lines trace output path");
  runc->add_option("--format", format, "json | csv | human");

  auto* oraclec = app.add_subcommand("oracle", "print the reference MST");
  add_graph_flags(oraclec);

  std::string state_path;
  auto* verifyc = app.add_subcommand("verify", "check a serialized configuration");
  add_graph_flags(verifyc);
  verifyc->add_option("--state", state_path, "configuration file")->required();

  std::string sizes = "8,16,32";
  std::uint64_t trials = 20, bench_seed = 1;
  auto* benchc = app.add_subcommand("bench", "convergence scaling table (CSV)");
  benchc->add_option("--sizes", sizes, "comma-separated node counts");
  benchc->add_option("--trials", trials, "trials per size");
  benchc->add_option("--daemon", daemon, "sync | rr | random:SEED");
  benchc->add_option("--seed", bench_seed, "base seed");

  try {
    app.parse(argc, argv);
    if (runc->parsed()) return cmd_run(src, init, daemon, max_rounds, confirm, trace_path, format);
    if (oraclec->parsed()) return cmd_oracle(src);
    if (verifyc->parsed()) return cmd_verify(src, state_path);
    if (benchc->parsed()) return cmd_bench(sizes, trials, daemon, bench_seed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
