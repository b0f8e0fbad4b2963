#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlnc/rlnc.hpp"

namespace rlnc::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string network_file;
  std::string gen_spec;
  std::string sink;
  int rate = 0;
  std::uint32_t field = 2;
  std::vector<std::uint32_t> fields;
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;
  std::string format;  // empty: text, or csv for sweep
  std::string rt = "exact";
  std::string order = "canonical";
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::uint64_t rt_budget = kDefaultRtBudget;
  int workers = 1;
};

// "plait:w=2,r=3", "butterfly", "random:internal=5,w=2,density=0.4,seed=7".
Network network_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, std::string> params;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("bad generator parameter '" + item + "'");
      params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  auto take = [&](const std::string& key, const std::string& fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  Network net;
  try {
    if (kind == "plait") {
      const int w = std::stoi(take("w", "1"));
      const int r = std::stoi(take("r", "0"));
      if (w < 1 || r < 0) throw UsageError("plait requires w >= 1 and r >= 0");
      net = plait(w, r);
    } else if (kind == "butterfly") {
      net = butterfly();
    } else if (kind == "random") {
      const int internal = std::stoi(take("internal", "4"));
      const int w = std::stoi(take("w", "2"));
      const double density = std::stod(take("density", "0.5"));
      const std::uint64_t seed = std::stoull(take("seed", "1"));
      if (internal < 0 || w < 1 || !(density > 0.0 && density <= 1.0))
        throw UsageError("random requires internal >= 0, w >= 1, density in (0, 1]");
      net = random_dag(internal, w, density, seed);
    } else {
      throw UsageError("unknown generator '" + kind + "'");
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad generator spec '" + spec + "'");
  }
  if (!params.empty())
    throw UsageError("unknown generator parameter '" + params.begin()->first + "'");
  return net;
}

struct Loaded {
  Network net;
  std::string label;
  NodeIndex sink = kNone;
  int rate = 0;
};

Loaded load(const RunConfig& cfg) {
  Loaded l;
  if (!cfg.network_file.empty()) {
    l.net = read_network_file(cfg.network_file);
    l.label = cfg.network_file;
  } else if (!cfg.gen_spec.empty()) {
    l.net = network_from_spec(cfg.gen_spec);
    l.label = cfg.gen_spec;
  } else {
    throw UsageError("one of --network or --gen is required");
  }
  if (cfg.sink.empty()) {
    l.sink = l.net.sinks().front();
  } else {
    auto found = l.net.find_node(cfg.sink);
    if (!found || l.net.node(*found).role != NodeRole::Sink)
      throw UsageError("'" + cfg.sink + "' is not a sink of the network");
    l.sink = *found;
  }
  if (cfg.rate > 0) {
    l.rate = cfg.rate;
  } else if (l.net.rate_hint()) {
    l.rate = *l.net.rate_hint();
  } else {
    l.rate = min_cut(l.net, l.sink);
    if (l.rate < 1) throw InfeasibleRate(1, 0);
  }
  return l;
}

FieldPtr field_of(std::uint32_t q) {
  try {
    return Field::from_order(q);
  } catch (const std::invalid_argument& e) {
    throw UsageError("--field " + std::to_string(q) + ": " + e.what());
  }
}

ReportOptions report_options(const RunConfig& cfg) {
  ReportOptions o;
  o.rt_mode = cfg.rt == "heuristic" ? RtMode::Heuristic : RtMode::Exact;
  o.order = cfg.order == "minimize" ? CutOrder::Minimize : CutOrder::Canonical;
  o.rt_budget = cfg.rt_budget;
  return o;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fmt_rational(const Rational& x) {
  return to_fraction_string(x) + " (" + to_decimal_string(x, 10) + ")";
}

Json json_rational(const Rational& x) {
  return Json{{"num", numerator_of(x).str()}, {"den", denominator_of(x).str()}};
}

// One row of results; absent parts stay empty.
struct Row {
  std::string label;
  const Network* net = nullptr;
  NodeIndex sink = kNone;
  std::uint32_t q = 0;
  int w = 0;
  int min_cut = 0;
  std::optional<BoundReport> bounds;
  std::optional<FailureEstimate> estimate;
  std::optional<ExactProbability> exact;
};

Json row_json(const Row& row) {
  Json j;
  j["network"] = row.label;
  j["sink"] = row.net->node(row.sink).id;
  j["q"] = row.q;
  j["w"] = row.w;
  j["C_t"] = row.min_cut;
  if (row.bounds) {
    const auto& b = *row.bounds;
    j["r"] = b.r;
    j["R_t"] = b.min_internal;
    j["J"] = b.num_internal;
    j["bounds"] = Json{{"thm1", json_rational(b.thm1)},
                       {"thm2", json_rational(b.thm2)},
                       {"cor1", json_rational(b.cor1)},
                       {"thm3", json_rational(b.thm3)},
                       {"lower", json_rational(b.thm4_lower)}};
  } else {
    j["r"] = nullptr;
    j["R_t"] = nullptr;
    j["J"] = static_cast<int>(row.net->internal_nodes().size());
    j["bounds"] = nullptr;
  }
  if (row.estimate) {
    const auto& e = *row.estimate;
    j["estimate"] = Json{{"trials", e.trials},   {"failures", e.failures},
                         {"p_hat", e.p_hat},     {"ci_low", e.ci_low},
                         {"ci_high", e.ci_high}, {"confidence", 0.99},
                         {"seed", e.seed}};
  }
  if (row.exact) {
    const auto& x = *row.exact;
    Json v = json_rational(x.value);
    v["slots"] = x.slots;
    v["assignments"] = x.assignments.str();
    v["failing"] = x.failing.str();
    j["exact"] = v;
  }
  return j;
}

const char* kCsvHeader =
    "network,sink,q,w,C_t,r,R_t,J,thm1,thm1_value,thm2,thm2_value,cor1,cor1_value,"
    "thm3,thm3_value,lower,lower_value,exact,exact_value,trials,failures,p_hat,"
    "ci_low,ci_high";

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string row_csv(const Row& row) {
  std::ostringstream os;
  os << csv_field(row.label) << "," << row.net->node(row.sink).id << "," << row.q << "," << row.w << ","
     << row.min_cut << ",";
  auto rat = [&](const Rational& x) {
    os << to_fraction_string(x) << "," << to_decimal_string(x, 10) << ",";
  };
  if (row.bounds) {
    const auto& b = *row.bounds;
    os << b.r << "," << b.min_internal << "," << b.num_internal << ",";
    rat(b.thm1);
    rat(b.thm2);
    rat(b.cor1);
    rat(b.thm3);
    rat(b.thm4_lower);
  } else {
    os << ",," << row.net->internal_nodes().size() << ",,,,,,,,,,,";
  }
  if (row.exact) rat(row.exact->value);
  else os << ",,";
  if (row.estimate) {
    const auto& e = *row.estimate;
    os << e.trials << "," << e.failures << "," << fmt_double(e.p_hat) << ","
       << fmt_double(e.ci_low) << "," << fmt_double(e.ci_high);
  } else {
    os << ",,,,";
  }
  return os.str();
}

void print_text(const Row& row, std::ostream& out) {
  out << "network: " << row.label << "\n";
  out << "sink: " << row.net->node(row.sink).id << "\n";
  out << "q: " << row.q << "\n";
  out << "w: " << row.w << "\n";
  out << "C_t: " << row.min_cut << "\n";
  if (row.bounds) {
    const auto& b = *row.bounds;
    const auto& net = *row.net;
    out << "delta_t: " << b.delta << "\n";
    out << "r: " << b.r << "\n";
    out << "R_t: " << b.min_internal
        << (b.rt_exact ? " (exact)" : b.rt_fell_back ? " (heuristic, search budget exhausted)"
                                                     : " (heuristic upper bound)")
        << "\n";
    out << "J: " << b.num_internal << "\n";
    out << "paths:\n";
    for (const auto& path : b.paths.paths) {
      out << "  " << net.node(net.source()).id;
      for (ChannelIndex c : path)
        out << " -" << net.channel(c).id << "-> " << net.node(net.channel(c).head).id;
      out << "\n";
    }
    out << "cut_order:";
    for (NodeIndex v : b.cut_order) out << " " << net.node(v).id;
    out << (b.order_minimized ? " (minimized)" : "") << "\n";
    out << "cut_out_sizes:";
    for (int s : b.cut_out_sizes) out << " " << s;
    out << "\n";
    out << "thm1: " << fmt_rational(b.thm1) << "\n";
    out << "thm2: " << fmt_rational(b.thm2) << "\n";
    out << "cor1: " << fmt_rational(b.cor1) << "\n";
    out << "thm3: " << fmt_rational(b.thm3) << "\n";
    out << "lower: " << fmt_rational(b.thm4_lower) << "\n";
  }
  if (row.exact) {
    const auto& x = *row.exact;
    out << "exact: " << fmt_rational(x.value) << "\n";
    out << "slots: " << x.slots << "\n";
    out << "failing: " << x.failing.str() << " of " << x.assignments.str() << "\n";
  }
  if (row.estimate) {
    const auto& e = *row.estimate;
    out << "trials: " << e.trials << "\n";
    out << "failures: " << e.failures << "\n";
    out << "p_hat: " << fmt_double(e.p_hat) << "\n";
    out << "ci99: [" << fmt_double(e.ci_low) << ", " << fmt_double(e.ci_high) << "]\n";
    out << "seed: " << e.seed << "\n";
  }
}

void emit(const std::vector<Row>& rows, const std::string& format, bool as_list,
          std::ostream& out) {
  if (format == "json") {
    if (as_list) {
      Json arr = Json::array();
      for (const auto& r : rows) arr.push_back(row_json(r));
      out << arr.dump(2) << "\n";
    } else {
      out << row_json(rows.front()).dump(2) << "\n";
    }
  } else if (format == "csv") {
    out << kCsvHeader << "\n";
    for (const auto& r : rows) out << row_csv(r) << "\n";
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << "\n";
      print_text(rows[i], out);
    }
  }
}

Row base_row(const Loaded& l, std::uint32_t q) {
  Row row;
  row.label = l.label;
  row.net = &l.net;
  row.sink = l.sink;
  row.q = q;
  row.w = l.rate;
  row.min_cut = min_cut(l.net, l.sink);
  return row;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto field = field_of(cfg.field);
  const Loaded l = load(cfg);
  Row row = base_row(l, field->order());
  row.bounds = full_report(l.net, l.sink, l.rate, field->order(), report_options(cfg));
  emit({row}, cfg.format, false, out);
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.seed) throw UsageError("simulate requires --seed");
  const auto field = field_of(cfg.field);
  const Loaded l = load(cfg);
  Row row = base_row(l, field->order());
  if (l.rate <= row.min_cut)
    row.bounds = full_report(l.net, l.sink, l.rate, field->order(), report_options(cfg));
  row.estimate = estimate_failure(l.net, l.rate, field, l.sink, cfg.trials, *cfg.seed,
                                  cfg.workers);
  emit({row}, cfg.format, false, out);
  return kOk;
}

int cmd_exact(const RunConfig& cfg, std::ostream& out) {
  const auto field = field_of(cfg.field);
  const Loaded l = load(cfg);
  Row row = base_row(l, field->order());
  row.exact = exact_failure(l.net, l.rate, field, l.sink, cfg.budget, cfg.workers);
  if (l.rate <= row.min_cut)
    row.bounds = full_report(l.net, l.sink, l.rate, field->order(), report_options(cfg));
  emit({row}, cfg.format, false, out);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, bool with_estimate, std::ostream& out, std::ostream& err) {
  if (cfg.fields.empty()) throw UsageError("--fields needs at least one field order");
  if (with_estimate && !cfg.seed) throw UsageError("sweep with --trials requires --seed");
  std::vector<FieldPtr> fields;
  for (auto q : cfg.fields) fields.push_back(field_of(q));
  const Loaded l = load(cfg);
  std::vector<Row> rows;
  for (const auto& field : fields) {
    Row row = base_row(l, field->order());
    row.bounds = full_report(l.net, l.sink, l.rate, field->order(), report_options(cfg));
    try {
      row.exact = exact_failure(l.net, l.rate, field, l.sink, cfg.budget, cfg.workers);
    } catch (const BudgetExceeded& e) {
      err << "q=" << field->order() << ": exact value skipped: " << e.what() << "\n";
    }
    if (with_estimate)
      row.estimate = estimate_failure(l.net, l.rate, field, l.sink, cfg.trials, *cfg.seed,
                                      cfg.workers);
    rows.push_back(std::move(row));
  }
  emit(rows, cfg.format, true, out);
  return kOk;
}

struct GenConfig {
  std::string kind;
  int w = 2;
  int r = 1;
  int internal = 4;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string out_path;
};

int cmd_gen(const GenConfig& g, std::ostream& out, std::ostream& err) {
  Network net;
  if (g.kind == "plait") {
    if (g.w < 1 || g.r < 0) throw UsageError("plait requires --w >= 1 and --r >= 0");
    net = plait(g.w, g.r);
  } else if (g.kind == "butterfly") {
    net = butterfly();
  } else {
    if (g.internal < 0 || g.w < 1 || !(g.density > 0.0 && g.density <= 1.0))
      throw UsageError("random requires --internal >= 0, --w >= 1, --density in (0, 1]");
    net = random_dag(g.internal, g.w, g.density, g.seed);
  }
  std::ostringstream summary;
  summary << "nodes: " << net.num_nodes() << "\n";
  summary << "channels: " << net.num_channels() << "\n";
  for (NodeIndex t : net.sinks())
    summary << "min_cut " << net.node(t).id << ": " << min_cut(net, t) << "\n";

  if (g.out_path.empty()) {
    write_network(out, net);
    err << summary.str();
  } else {
    std::ofstream file(g.out_path);
    if (!file) throw UsageError("cannot write '" + g.out_path + "'");
    write_network(file, net);
    out << summary.str();
  }
  return kOk;
}

void add_network_options(CLI::App* sub, RunConfig& cfg) {
  auto* file = sub->add_option("--network", cfg.network_file, "Network file");
  auto* gen = sub->add_option("--gen", cfg.gen_spec,
                              "Inline generator, e.g. plait:w=2,r=3 or butterfly");
  file->excludes(gen);
  sub->add_option("--sink", cfg.sink, "Sink node id (default: first sink)");
  sub->add_option("--rate", cfg.rate, "Information rate w (default: file hint or C_t)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  sub->add_option("--rt", cfg.rt, "R_t search mode")
      ->check(CLI::IsMember({"exact", "heuristic"}));
  sub->add_option("--order", cfg.order, "Internal-node order for the path-cut bound")
      ->check(CLI::IsMember({"canonical", "minimize"}));
  sub->add_option("--budget", cfg.budget, "Enumeration budget on q^N");
  sub->add_option("--rt-budget", cfg.rt_budget, "Search-node budget for exact R_t");
  sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Failure probability of random linear network coding at a sink"};
  app.name("rlnc");
  app.require_subcommand(1);

  GenConfig gen_cfg;
  auto* gen = app.add_subcommand("gen", "Generate a network file");
  gen->add_option("kind", gen_cfg.kind, "plait | butterfly | random")
      ->required()
      ->check(CLI::IsMember({"plait", "butterfly", "random"}));
  gen->add_option("--w", gen_cfg.w, "Rate / parallel channels");
  gen->add_option("--r", gen_cfg.r, "Internal nodes (plait)");
  gen->add_option("--internal", gen_cfg.internal, "Internal nodes (random)");
  gen->add_option("--density", gen_cfg.density, "Channel density (random)");
  gen->add_option("--seed", gen_cfg.seed, "Seed (random)");
  gen->add_option("--out", gen_cfg.out_path, "Write the network here instead of stdout");

  RunConfig cfg;
  auto* bounds = app.add_subcommand("bounds", "Exact upper and lower bounds");
  add_network_options(bounds, cfg);
  bounds->add_option("--field", cfg.field, "Field order q");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo failure estimate");
  add_network_options(simulate, cfg);
  simulate->add_option("--field", cfg.field, "Field order q");
  simulate->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", cfg.seed, "Master seed (required)");

  auto* exact = app.add_subcommand("exact", "Exact failure probability by enumeration");
  add_network_options(exact, cfg);
  exact->add_option("--field", cfg.field, "Field order q");

  auto* sweep = app.add_subcommand("sweep", "Bounds (and oracles) across field sizes");
  add_network_options(sweep, cfg);
  sweep->add_option("--fields", cfg.fields, "Comma-separated field orders")
      ->required()
      ->delimiter(',');
  auto* sweep_trials =
      sweep->add_option("--trials", cfg.trials, "Add a Monte Carlo column with this many trials")
          ->check(CLI::PositiveNumber);
  sweep->add_option("--seed", cfg.seed, "Master seed for the Monte Carlo column");

  std::vector<const char*> argv{"rlnc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (cfg.format.empty()) cfg.format = sweep->parsed() ? "csv" : "text";

  try {
    if (gen->parsed()) return cmd_gen(gen_cfg, out, err);
    if (bounds->parsed()) return cmd_bounds(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (exact->parsed()) return cmd_exact(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, sweep_trials->count() > 0, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleRate& e) {
    err << "error: " << e.what() << " (C_t = " << e.achieved() << ")\n";
    return kInfeasible;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace rlnc::cli
