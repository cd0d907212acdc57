#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <sstream>

#include "rggcrit/errors.hpp"
#include "rggcrit/experiments.hpp"
#include "rggcrit/geometry.hpp"
#include "rggcrit/random.hpp"

namespace rggcrit::cli {

using nlohmann::json;

namespace {

/// Malformed configuration; maps to kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandInfo {
  const char* name;
  const char* help;
};
const CommandInfo kCommands[] = {
    {"theory", "xi, r_n and the Gumbel target over c and n grids"},
    {"simulate", "Monte Carlo critical radii and their empirical CDF on the c-scale"},
    {"verify-lemma", "boundary-layer integral against its closed-form limit over an n grid"},
    {"verify-geometry", "segment/lens/shadow volumes against Monte Carlo and the shadow bound"},
    {"decompose", "the four-part split of n * integral of psi"},
    {"palm", "mean degree-k count against n * integral of psi"},
    {"report", "pass/fail verdict over saved JSON outputs"},
};

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

/// Runs `body` on `fallback` or on the file named by `path`.
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file '" + path + "'");
  body(file);
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

json read_json_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot read '" + path + "'");
  try {
    return json::parse(file);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// JSON (format json) or CSV rendering of a command result.
void emit(const RunConfig& config, std::ostream& out, const Table& table, json meta) {
  with_output(config.out, out, [&](std::ostream& os) {
    if (config.format == "json") {
      meta["command"] = config.command;
      meta["config"] = to_json(config);
      meta["rows"] = table.to_json();
      os << meta.dump(2) << '\n';
    } else {
      table.write_csv(os);
    }
  });
}

double require_finite(const json& row, const char* key) {
  if (!row.contains(key) || !row[key].is_number()) throw IoError(std::string("missing field ") + key);
  return row[key].get<double>();
}

}  // namespace

// --- configuration -----------------------------------------------------------

json to_json(const RunConfig& c) {
  json j = {{"command", c.command}, {"d", c.d},
            {"k", c.k},             {"c", c.c},
            {"n", c.n},             {"region", c.region},
            {"sides", c.sides},     {"c_grid", c.c_grid},
            {"n_grid", c.n_grid},   {"dims", c.dims},
            {"M", c.M},             {"seed", c.seed},
            {"xi", c.xi},           {"budget", c.budget},
            {"layer_constant", c.layer_constant},
            {"samples", c.samples}, {"out", c.out},
            {"format", c.format},   {"threads", c.threads},
            {"inputs", c.inputs}};
  j["r"] = c.r ? json(*c.r) : json(nullptr);
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") c.command = value.get<std::string>();
      else if (key == "d") c.d = value.get<int>();
      else if (key == "k") c.k = value.get<int>();
      else if (key == "c") c.c = value.get<double>();
      else if (key == "n") c.n = value.get<double>();
      else if (key == "region") c.region = value.get<std::string>();
      else if (key == "sides") c.sides = value.get<std::vector<double>>();
      else if (key == "c_grid") c.c_grid = value.is_string() ? parse_grid(value.get<std::string>()) : value.get<std::vector<double>>();
      else if (key == "n_grid") c.n_grid = value.is_string() ? parse_grid(value.get<std::string>()) : value.get<std::vector<double>>();
      else if (key == "dims") c.dims = value.get<std::vector<int>>();
      else if (key == "M") c.M = value.get<std::uint64_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "xi") c.xi = value.get<double>();
      else if (key == "r") c.r = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
      else if (key == "budget") c.budget = value.get<std::uint64_t>();
      else if (key == "layer_constant") c.layer_constant = value.get<double>();
      else if (key == "samples") c.samples = value.get<std::uint64_t>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "format") c.format = value.get<std::string>();
      else if (key == "threads") c.threads = value.get<unsigned>();
      else if (key == "inputs") c.inputs = value.get<std::vector<std::string>>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return c;
}

std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v;
    if (!(is >> v) || !(is >> std::ws).eof()) throw UsageError("bad grid value '" + s + "' in '" + spec + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = spec.find(':') != std::string::npos ? ':' : ',';
  std::string cur;
  for (const char ch : spec) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  std::vector<double> out;
  if (sep == ':') {
    if (parts.size() != 3) throw UsageError("range grid must be 'from:to:points'");
    const double a = number(parts[0]), b = number(parts[1]);
    const double m = number(parts[2]);
    if (!(m >= 1) || m != std::floor(m)) throw UsageError("grid point count must be a positive integer");
    const auto count = static_cast<std::size_t>(m);
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  } else {
    for (const auto& p : parts) out.push_back(number(p));
  }
  return out;
}

theory::TheoryParams theory_params(const RunConfig& config) {
  theory::TheoryParams p;
  p.d = config.d;
  p.k = config.k;
  p.c = config.c;
  p.n = config.n;
  if (config.d < 2) throw DomainError("dimension d must be >= 2");
  if (config.region == "cube") {
    p.region = geometry::Region::cube(config.d);
  } else if (config.region == "ball") {
    p.region = geometry::Region::ball(config.d);
  } else if (config.region == "box") {
    if (static_cast<int>(config.sides.size()) != config.d)
      throw DomainError("box region needs d side lengths");
    p.region = geometry::Region::box(config.sides);
  } else {
    throw UsageError("unknown region '" + config.region + "' (cube, ball, box)");
  }
  return p;
}

// --- tables ----------------------------------------------------------------

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else
              os << v;
          },
          row[i]);
    }
    os << '\n';
  }
}

json Table::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj[columns[i]] = v; }, row[i]);
    rows_json.push_back(obj);
  }
  return rows_json;
}

// --- subcommands ---------------------------------------------------------------

int cmd_theory(const RunConfig& config, std::ostream& out) {
  auto base = theory_params(config);
  const auto cs = config.c_grid.empty() ? std::vector<double>{config.c} : config.c_grid;
  const auto ns = config.n_grid.empty() ? std::vector<double>{config.n} : config.n_grid;
  const double area = base.region.surface_area();
  Table table{{"d", "k", "c", "n", "area", "xi", "r_n", "target"}, {}};
  for (const double n : ns) {
    if (!(n >= 3.0))
      throw RegimeError("n = " + format_double(n) + " is below the asymptotic regime; need n >= 3", 3.0);
    for (const double c : cs) {
      auto p = base;
      p.n = n;
      p.c = c;
      const auto dc = theory::critical_radius(p);
      table.rows.push_back({static_cast<std::int64_t>(p.d), static_cast<std::int64_t>(p.k), c, n, area,
                            dc.xi, dc.r_n, theory::gumbel_cdf(c)});
    }
  }
  json meta = {{"c_d", theory::density_constant(base.d)},
               {"C_k", theory::loglog_coefficient(base.d, base.k)},
               {"B", theory::exponent_constant(base.d)},
               {"region", base.region.kind_name()},
               {"direct_radius", base.d == 2 && base.k == 0}};
  emit(config, out, table, meta);
  return kOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto params = theory_params(config);
  const auto grid = config.c_grid.empty() ? experiments::default_c_grid() : config.c_grid;
  const auto batch = experiments::run_batch(params, config.M, config.seed, grid, config.threads);
  auto summary = experiments::summary_json(batch);
  summary["command"] = "simulate";
  log << "simulate: d=" << params.d << " k=" << params.k << " n=" << params.n << " M=" << config.M
      << " ks_delta=" << summary["ks_delta"].get<double>()
      << " ks_kappa=" << summary["ks_kappa"].get<double>()
      << " equal_fraction=" << batch.cdf.equal_fraction << '\n';
  if (config.out.empty()) {
    if (config.format == "json")
      out << summary.dump(2) << '\n';
    else
      experiments::write_summary_csv(out, batch.cdf);
    return kOk;
  }
  with_output(config.out + "_trials.csv", out,
              [&](std::ostream& os) { experiments::write_trials_csv(os, batch.trials); });
  with_output(config.out + "_summary.csv", out,
              [&](std::ostream& os) { experiments::write_summary_csv(os, batch.cdf); });
  with_output(config.out + "_summary.json", out,
              [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  return kOk;
}

int cmd_verify_lemma(const RunConfig& config, std::ostream& out) {
  if (config.d < 2 || config.k < 0) throw DomainError("verify-lemma: need d >= 2, k >= 0");
  const auto ns = config.n_grid.empty() ? std::vector<double>{1e4, 1e6, 1e8, 1e10} : config.n_grid;
  Table table{{"d", "k", "xi", "n", "lhs", "rhs", "ratio"}, {}};
  const double rhs = theory::lemma1_rhs(config.d, config.k, config.xi);
  for (const double n : ns) {
    const double lhs = theory::lemma1_lhs(config.d, config.k, n, config.xi);
    table.rows.push_back({static_cast<std::int64_t>(config.d), static_cast<std::int64_t>(config.k),
                          config.xi, n, lhs, rhs, lhs / rhs});
  }
  emit(config, out, table, json::object());
  return kOk;
}

int cmd_verify_geometry(const RunConfig& config, std::ostream& out) {
  Table table{{"quantity", "d", "x", "exact", "reference", "std_error", "ratio", "z"}, {}};
  std::uint64_t stream = 0;
  auto add = [&](const std::string& what, int d, double x, double exact, double ref, double se) {
    const double z = se > 0.0 ? std::abs(exact - ref) / se : (exact == ref ? 0.0 : INFINITY);
    table.rows.push_back({what, static_cast<std::int64_t>(d), x, exact, ref, se, exact / ref, z});
  };
  for (const int d : config.dims) {
    if (d < 2) throw DomainError("verify-geometry: dimensions must be >= 2");
    for (const double t : {-0.5, 0.0, 0.3, 0.8}) {
      Rng rng(derive_seed(config.seed, stream++));
      const auto mc = geometry::segment_volume_mc(d, 1.0, t, config.samples, rng);
      add("segment", d, t, geometry::segment_volume(d, 1.0, t), mc.value, mc.std_error);
    }
    for (const double L : {0.2, 1.0, 1.6}) {
      Rng rng(derive_seed(config.seed, stream++));
      const auto mc = geometry::lens_volume_mc(d, 1.0, L, config.samples, rng);
      add("lens", d, L, geometry::lens_volume(d, 1.0, L), mc.value, mc.std_error);
    }
    for (const double L : {0.01, 0.05, 0.1, 0.5}) {
      Rng rng(derive_seed(config.seed, stream++));
      const auto mc = geometry::shadow_volume_mc(d, 1.0, L, config.samples, rng);
      add("shadow", d, L, geometry::shadow_volume_exact(d, 1.0, L), mc.value, mc.std_error);
    }
    for (const double L : {0.01, 0.05, 0.1})
      add("shadow_bound", d, L, geometry::shadow_volume_exact(d, 1.0, L),
          geometry::shadow_lower_bound(d, L), 0.0);
  }
  emit(config, out, table, json{{"samples", config.samples}});
  return kOk;
}

namespace {

double resolve_radius(const RunConfig& config, const theory::TheoryParams& params) {
  if (config.r) {
    if (!(*config.r > 0.0)) throw DomainError("radius must be positive");
    return *config.r;
  }
  return theory::critical_radius(params).r_n;
}

}  // namespace

int cmd_decompose(const RunConfig& config, std::ostream& out) {
  const auto params = theory_params(config);
  params.validate();
  const double r = resolve_radius(config, params);
  theory::PsiOptions options;
  options.budget = config.budget;
  options.layer_constant = config.layer_constant;
  Rng rng(config.seed);
  const auto integral = theory::integrate_psi(params, r, options, rng);
  const auto& parts = integral.parts;
  const auto total = parts.total();
  Table table{{"part", "value", "std_error", "share"}, {}};
  auto add = [&](const char* name, const theory::PsiPart& p) {
    table.rows.push_back({std::string(name), p.value, p.std_error, p.value / total.value});
  };
  add("omega0", parts.omega0);
  add("omega2", parts.omega2);
  add("omega11", parts.omega11);
  add("omega12", parts.omega12);
  add("total", total);
  json meta = {{"r", r},
               {"target", std::exp(-config.c)},
               {"half_space_layer", integral.half_space_layer},
               {"boundary_layer_share", parts.omega11.value / total.value},
               {"interior", integral.interior},
               {"faces", integral.faces},
               {"edges", integral.edges}};
  emit(config, out, table, meta);
  return kOk;
}

int cmd_palm(const RunConfig& config, std::ostream& out) {
  const auto params = theory_params(config);
  params.validate();
  const double r = resolve_radius(config, params);
  theory::PsiOptions options;
  options.budget = config.budget;
  options.layer_constant = config.layer_constant;
  const auto res = experiments::palm_check(params, r, config.M, config.seed, options, config.threads);
  Table table{{"k", "n", "r", "trials", "mean_count", "count_std_error", "psi_integral",
               "psi_std_error", "z"},
              {}};
  table.rows.push_back({static_cast<std::int64_t>(params.k), params.n, r,
                        static_cast<std::int64_t>(res.trials), res.mean_count, res.count_std_error,
                        res.psi_integral, res.psi_std_error, res.z_score()});
  emit(config, out, table, json::object());
  return kOk;
}

json evaluate_report(const std::vector<json>& documents) {
  json criteria = json::array();
  bool all = true;
  auto verdict = [&](const std::string& name, const std::string& source, bool pass, json detail) {
    criteria.push_back({{"name", name}, {"source", source}, {"pass", pass}, {"detail", std::move(detail)}});
    all = all && pass;
  };
  for (const auto& doc : documents) {
    if (!doc.is_object() || !doc.contains("command")) throw IoError("input without a \"command\" key");
    const auto command = doc["command"].get<std::string>();
    if (command == "simulate") {
      const double ksd = require_finite(doc, "ks_delta"), ksk = require_finite(doc, "ks_kappa");
      const double eq = require_finite(doc, "equal_fraction");
      const std::string tag = "simulate k=" + std::to_string(doc.value("k", 0)) +
                              " n=" + format_double(doc.value("n", 0.0));
      verdict("gumbel_ks_delta", tag, ksd <= 0.15, {{"ks", ksd}, {"max", 0.15}});
      verdict("gumbel_ks_kappa", tag, ksk <= 0.15, {{"ks", ksk}, {"max", 0.15}});
      verdict("equality_fraction", tag, eq >= 0.9, {{"fraction", eq}, {"min", 0.9}});
      verdict("min_degree_verified", tag, doc.value("min_degree_verified", false), json::object());
    } else if (command == "verify-lemma") {
      const auto& rows = doc.at("rows");
      if (rows.empty()) throw IoError("verify-lemma input has no rows");
      bool monotone = true;
      double prev = INFINITY;
      for (const auto& row : rows) {
        const double dev = std::abs(require_finite(row, "ratio") - 1.0);
        monotone = monotone && dev < prev;
        prev = dev;
      }
      const double last = require_finite(rows.back(), "ratio");
      const std::string tag = "verify-lemma d=" + std::to_string(rows.back().value("d", 0)) +
                              " k=" + std::to_string(rows.back().value("k", 0));
      verdict("lemma_ratio_final", tag, last >= 0.85 && last <= 1.15, {{"ratio", last}});
      verdict("lemma_ratio_monotone", tag, monotone, json::object());
    } else if (command == "palm") {
      const double z = require_finite(doc.at("rows").at(0), "z");
      verdict("palm_agreement", "palm", z <= 3.0, {{"z", z}, {"max", 3.0}});
    } else if (command == "decompose") {
      const double share = require_finite(doc, "boundary_layer_share");
      verdict("boundary_layer_share", "decompose", share >= 0.8, {{"share", share}, {"min", 0.8}});
    } else if (command == "verify-geometry") {
      double worst_z = 0.0, worst_ratio = INFINITY;
      for (const auto& row : doc.at("rows")) {
        if (row.at("quantity") == "shadow_bound")
          worst_ratio = std::min(worst_ratio, require_finite(row, "ratio"));
        else
          worst_z = std::max(worst_z, require_finite(row, "z"));
      }
      verdict("geometry_mc_agreement", "verify-geometry", worst_z <= 3.0, {{"max_z", worst_z}});
      verdict("shadow_lower_bound", "verify-geometry", worst_ratio >= 0.9, {{"min_ratio", worst_ratio}});
    } else if (command == "theory") {
      bool finite = true;
      for (const auto& row : doc.at("rows")) finite = finite && std::isfinite(require_finite(row, "r_n"));
      verdict("theory_rows_finite", "theory", finite, json::object());
    } else {
      throw IoError("report: unrecognised input command '" + command + "'");
    }
  }
  return {{"command", "report"}, {"pass", all}, {"criteria", criteria}};
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  if (config.inputs.empty()) throw UsageError("report needs at least one input file");
  std::vector<json> docs;
  for (const auto& path : config.inputs) docs.push_back(read_json_file(path));
  const auto verdict = evaluate_report(docs);
  with_output(config.out, out, [&](std::ostream& os) { os << verdict.dump(2) << '\n'; });
  return verdict["pass"].get<bool>() ? kOk : kFailedVerdict;
}

// --- argument parsing ------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical radii of random geometric graphs: formulas, quadrature checks and simulation"};
  app.require_subcommand(1, 1);

  struct Flags {
    std::string config;
    int d = 3, k = 0;
    double c = 0, n = 0, xi = 0, r = 0, layer = 1;
    std::string region, sides, c_grid, n_grid, dims, out, format;
    std::uint64_t M = 0, seed = 0, budget = 0, samples = 0;
    unsigned threads = 0;
    std::vector<std::string> inputs;
  } f;

  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : kCommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", f.config, "JSON config file (flags override it)");
    sub->add_option("--d", f.d, "dimension");
    sub->add_option("--k", f.k, "degree / connectivity index");
    sub->add_option("--c", f.c, "Gumbel parameter");
    sub->add_option("--n", f.n, "number of points");
    sub->add_option("--region", f.region, "cube | ball | box");
    sub->add_option("--sides", f.sides, "box side lengths, comma separated");
    sub->add_option("--c-grid", f.c_grid, "c values: a:b:m or a,b,...");
    sub->add_option("--n-grid", f.n_grid, "n values: a:b:m or a,b,...");
    sub->add_option("--dims", f.dims, "dimensions for verify-geometry, comma separated");
    sub->add_option("--M", f.M, "trial count");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--xi", f.xi, "xi for verify-lemma");
    sub->add_option("--r", f.r, "radius (palm, decompose); default r_n(c)");
    sub->add_option("--budget", f.budget, "Monte Carlo budget for the psi integral");
    sub->add_option("--layer", f.layer, "omega2 width in units of r^2");
    sub->add_option("--samples", f.samples, "Monte Carlo samples for verify-geometry");
    sub->add_option("--out", f.out, "output file (simulate: prefix)");
    sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    if (std::string(name) == "report") sub->add_option("inputs", f.inputs, "JSON outputs to judge");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    CLI::App* sub = nullptr;
    for (auto* s : subs)
      if (s->parsed()) sub = s;
    RunConfig config;
    if (sub->count("--config")) config = config_from_json(read_json_file(f.config));
    config.command = sub->get_name();
    auto set = [&](const char* flag, auto apply) {
      const auto* opt = sub->get_option_no_throw(flag);
      if (opt && opt->count() > 0) apply();
    };
    set("--d", [&] { config.d = f.d; });
    set("--k", [&] { config.k = f.k; });
    set("--c", [&] { config.c = f.c; });
    set("--n", [&] { config.n = f.n; });
    set("--region", [&] { config.region = f.region; });
    set("--sides", [&] { config.sides = parse_grid(f.sides); });
    set("--c-grid", [&] { config.c_grid = parse_grid(f.c_grid); });
    set("--n-grid", [&] { config.n_grid = parse_grid(f.n_grid); });
    set("--dims", [&] {
      config.dims.clear();
      for (const double v : parse_grid(f.dims)) config.dims.push_back(static_cast<int>(v));
    });
    set("--M", [&] { config.M = f.M; });
    set("--seed", [&] { config.seed = f.seed; });
    set("--xi", [&] { config.xi = f.xi; });
    set("--r", [&] { config.r = f.r; });
    set("--budget", [&] { config.budget = f.budget; });
    set("--layer", [&] { config.layer_constant = f.layer; });
    set("--samples", [&] { config.samples = f.samples; });
    set("--out", [&] { config.out = f.out; });
    set("--format", [&] { config.format = f.format; });
    set("inputs", [&] { config.inputs = f.inputs; });
    if (sub->count("--threads")) {
      config.threads = f.threads;
    } else if (const char* env = std::getenv("RGGCRIT_THREADS"); env && *env) {
      try {
        config.threads = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        throw UsageError(std::string("RGGCRIT_THREADS is not a number: ") + env);
      }
    }
    if (config.format != "csv" && config.format != "json")
      throw UsageError("format must be csv or json");

    const std::string& cmd = config.command;
    if (cmd == "theory") return cmd_theory(config, out);
    if (cmd == "simulate") return cmd_simulate(config, out, err);
    if (cmd == "verify-lemma") return cmd_verify_lemma(config, out);
    if (cmd == "verify-geometry") return cmd_verify_geometry(config, out);
    if (cmd == "decompose") return cmd_decompose(config, out);
    if (cmd == "palm") return cmd_palm(config, out);
    return cmd_report(config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << " (smallest admissible n: " << e.min_admissible_n() << ")\n";
    return kDomain;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::invalid_argument& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace rggcrit::cli
