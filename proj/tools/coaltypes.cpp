// Command-line front end: rate tables, exact type-count laws, limit laws,
// fixed-point samples, Monte Carlo summaries and identity cross-checks.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "coaltypes/asymptotic.hpp"
#include "coaltypes/errors.hpp"
#include "coaltypes/exact.hpp"
#include "coaltypes/io.hpp"
#include "coaltypes/measure.hpp"
#include "coaltypes/rates.hpp"
#include "coaltypes/rational.hpp"
#include "coaltypes/simulate.hpp"

using namespace coaltypes;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCondition = 3;
constexpr int kExitTolerance = 4;

struct Options {
  std::string measure_path;
  double rate = 1.0;
  int n = 10;
  int j_max = 2;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  double epsilon = kDefaultEpsilon;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  bool exact = false;
  std::string dump;
  std::string totals_out;
  double tol_rows = 1e-10;
  double tol_drop = 1e-9;
  double tol_product = 1e-12;
  double tol_ewens = 1e-10;
  double tol_norm = 1e-10;
};

// Writes to --out when given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

ConfigEcho base_echo(const std::string& command, const Measure& m) {
  return {{"command", command}, {"measure", measure_to_json(m)}};
}

json echo_json(const ConfigEcho& echo) {
  json cfg;
  cfg["tool"] = "coaltypes";
  cfg["version"] = version_string();
  for (const auto& [k, v] : echo) cfg[k] = v;
  return cfg;
}

void emit_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void check_rate(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "--rate must be a positive number");
}

void check_n(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be at least 1");
}

int run_rates(const Options& o) {
  const auto m = load_measure(o.measure_path);
  const auto t = build_rate_table(m, o.n);
  auto echo = base_echo("rates", m);
  echo.emplace_back("n", std::to_string(o.n));
  Output out(o.out);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["rates"] = json::array();
    doc["totals"] = json::array();
    for (int mm = 2; mm <= t.n_max(); ++mm) {
      for (int k = 1; k < mm; ++k) doc["rates"].push_back({{"m", mm}, {"k", k}, {"g_mk", t.g(mm, k)}, {"r_mk", t.jump(mm, k)}});
      doc["totals"].push_back({{"m", mm}, {"g_m", t.total(mm)}, {"row_sum", t.row_sum(mm)}});
    }
    emit_json(out.stream(), doc);
  } else {
    write_config_header(out.stream(), echo);
    write_rates_csv(out.stream(), t);
  }
  if (!o.totals_out.empty()) {
    Output totals(o.totals_out);
    write_config_header(totals.stream(), echo);
    write_totals_csv(totals.stream(), t);
  }
  return 0;
}

int run_dist(const Options& o) {
  check_rate(o.rate);
  check_n(o.n);
  const auto m = load_measure(o.measure_path);
  auto echo = base_echo("dist", m);
  echo.emplace_back("rate", format_number(o.rate));
  echo.emplace_back("n", std::to_string(o.n));
  echo.emplace_back("exact", o.exact ? "true" : "false");
  Output out(o.out);
  if (o.exact) {
    const auto d = exact_rational_distribution(m, o.rate, o.n);
    if (o.format == "json") {
      json doc;
      doc["config"] = echo_json(echo);
      doc["distribution"] = json::array();
      for (int mm = 1; mm <= d.n; ++mm) {
        for (int k = 1; k <= mm; ++k) doc["distribution"].push_back({{"m", mm}, {"k", k}, {"probability", d.p[mm][k].str()}});
      }
      emit_json(out.stream(), doc);
    } else {
      write_config_header(out.stream(), echo);
      write_rational_distribution_csv(out.stream(), d);
    }
    return 0;
  }
  const auto t = build_rate_table(m, std::max(o.n, 2));
  const auto d = type_distribution(t, o.rate, o.n, 1);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["distribution"] = json::array();
    for (int mm = 1; mm <= d.n; ++mm) {
      for (int k = 1; k <= mm; ++k) doc["distribution"].push_back({{"m", mm}, {"k", k}, {"probability", d.prob(mm, k)}});
    }
    emit_json(out.stream(), doc);
  } else {
    write_config_header(out.stream(), echo);
    write_distribution_csv(out.stream(), d);
  }
  return 0;
}

int run_moments(const Options& o) {
  check_rate(o.rate);
  check_n(o.n);
  if (o.j_max < 1) throw Error(ErrorCode::InvalidArgument, "--jmax must be at least 1");
  const auto m = load_measure(o.measure_path);
  const auto t = build_rate_table(m, std::max(o.n, 2));
  const auto fm = factorial_moments(t, o.rate, o.n, o.j_max);
  auto echo = base_echo("moments", m);
  echo.emplace_back("rate", format_number(o.rate));
  echo.emplace_back("n", std::to_string(o.n));
  echo.emplace_back("jmax", std::to_string(o.j_max));
  Output out(o.out);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["moments"] = json::array();
    for (int mm = 1; mm <= fm.n; ++mm) {
      for (int j = 1; j <= fm.j_max; ++j) doc["moments"].push_back({{"m", mm}, {"j", j}, {"value", fm.at(mm, j)}});
    }
    emit_json(out.stream(), doc);
  } else {
    write_config_header(out.stream(), echo);
    write_moments_csv(out.stream(), fm);
  }
  return 0;
}

int run_limit(const Options& o) {
  check_rate(o.rate);
  const auto m = load_measure(o.measure_path);
  const auto law = limit_law(m, o.rate, std::max(o.j_max, 2));
  const auto levy = levy_density_description(m);
  auto echo = base_echo("limit", m);
  echo.emplace_back("rate", format_number(o.rate));
  echo.emplace_back("jmax", std::to_string(law.j_max));
  Output out(o.out);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["phi"] = law.phi;
    doc["moments"] = law.moments;
    doc["variance"] = law.variance;
    doc["squared_size_integral"] = law.squared_size;
    doc["levy_measure"] = levy.describe();
    if (law.simple) {
      doc["simple"] = {{"m0", law.simple->m0}, {"b_shape", law.simple->b_shape},
                       {"a_law", law.simple->describe_a_law()}};
    } else {
      doc["simple"] = nullptr;
    }
    emit_json(out.stream(), doc);
    return 0;
  }
  auto& s = out.stream();
  write_config_header(s, echo);
  s << "# variance=" << format_number(law.variance) << " squared_size_integral=" << format_number(law.squared_size)
    << '\n';
  std::istringstream levy_lines(levy.describe());
  for (std::string line; std::getline(levy_lines, line);) s << "# levy_measure: " << line << '\n';
  if (law.simple) {
    s << "# simple m0=" << format_number(law.simple->m0) << " b_shape=" << format_number(law.simple->b_shape)
      << " a_law: " << law.simple->describe_a_law() << '\n';
  } else {
    s << "# simple: no (int Xi(dx)/(x,x) is infinite)\n";
  }
  s << "j,phi,moment\n";
  for (int j = 0; j <= law.j_max; ++j) {
    s << j << ',' << format_number(law.phi[j]) << ',' << format_number(law.moments[j]) << '\n';
  }
  return 0;
}

int run_fpsample(const Options& o) {
  check_rate(o.rate);
  if (o.reps < 1) throw Error(ErrorCode::InvalidArgument, "--reps must be at least 1");
  const auto m = load_measure(o.measure_path);
  const auto sample = fixed_point_sample(m, o.rate, o.seed, o.reps, o.epsilon, o.threads);
  auto echo = base_echo("fpsample", m);
  echo.emplace_back("rate", format_number(o.rate));
  echo.emplace_back("count", std::to_string(o.reps));
  echo.emplace_back("seed", std::to_string(o.seed));
  echo.emplace_back("epsilon", format_number(o.epsilon));
  Output out(o.out);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["max_truncation_bound"] = sample.max_truncation_bound;
    doc["mean_terms"] = sample.mean_terms;
    doc["max_terms"] = sample.max_terms;
    doc["values"] = sample.values;
    emit_json(out.stream(), doc);
    return 0;
  }
  auto& s = out.stream();
  write_config_header(s, echo);
  s << "# max_truncation_bound=" << format_number(sample.max_truncation_bound)
    << " mean_terms=" << format_number(sample.mean_terms) << " max_terms=" << sample.max_terms << '\n';
  for (double v : sample.values) s << format_number(v) << '\n';
  return 0;
}

json stat_json(const StatSummary& st) {
  return {{"mean", st.moments.mean}, {"variance", st.moments.variance()}, {"histogram", st.histogram}};
}

int run_simulate(const Options& o) {
  check_rate(o.rate);
  check_n(o.n);
  if (o.reps < 1) throw Error(ErrorCode::InvalidArgument, "--reps must be at least 1");
  const auto m = load_measure(o.measure_path);
  MonteCarloOptions mc;
  mc.threads = o.threads;
  mc.keep_replicates = !o.dump.empty();
  const auto summary = monte_carlo(m, o.rate, o.n, o.reps, o.seed, mc);
  auto echo = base_echo("simulate", m);
  echo.emplace_back("rate", format_number(o.rate));
  echo.emplace_back("n", std::to_string(o.n));
  echo.emplace_back("reps", std::to_string(o.reps));
  echo.emplace_back("seed", std::to_string(o.seed));
  echo.emplace_back("engine", to_string(summary.engine));
  const std::pair<const char*, const StatSummary*> stats[] = {
      {"k_n", &summary.k_n}, {"k_n1", &summary.k_n1}, {"m_n", &summary.m_n},
      {"n_n", &summary.n_n}, {"c_n", &summary.c_n},   {"i_n", &summary.i_n}};
  Output out(o.out);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["bound_violations"] = summary.bound_violations;
    for (const auto& [name, st] : stats) doc["stats"][name] = stat_json(*st);
    emit_json(out.stream(), doc);
  } else {
    auto& s = out.stream();
    write_config_header(s, echo);
    s << "# bound_violations=" << summary.bound_violations << '\n';
    for (const auto& [name, st] : stats) {
      s << "# " << name << " mean=" << format_number(st->moments.mean)
        << " variance=" << format_number(st->moments.variance()) << '\n';
    }
    s << "stat,value,count,probability\n";
    for (const auto& [name, st] : stats) {
      for (std::size_t v = 0; v < st->histogram.size(); ++v) {
        if (st->histogram[v] == 0) continue;
        s << name << ',' << v << ',' << st->histogram[v] << ',' << format_number(st->probability(static_cast<int>(v)))
          << '\n';
      }
    }
  }
  if (!o.dump.empty()) {
    Output dump(o.dump);
    auto& d = dump.stream();
    write_config_header(d, echo);
    d << "rep,k_n,k_n1,m_n,n_n,c_n,i_n\n";
    for (std::size_t i = 0; i < summary.replicates.size(); ++i) {
      const auto& r = summary.replicates[i];
      d << i << ',' << r.k_n << ',' << r.k_n1 << ',' << r.m_n << ',' << r.n_n << ',' << r.c_n << ',' << r.i_n << '\n';
    }
  }
  return summary.bound_violations == 0 ? 0 : kExitTolerance;
}

struct Check {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return error <= tolerance; }
};

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

bool pure_kingman(const Measure& m) {
  if (m.kind() == MeasureKind::Xi) return m.xi().atoms.empty();
  const auto& l = m.lambda();
  return l.star_mass == 0.0 && l.beta.empty() && l.atoms.empty();
}

int run_crosscheck(const Options& o) {
  check_rate(o.rate);
  if (o.n < 2) throw Error(ErrorCode::InvalidArgument, "--n must be at least 2 for crosscheck");
  const auto m = load_measure(o.measure_path);
  const auto t = build_rate_table(m, o.n);
  const auto d = type_distribution(t, o.rate, o.n, 1);
  std::vector<Check> checks;

  Check rows{"row_sum_vs_total_rate", 0.0, o.tol_rows};
  Check drop{"block_drop_integral_vs_table", 0.0, o.tol_drop};
  for (int mm = 2; mm <= o.n; ++mm) {
    rows.error = std::max(rows.error, relative(t.row_sum(mm), t.total(mm)));
    double table = 0.0;
    for (int k = 1; k < mm; ++k) table += (mm - k) * t.g(mm, k);
    drop.error = std::max(drop.error, relative(block_drop_integral(m, mm), table));
  }
  checks.push_back(rows);
  checks.push_back(drop);

  Check norm{"row_normalization", 0.0, o.tol_norm};
  Check product{"all_singletons_product", 0.0, o.tol_product};
  for (int mm = 1; mm <= o.n; ++mm) {
    double sum = 0.0;
    for (int k = 1; k <= mm; ++k) sum += d.prob(mm, k);
    norm.error = std::max(norm.error, std::abs(sum - 1.0));
    product.error = std::max(product.error, relative(all_singletons_probability(t, o.rate, mm), d.prob(mm, mm)));
  }
  checks.push_back(norm);
  checks.push_back(product);

  if (m.kind() == MeasureKind::Lambda && m.kingman_mass() == 0.0) {
    Check internal{"internal_branches_equal_one", 0.0, 0.0};
    for (int mm = 2; mm <= o.n; ++mm) {
      internal.error = std::max(internal.error, std::abs(expected_block_drop(m, mm).e_internal - 1.0));
    }
    checks.push_back(internal);
  }
  if (pure_kingman(m) && o.n <= kEwensMaxN) {
    Check ewens{"ewens_oracle", 0.0, o.tol_ewens};
    const double theta = 2.0 * o.rate * m.kingman_mass();
    for (int mm = 1; mm <= o.n; ++mm) {
      const auto oracle = ewens_oracle(theta, mm);
      for (int k = 1; k <= mm; ++k) ewens.error = std::max(ewens.error, std::abs(oracle[k] - d.prob(mm, k)));
    }
    checks.push_back(ewens);
  }

  auto echo = base_echo("crosscheck", m);
  echo.emplace_back("rate", format_number(o.rate));
  echo.emplace_back("n", std::to_string(o.n));
  bool all = true;
  for (const auto& c : checks) all = all && c.pass();
  Output out(o.out);
  if (o.format == "json") {
    json doc;
    doc["config"] = echo_json(echo);
    doc["pass"] = all;
    for (const auto& c : checks) {
      doc["checks"].push_back({{"check", c.name}, {"max_error", c.error}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
    }
    emit_json(out.stream(), doc);
  } else {
    auto& s = out.stream();
    write_config_header(s, echo);
    s << "check,max_error,tolerance,status\n";
    for (const auto& c : checks) {
      s << c.name << ',' << format_number(c.error) << ',' << format_number(c.tolerance) << ','
        << (c.pass() ? "pass" : "FAIL") << '\n';
    }
  }
  return all ? 0 : kExitTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type counts, collision rates and limit laws for coalescents with mutation"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Options o;

  auto add_measure = [&](CLI::App* sub) {
    sub->add_option("--measure", o.measure_path, "Measure file (JSON)")->required()->check(CLI::ExistingFile);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output path (default stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_rate = [&](CLI::App* sub) { sub->add_option("--rate", o.rate, "Mutation rate r > 0")->required(); };

  auto* rates = app.add_subcommand("rates", "Block-counting rate table g(m,k), r(m,k)");
  add_measure(rates);
  rates->add_option("--n", o.n, "Largest block count")->required();
  rates->add_option("--totals-out", o.totals_out, "Also write total rates to this path");
  add_output(rates);

  auto* dist = app.add_subcommand("dist", "Law of the number of types K_m for m <= n");
  add_measure(dist);
  add_rate(dist);
  dist->add_option("--n", o.n, "Sample size")->required();
  dist->add_flag("--exact", o.exact, "Exact rational arithmetic (atom measures, n <= 30)");
  add_output(dist);

  auto* moments = app.add_subcommand("moments", "Descending factorial moments of K_m");
  add_measure(moments);
  add_rate(moments);
  moments->add_option("--n", o.n, "Sample size")->required();
  moments->add_option("--jmax", o.j_max, "Highest moment order");
  add_output(moments);

  auto* limit = app.add_subcommand("limit", "Limit law of K_n / n");
  add_measure(limit);
  add_rate(limit);
  limit->add_option("--jmax", o.j_max, "Highest moment order (>= 2)");
  add_output(limit);

  auto* fpsample = app.add_subcommand("fpsample", "Samples of the limit from its fixed-point series");
  add_measure(fpsample);
  add_rate(fpsample);
  fpsample->add_option("--reps", o.reps, "Number of draws");
  fpsample->add_option("--seed", o.seed, "Random seed");
  fpsample->add_option("--epsilon", o.epsilon, "Series truncation threshold in (0, 1]");
  fpsample->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_output(fpsample);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coalescent trees with mutations");
  add_measure(simulate);
  add_rate(simulate);
  simulate->add_option("--n", o.n, "Sample size")->required();
  simulate->add_option("--reps", o.reps, "Number of replicates");
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--dump", o.dump, "Write per-replicate statistics to this path");
  add_output(simulate);

  auto* crosscheck = app.add_subcommand("crosscheck", "Check the rate and recursion identities");
  add_measure(crosscheck);
  crosscheck->add_option("--rate", o.rate, "Mutation rate r > 0");
  crosscheck->add_option("--n", o.n, "Largest sample size");
  crosscheck->add_option("--tol-rows", o.tol_rows, "Relative tolerance for row sums");
  crosscheck->add_option("--tol-drop", o.tol_drop, "Relative tolerance for the block-drop identity");
  crosscheck->add_option("--tol-product", o.tol_product, "Relative tolerance for P(K_n = n)");
  crosscheck->add_option("--tol-ewens", o.tol_ewens, "Absolute tolerance against the Ewens formula");
  add_output(crosscheck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*rates) return run_rates(o);
    if (*dist) return run_dist(o);
    if (*moments) return run_moments(o);
    if (*limit) return run_limit(o);
    if (*fpsample) return run_fpsample(o);
    if (*simulate) return run_simulate(o);
    if (*crosscheck) return run_crosscheck(o);
  } catch (const Error& e) {
    std::cerr << "coaltypes: " << e.what() << '\n';
    if (e.code() == ErrorCode::ConditionViolated) return kExitCondition;
    if (is_validation_error(e.code())) return kExitValidation;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "coaltypes: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
