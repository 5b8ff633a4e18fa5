#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lissajous/lissajous.hpp"

namespace lissajous::cli {
namespace {

using json = nlohmann::ordered_json;

struct Settings {
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-8;
  std::size_t max_n = kDefaultMaxMembershipN;
};

struct ModelInput {
  LissajousModel model;
  std::optional<Graph> graph;
  double K = 1;
  std::optional<Vec> omega;  // already divided by K

  const Vec& require_omega() const {
    if (!omega) throw Error(ErrorCode::InvalidInput, "this command needs \"omega\" in the model file");
    return *omega;
  }
};

json big(const BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return static_cast<long long>(x);
  return x.str();
}

std::size_t to_index(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

Graph parse_graph(const json& g) {
  if (!g.is_object()) throw Error(ErrorCode::InvalidInput, "\"graph\" must be an object");
  if (g.contains("cycle")) return cycle_graph(to_index(g["cycle"], "cycle"));
  if (g.contains("complete")) return complete_graph(to_index(g["complete"], "complete"));
  if (!g.contains("vertices") || !g.contains("edges"))
    throw Error(ErrorCode::InvalidInput, "\"graph\" needs \"vertices\" and \"edges\" (or \"cycle\" / \"complete\")");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : g["edges"]) {
    if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::InvalidInput, "each edge is a pair [i, j]");
    edges.emplace_back(to_index(e[0], "edge endpoint"), to_index(e[1], "edge endpoint"));
  }
  return from_edges(to_index(g["vertices"], "vertices"), edges);
}

Vec parse_reals(const json& v, const char* what) {
  if (!v.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be an array of numbers");
  Vec out;
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Vec parse_shift(const json& doc, std::size_t n, const char* fallback) {
  const json b = doc.contains("b") ? doc["b"] : json(fallback ? fallback : "");
  if (b.is_string()) {
    if (b == "zeros") return Vec(n, 0.0);
    if (b == "ones") return Vec(n, 1.0);
    throw Error(ErrorCode::InvalidInput, "\"b\" must be \"zeros\", \"ones\" or an array of length n");
  }
  Vec out = parse_reals(b, "\"b\"");
  if (out.size() != n) throw Error(ErrorCode::InvalidInput, "\"b\" must have one entry per column of A");
  return out;
}

ModelInput parse_model(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, "model file must hold a JSON object");
  if (doc.contains("A") == doc.contains("graph"))
    throw Error(ErrorCode::InvalidInput, "model needs exactly one of \"A\" and \"graph\"");
  ModelInput in;
  IntMatrix a;
  if (doc.contains("A")) {
    const json& rows = doc["A"];
    if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::InvalidInput, "\"A\" must be a non-empty array of rows");
    std::vector<std::vector<BigInt>> data;
    for (const auto& row : rows) {
      if (!row.is_array()) throw Error(ErrorCode::InvalidInput, "\"A\" must be an array of integer rows");
      std::vector<BigInt> r;
      for (const auto& x : row) {
        if (!x.is_number_integer()) throw Error(ErrorCode::InvalidInput, "entries of \"A\" must be integers");
        r.emplace_back(x.get<long long>());
      }
      if (!data.empty() && r.size() != data.front().size())
        throw Error(ErrorCode::InvalidInput, "rows of \"A\" must have equal length");
      data.push_back(std::move(r));
    }
    if (data.front().empty()) throw Error(ErrorCode::InvalidInput, "\"A\" has no columns");
    a = IntMatrix::from_rows(data);
    if (!doc.contains("b")) throw Error(ErrorCode::InvalidInput, "model needs \"b\"");
  } else {
    in.graph = parse_graph(doc["graph"]);
    a = incidence(*in.graph).reduced;
  }
  in.model = build_model(a, parse_shift(doc, a.cols(), in.graph ? "ones" : nullptr));
  if (doc.contains("K")) {
    if (!doc["K"].is_number() || !(doc["K"].get<double>() > 0))
      throw Error(ErrorCode::InvalidInput, "\"K\" must be a positive number");
    in.K = doc["K"].get<double>();
  }
  if (doc.contains("omega")) {
    Vec w = parse_reals(doc["omega"], "\"omega\"");
    if (w.size() != in.model.d()) throw Error(ErrorCode::InvalidInput, "\"omega\" must have length d = rank A");
    for (auto& x : w) x /= in.K;
    in.omega = w;
  }
  return in;
}

ModelInput load_model(const std::string& path, std::istream& in) {
  json doc;
  try {
    if (path.empty() || path == "-") {
      doc = json::parse(in);
    } else {
      std::ifstream file(path);
      if (!file) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
      doc = json::parse(file);
    }
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return parse_model(doc);
}

template <class C, class F>
json coefficient_map(const Polynomial<C>& p, F fmt) {
  json out = json::object();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    std::string key;
    for (std::size_t k = 0; k < it->first.size(); ++k) key += (k ? "," : "") + std::to_string(it->first[k]);
    out[key] = fmt(it->second);
  }
  return out;
}

std::vector<std::string> names(const char* stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(std::string(stem) + "_" + std::to_string(k));
  return out;
}

void write_csv_row(std::ostream& out, const Vec& values) {
  for (std::size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << values[k];
  out << "\n";
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << "\n";
}

json to_json(const std::vector<std::size_t>& idx, std::size_t offset) {
  json out = json::array();
  for (std::size_t i : idx) out.push_back(i + offset);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const ModelInput& in, const Settings& s, const std::optional<Vec>& point, std::ostream& out) {
  const LissajousModel& m = in.model;
  json r;
  r["d"] = m.d();
  r["n"] = m.n();
  r["rank"] = rank_rational(m.A);
  r["lattice_index"] = big(m.index);
  json circuits = json::array();
  for (std::size_t c = 0; c < m.circuits.circuits.size(); ++c) {
    json v = json::array();
    for (const BigInt& x : m.circuits.circuit_vectors[c]) v.push_back(big(x));
    circuits.push_back({{"support", to_json(m.circuits.circuits[c], 1)}, {"vector", v}});
  }
  r["circuits"] = circuits;
  r["coloops"] = to_json(m.circuits.coloops, 1);
  r["CL"] = m.circuits.cl_count;
  r["normalized_volume"] = big(normalized_volume_of(m.A));
  r["genericity"] = genericity_test(m);
  r["fiber_degree"] = fiber_degree(m, s.seed);
  r["degree"] = big(degree(m, s.seed));
  r["discriminant_degree_bound"] = big(discriminant_degree_bound(m.A));
  if (point) {
    if (point->size() != m.n()) throw Error(ErrorCode::InvalidInput, "--point must have n coordinates");
    MembershipReport rep = membership(m, *point, s.tol, s.max_n);
    r["membership"] = {{"is_member", rep.is_member},
                       {"min_singular_value", rep.min_singular_value},
                       {"max_singular_value", rep.max_singular_value},
                       {"threshold", rep.threshold_used},
                       {"matrix_dim", rep.matrix_dim}};
  }
  out << r.dump(2) << "\n";
  return kOk;
}

int cmd_equation(const ModelInput& in, const Settings& s, std::ostream& out) {
  const HypersurfaceEquation h = hypersurface_equation(in.model, s.seed);
  const auto vars = names("x", in.model.n());
  json r;
  r["exact"] = h.exact;
  r["root_order"] = h.root_order;
  r["variables"] = vars;
  // keys are comma-separated exponent vectors, highest term first
  if (h.exact) {
    r["det"] = coefficient_map(h.det_exact, [](const GaussRat& c) { return to_string(c); });
    r["root"] = coefficient_map(h.root_exact, [](const Rational& c) { return to_string(c); });
    r["root_string"] = h.root_exact.to_string(vars);
  } else {
    auto pair = [](const cplx& c) { return json::array({c.real(), c.imag()}); };
    r["det"] = coefficient_map(h.det_float, pair);
    r["root"] = coefficient_map(h.root_float, pair);
  }
  out << r.dump(2) << "\n";
  return kOk;
}

int cmd_equilibria(const ModelInput& in, const Settings& s, std::size_t starts, std::optional<double> t_end, double step,
                   const std::optional<Vec>& theta0, std::ostream& out) {
  const LissajousModel& m = in.model;
  const Vec& omega = in.require_omega();
  if (t_end) {
    Vec start = theta0.value_or(Vec(m.d(), 0.0));
    if (start.size() != m.d()) throw Error(ErrorCode::InvalidInput, "--theta0 must have d coordinates");
    auto path = integrate(m, omega, start, *t_end, step);
    std::vector<std::string> cols{"t"};
    for (const auto& c : names("theta", m.d())) cols.push_back(c);
    write_csv_header(out, cols);
    for (const auto& p : path) {
      Vec row{p.t};
      row.insert(row.end(), p.theta.begin(), p.theta.end());
      write_csv_row(out, row);
    }
    return kOk;
  }
  EquilibriumOptions opts;
  opts.seed = s.seed;
  opts.starts = starts;
  const EquilibriumSet set = find_equilibria(m, omega, opts);
  json r;
  r["omega"] = omega;
  r["K"] = in.K;
  r["kushnirenko_bound"] = big(set.kushnirenko_bound);
  r["starts"] = set.starts_used;
  r["count"] = set.equilibria.size();
  std::size_t stable = 0;
  json list = json::array();
  for (const auto& e : set.equilibria) {
    stable += e.stable();
    list.push_back({{"theta", e.theta},
                    {"residual", e.residual},
                    {"eigenvalues", e.eigenvalues},
                    {"stability", to_string(e.stability)}});
  }
  r["stable_count"] = stable;
  r["equilibria"] = list;
  out << r.dump(2) << "\n";
  return kOk;
}

int cmd_positive(const ModelInput& in, std::ostream& out) {
  json r;
  const Vec& omega = in.require_omega();
  r["omega"] = omega;
  try {
    const OptResult res = solve_positive(in.model, omega);
    r["status"] = to_string(res.status);
    r["x_star"] = res.x_star ? json(*res.x_star) : json(nullptr);
    r["theta_star"] = res.theta_star ? json(*res.theta_star) : json(nullptr);
    r["objective"] = res.x_star ? json(res.objective_value) : json(nullptr);
    r["kkt_residual"] = res.kkt_residual;
    r["iterations"] = res.iterations;
    out << r.dump(2) << "\n";
    return res.status == OptStatus::MaxIterations ? kNoConvergence : kOk;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleSlice) throw;
    r["status"] = "InfeasibleSlice";
    r["message"] = e.what();
    out << r.dump(2) << "\n";
    return kOk;
  }
}

struct DiscriminantFlags {
  std::size_t samples = 200;
  bool cloud = false;
  bool report = false;
  std::optional<Vec> from, to;
  std::size_t grid = 101;
};

int cmd_discriminant(const ModelInput& in, const Settings& s, const DiscriminantFlags& f, std::ostream& out,
                     std::ostream& err) {
  const LissajousModel& m = in.model;
  if (f.from || f.to) {
    if (!f.from || !f.to || f.from->size() != m.d() || f.to->size() != m.d())
      throw Error(ErrorCode::InvalidInput, "--profile-from and --profile-to need d coordinates each");
    Vec a = *f.from, b = *f.to;
    for (auto& x : a) x /= in.K;
    for (auto& x : b) x /= in.K;
    EquilibriumOptions opts;
    opts.seed = s.seed;
    auto profile = real_count_profile(m, a, b, f.grid, opts);
    std::vector<std::string> cols{"s"};
    for (const auto& c : names("omega", m.d())) cols.push_back(c);
    cols.push_back("count");
    write_csv_header(out, cols);
    for (const auto& [t, count] : profile) {
      Vec row{t};
      for (std::size_t i = 0; i < m.d(); ++i) row.push_back((1 - t) * a[i] + t * b[i]);
      row.push_back(static_cast<double>(count));
      write_csv_row(out, row);
    }
    return kOk;
  }
  if (m.d() == 1 && m.b_integer && !f.cloud) {
    const DiscriminantResult r = exact_discriminant_1d(m);
    json j;
    j["kind"] = "exact";
    j["variable"] = "w";
    j["delta"] = r.delta->to_string({"w"});
    j["coefficients"] = coefficient_map(*r.delta, [](const Rational& c) { return to_string(c); });
    j["degree"] = r.delta->total_degree();
    j["degree_bound"] = big(r.degree_bound);
    const auto sym = check_sign_symmetry(*r.delta);
    j["sign_symmetry"] = sym ? json(*sym) : json(nullptr);
    out << j.dump(2) << "\n";
    return kOk;
  }
  SampleOptions opts;
  opts.seed = s.seed;
  opts.num_samples = f.samples;
  const DiscriminantResult r = sample_discriminant(m, opts);
  if (r.empty_caveat)
    err << "note: no real branch points found; the real branch locus is empty or has codimension > 1\n";
  if (f.report) {
    json j;
    j["kind"] = "cloud";
    j["samples"] = r.samples.size();
    j["degree_bound"] = big(r.degree_bound);
    j["empty_caveat"] = r.empty_caveat;
    double worst = 0;
    for (const auto& smp : r.samples) worst = std::max(worst, smp.residual);
    j["max_residual"] = worst;
    const bool unit_shift = std::all_of(m.b.begin(), m.b.end(), [](double b) { return b == 1.0; });
    j["graph_symmetry_residual"] =
        in.graph && unit_shift ? json(check_graph_symmetry(*in.graph, r)) : json(nullptr);
    out << j.dump(2) << "\n";
    return kOk;
  }
  auto cols = names("omega", m.d());
  cols.push_back("residual");
  write_csv_header(out, cols);
  for (const auto& smp : r.samples) {
    Vec row(smp.omega);
    for (auto& x : row) x *= in.K;
    row.push_back(smp.residual);
    write_csv_row(out, row);
  }
  return kOk;
}

int cmd_sample_curve(const ModelInput& in, std::size_t grid, std::ostream& out) {
  const LissajousModel& m = in.model;
  if (grid < 1) throw Error(ErrorCode::InvalidInput, "--grid must be positive");
  double rows = 1;
  for (std::size_t k = 0; k < m.d(); ++k) rows *= static_cast<double>(grid + 1);
  if (rows > 1e6) throw Error(ErrorCode::DimensionGuard, "sample grid exceeds 10^6 points");
  auto cols = names("t", m.d());
  for (const auto& c : names("x", m.n())) cols.push_back(c);
  write_csv_header(out, cols);
  std::vector<std::size_t> idx(m.d(), 0);
  for (;;) {
    Vec t(m.d());
    for (std::size_t k = 0; k < m.d(); ++k) t[k] = -kPi + 2 * kPi * static_cast<double>(idx[k]) / static_cast<double>(grid);
    Vec row(t);
    const Vec x = param_point(m, t);
    row.insert(row.end(), x.begin(), x.end());
    write_csv_row(out, row);
    std::size_t k = m.d();
    while (k > 0 && ++idx[k - 1] > grid) idx[--k] = 0;
    if (k == 0) break;
  }
  return kOk;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHypersurface: return kNotHypersurface;
    case ErrorCode::DimensionGuard:
    case ErrorCode::TooManyColumns:
    case ErrorCode::TooLarge: return kGuard;
    case ErrorCode::Inconclusive:
    case ErrorCode::RootExtractionFailed: return kNoConvergence;
    default: return kBadInput;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lissajous varieties, Kuramoto equilibria and discriminants"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--seed", s.seed, "random seed for all sampling")->capture_default_str();
  app.add_option("--tol", s.tol, "relative singular-value threshold for membership")->capture_default_str();
  app.add_option("--max-n", s.max_n, "largest n accepted by membership")->capture_default_str();

  std::string path;
  auto model_arg = [&path](CLI::App* sub) {
    sub->add_option("model", path, "model JSON file; stdin when omitted or '-'");
  };

  auto* analyze = app.add_subcommand("analyze", "degree, volume, circuits and bounds");
  model_arg(analyze);
  std::vector<double> point;
  analyze->add_option("--point", point, "test membership of x (comma separated)")->delimiter(',');

  auto* equation = app.add_subcommand("equation", "defining polynomial of a hypersurface");
  model_arg(equation);

  auto* equilibria = app.add_subcommand("equilibria", "all real equilibria with stability");
  model_arg(equilibria);
  std::size_t starts = 0;
  std::optional<double> t_end;
  double step = 0.01;
  std::vector<double> theta0;
  equilibria->add_option("--starts", starts, "random Newton starts (default 20 d! vol)");
  equilibria->add_option("--trajectory", t_end, "integrate to this time instead and print CSV");
  equilibria->add_option("--step", step, "RK4 step for --trajectory")->capture_default_str();
  equilibria->add_option("--theta0", theta0, "initial angles for --trajectory")->delimiter(',');

  auto* positive = app.add_subcommand("positive", "the equilibrium in the positive region by convex optimization");
  model_arg(positive);

  auto* discriminant = app.add_subcommand("discriminant", "exact branch polynomial (d = 1) or sampled branch locus");
  model_arg(discriminant);
  DiscriminantFlags df;
  std::vector<double> from, to;
  discriminant->add_option("--samples", df.samples, "Newton starts for the sampled locus")->capture_default_str();
  discriminant->add_flag("--cloud", df.cloud, "sample even when an exact polynomial is available");
  discriminant->add_flag("--report", df.report, "JSON summary with symmetry residuals instead of CSV");
  discriminant->add_option("--profile-from", from, "start of an omega segment")->delimiter(',');
  discriminant->add_option("--profile-to", to, "end of an omega segment")->delimiter(',');
  discriminant->add_option("--grid", df.grid, "grid points along the segment")->capture_default_str();

  auto* sample = app.add_subcommand("sample-curve", "points of the variety on a parameter grid");
  model_arg(sample);
  std::size_t grid = 64;
  sample->add_option("--grid", grid, "intervals per parameter")->capture_default_str();

  std::vector<std::string> storage{"lissajous"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  int code = kOk;
  try {
    const ModelInput model = load_model(path, in);
    if (*analyze) {
      code = cmd_analyze(model, s, point.empty() ? std::nullopt : std::optional<Vec>(point), out);
    } else if (*equation) {
      code = cmd_equation(model, s, out);
    } else if (*equilibria) {
      code = cmd_equilibria(model, s, starts, t_end, step, theta0.empty() ? std::nullopt : std::optional<Vec>(theta0), out);
    } else if (*positive) {
      code = cmd_positive(model, out);
    } else if (*discriminant) {
      if (!from.empty()) df.from = from;
      if (!to.empty()) df.to = to;
      code = cmd_discriminant(model, s, df, out, err);
    } else if (*sample) {
      code = cmd_sample_curve(model, grid, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = exit_code(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    code = kBadInput;
  }
  out.flags(flags);
  out.precision(precision);
  return code;
}

}  // namespace lissajous::cli
