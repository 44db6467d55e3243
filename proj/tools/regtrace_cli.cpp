// regtrace: command-line front end to the library pipelines.
//
// Every subcommand turns its flags into an `inputs` object, runs, and prints
// {subcommand, inputs, value(s), expansion?, diagnostics, elapsed}. Feeding
// that output back through --config reruns the same inputs.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "regtrace/acceptance.hpp"
#include "regtrace/asym_engine.hpp"
#include "regtrace/cone_forms.hpp"
#include "regtrace/dixmier.hpp"
#include "regtrace/json_io.hpp"
#include "regtrace/param_trace.hpp"
#include "regtrace/reg_int.hpp"
#include "regtrace/spectral.hpp"

using namespace regtrace;
using json = nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Result {
  json body = json::object();  // value(s), expansion, diagnostics
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

using Handler = std::function<Result(const json&)>;

quad::Tolerance tolerance_of(const json& in) {
  return {in.value("abs_tol", 1e-12), in.value("rel_tol", 1e-10), in.value("max_depth", 25u)};
}

SymbolExpansion symbol_of(const json& in) {
  if (!in.contains("symbol") || in["symbol"].is_null()) throw ValidationError("a symbol is required (--symbol FILE)");
  return symbol_from_json(in["symbol"]);
}

SpectralModel model_of(const json& in) {
  const std::string m = in.value("model", std::string("circle"));
  if (m == "circle") return SpectralModel::circle(in.value("radius", 1.0));
  if (m == "torus1" || m == "torus2" || m == "torus3") {
    const std::size_t n = static_cast<std::size_t>(m.back() - '0');
    if (in.contains("sides") && !in["sides"].empty()) {
      const auto sides = in["sides"].get<std::vector<double>>();
      if (sides.size() != n) throw ValidationError("--sides must list " + std::to_string(n) + " lengths");
      return SpectralModel::torus(sides);
    }
    return SpectralModel::torus(n, in.value("side", 1.0));
  }
  throw ValidationError("unknown model '" + m + "' (circle, torus1, torus2, torus3)");
}

Eigen::MatrixXd matrix_of(const json& in, std::size_t p) {
  if (in.contains("matrix") && !in["matrix"].empty()) {
    const auto rows = in["matrix"].get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw ValidationError("--matrix must be square");
      for (std::size_t k = 0; k < rows.size(); ++k)
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    return A;
  }
  std::mt19937_64 rng(in.value("seed", std::uint64_t{2024}));
  return acceptance::detail::random_invertible(p, rng);
}

json matrix_json(const Eigen::MatrixXd& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back(A(i, k));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Subcommands

Result run_pf(const json& in) {
  const auto s = symbol_of(in);
  const auto e = ball_integral_expansion(s, tolerance_of(in));
  Result r;
  r.body["value"] = e.coefficient(0.0, 0);
  r.body["expansion"] = to_json(e);
  r.body["diagnostics"] = {{"symbol", to_json(s)}};
  r.csv_header = {"value"};
  r.csv_rows = {{e.coefficient(0.0, 0)}};
  return r;
}

Result run_res(const json& in) {
  const auto s = symbol_of(in);
  const std::string norm = in.value("normalization", std::string("raw"));
  if (norm != "raw" && norm != "two_pi") throw ValidationError("--normalization must be raw or two_pi");
  const double v =
      residue_integral(s, norm == "raw" ? ResidueNormalization::raw : ResidueNormalization::two_pi_power);
  Result r;
  r.body["value"] = v;
  r.body["diagnostics"] = {{"symbol", to_json(s)}};
  r.csv_header = {"value"};
  r.csv_rows = {{v}};
  return r;
}

Result run_cov(const json& in) {
  const auto s = symbol_of(in);
  const auto A = matrix_of(in, s.dim);
  const auto c = change_of_variables_check(s, A, tolerance_of(in));
  Result r;
  r.body["values"] = {{"lhs", c.lhs}, {"rhs", c.rhs}, {"correction", c.correction}};
  r.body["value"] = c.lhs - c.rhs;
  r.body["diagnostics"] = {{"matrix", matrix_json(A)}, {"determinant", A.determinant()}};
  r.csv_header = {"lhs", "rhs", "correction"};
  r.csv_rows = {{c.lhs, c.rhs, c.correction}};
  return r;
}

Result run_stokes(const json& in) {
  const auto s = symbol_of(in);
  const int j = in.value("j", 1);
  if (j < 1 || static_cast<std::size_t>(j) > s.dim) throw ValidationError("--j must be between 1 and the dimension");
  const auto jj = static_cast<std::size_t>(j - 1);
  const double sphere = stokes_defect(s, jj);
  const double brute = stokes_defect_bruteforce(s, jj, tolerance_of(in));
  Result r;
  r.body["value"] = sphere;
  r.body["values"] = {{"sphere_formula", sphere}, {"pf_of_derivative", brute}};
  r.body["diagnostics"] = {{"difference", sphere - brute}};
  r.csv_header = {"sphere_formula", "pf_of_derivative"};
  r.csv_rows = {{sphere, brute}};
  return r;
}

Result run_expand(const json& in) {
  const auto B = symbol_of(in);
  const double ks = in.value("kernel_s", 1.0);
  const auto Q = bracket_kernel(B.dim, ks);
  const auto e = bq_expansion(B, Q, in.value("terms", -1), tolerance_of(in));
  Result r;
  r.body["expansion"] = to_json(e);
  json samples = json::array();
  r.csv_header = {"lambda", "F", "expansion"};
  for (double lam : in.value("lambda", std::vector<double>{})) {
    const double f = numeric_F(B, Q, lam);
    const double a = e.evaluate(lam);
    samples.push_back({{"lambda", lam}, {"F", f}, {"expansion", a}});
    r.csv_rows.push_back({lam, f, a});
  }
  r.body["values"] = samples;
  r.body["diagnostics"] = {{"kernel", Q.description}, {"kernel_degree", Q.degree}};
  return r;
}

Result run_heat(const json& in) {
  const auto m = model_of(in);
  auto ts = in.value("t", std::vector<double>{});
  if (ts.empty()) throw ValidationError("heat: at least one --t is required");
  const auto hc = heat_coefficients(m, in.value("jmax", 4));
  Result r;
  r.csv_header = {"t", "heat_trace", "leading_term"};
  json values = json::array();
  const double n = static_cast<double>(m.dim());
  for (double t : ts) {
    if (!(t > 0.0)) throw ValidationError("heat: t must be positive");
    const double h = heat_trace(m, t);
    const double lead = hc.a[0] * std::pow(t, -0.5 * n);
    values.push_back({{"t", t}, {"heat_trace", h}});
    r.csv_rows.push_back({t, h, lead});
  }
  if (ts.size() == 1) r.body["value"] = r.csv_rows[0][1];
  r.body["values"] = values;
  r.body["diagnostics"] = {{"model", m.name()},
                           {"heat_coefficients", hc.a},
                           {"fitted_coefficients", hc.fitted},
                           {"fit_max_deviation", hc.max_deviation},
                           {"fit_window", {hc.window_lo, hc.window_hi}}};
  return r;
}

Result run_zeta(const json& in) {
  const auto m = model_of(in);
  const double w = in.value("w", 2.0);
  const double v = spectral_zeta(m, w, tolerance_of(in));
  Result r;
  r.body["value"] = v;
  r.body["diagnostics"] = {{"model", m.name()}, {"note", "Z(w) = sum over nonzero eigenvalues of lambda^(-w)"}};
  r.csv_header = {"w", "zeta"};
  r.csv_rows = {{w, v}};
  return r;
}

Result run_restrace(const json& in) {
  const auto m = model_of(in);
  const double alpha = in.value("alpha", -0.5 * static_cast<double>(m.dim()));
  const auto rr = residue_trace_power(m, alpha, tolerance_of(in));
  Result r;
  r.body["value"] = rr.zeta;
  r.body["values"] = {{"heat_route", rr.heat}, {"zeta_route", rr.zeta}, {"density_route", rr.density}};
  r.body["diagnostics"] = {{"model", m.name()}, {"volume", m.volume()}};
  r.csv_header = {"heat_route", "zeta_route", "density_route"};
  r.csv_rows = {{rr.heat, rr.zeta, rr.density}};
  return r;
}

Result run_kv(const json& in) {
  const auto m = model_of(in);
  const double s = in.value("s", 0.25);
  const double v = kv_trace(m, s, tolerance_of(in));
  Result r;
  r.body["value"] = v;
  r.body["diagnostics"] = {{"model", m.name()}, {"order", -2.0 * s}};
  r.csv_header = {"s", "kv_trace"};
  r.csv_rows = {{s, v}};
  return r;
}

EigenSequence sequence_of(const json& in) {
  const std::string s = in.value("sequence", std::string("harmonic"));
  if (s == "harmonic") return EigenSequence::harmonic();
  if (s == "power") return EigenSequence::power(in.value("exponent", 1.0));
  if (s == "plateau") return EigenSequence::plateau();
  if (s == "model") return EigenSequence::of_model(model_of(in));
  throw ValidationError("unknown sequence '" + s + "' (harmonic, power, plateau, model)");
}

Result run_dixmier(const json& in) {
  const auto seq = sequence_of(in);
  const auto N = in.value("N", std::size_t{1} << 20);
  const auto d = alpha_sums(seq, N);
  const auto e = dixmier_estimate(d);
  Result r;
  r.body["value"] = e.value;
  r.body["values"] = {{"extrapolated", e.value}, {"raw", e.raw}, {"converged", e.converged}};
  r.body["diagnostics"] = {{"sequence", seq.name}, {"dispersion", e.dispersion}, {"window_estimates", e.window_estimates}};
  r.csv_header = {"N", "alpha", "cesaro"};
  for (std::size_t i = 0; i < d.n.size(); ++i)
    r.csv_rows.push_back({static_cast<double>(d.n[i]), d.alpha[i], d.cesaro[i]});
  return r;
}

Result run_connes(const json& in) {
  const auto m = model_of(in);
  const auto N = in.value("N", std::size_t{1} << 23);
  const auto c = connes_check(m, N);
  Result r;
  r.body["dixmier"] = c.dixmier;
  r.body["residue_over_n"] = c.residue_over_n;
  r.body["values"] = {{"dixmier", c.dixmier},
                      {"dixmier_raw", c.dixmier_raw},
                      {"residue", c.residue},
                      {"residue_over_n", c.residue_over_n}};
  r.body["diagnostics"] = {{"model", m.name()}, {"N", c.N}, {"converged", c.converged},
                           {"relative_gap", c.dixmier / c.residue_over_n - 1.0}};
  r.csv_header = {"dixmier", "dixmier_raw", "residue_over_n"};
  r.csv_rows = {{c.dixmier, c.dixmier_raw, c.residue_over_n}};
  return r;
}

Result run_param_tr(const json& in) {
  if (!in.contains("multiplier") || in["multiplier"].is_null())
    throw ValidationError("param-tr: a multiplier is required (--multiplier FILE)");
  const auto A = make_multiplier(in["multiplier"]);
  const auto tf = trace_function(A);
  const auto te = trace_expansion(A);
  Result r;
  r.csv_header = {"mu", "TR"};
  json values = json::array();
  for (double mu : in.value("mu", std::vector<double>{})) {
    const double v = tf.derivative(0, mu);
    values.push_back({{"mu", mu}, {"TR", v}});
    r.csv_rows.push_back({mu, v});
  }
  const double trb = tr_bar(A);
  r.body["value"] = trb;
  r.body["values"] = {{"tr_bar", trb}, {"res", res_of_TR(A)}, {"samples", values}};
  r.body["expansion"] = {{"plus", to_json(te.plus)}, {"minus", to_json(te.minus)}};
  r.body["diagnostics"] = {{"multiplier", A.description},
                           {"order", A.order},
                           {"ambiguity_degree", tf.alpha},
                           {"analytic", te.analytic},
                           {"fit_residual", te.fit_residual},
                           {"fit_condition", te.fit_condition},
                           {"note", "TR is defined modulo polynomials in mu of degree < ambiguity_degree"}};
  return r;
}

Result run_thom(const json& in) {
  const int samples = in.value("samples", 50);
  const auto seed = in.value("seed", std::uint64_t{10});
  Result r;
  json cases = json::array();
  double worst = 0.0;
  bool dd = true;
  r.csv_header = {"case", "homotopy_error"};
  int i = 0;
  for (const auto& c : acceptance::cone_corpus()) {
    const auto h = cone::homotopy_identity_check(c.form, c.phi, c.space, samples, seed);
    const bool ddz = c.form.d().d().is_zero();
    worst = std::max(worst, h.max_error);
    dd = dd && ddz;
    cases.push_back({{"case", c.name}, {"homotopy_error", h.max_error}, {"d_squared_zero", ddz}});
    r.csv_rows.push_back({static_cast<double>(i++), h.max_error});
  }
  // K on chi (r^{-3/2} + r^{-5/2}) dr with phi = chi r^{-3/2}/2, at r = 2
  const auto I = cone::ProfileSpace::classical(-0.5);
  cone::ConeForm w(2, 1);
  w.add_radial(cone::Profile::tail_power(-1.5) + cone::Profile::tail_power(-2.5),
               cone::AmbientForm::function(Polynomial::constant(2, 1.0)));
  const auto K = cone::homotopy_K(w, cone::Profile::tail_power(-1.5, 0.5), I);
  const double k2 = K.tangential().empty() ? 0.0 : K.tangential()[0].f(2.0);
  r.body["value"] = worst;
  r.body["values"] = {{"max_homotopy_error", worst}, {"d_squared_zero", dd}, {"K_example_at_r2", k2}};
  r.body["diagnostics"] = {{"cases", cases}, {"K_example_oracle", (2.0 / 3.0) * std::pow(2.0, -1.5)}};
  return r;
}

Result run_corpus(const json& in) {
  const auto only = in.value("only", std::vector<int>{});
  static const std::vector<std::function<acceptance::CriterionResult()>> all = {
      [] { return acceptance::criterion1(); }, [] { return acceptance::criterion2(); },
      [] { return acceptance::criterion3(); }, [] { return acceptance::criterion4(); },
      [] { return acceptance::criterion5(); }, [] { return acceptance::criterion6(); },
      [] { return acceptance::criterion7(); }, [] { return acceptance::criterion8(); },
      [] { return acceptance::criterion9(); }, [] { return acceptance::criterion10(); }};
  Result r;
  json results = json::array();
  int failed = 0;
  r.csv_header = {"criterion", "passed", "elapsed"};
  for (int id = 1; id <= 10; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto c = all[static_cast<std::size_t>(id - 1)]();
    std::cerr << acceptance::summary_line(c) << "\n";
    results.push_back(acceptance::to_json(c));
    failed += c.passed() ? 0 : 1;
    r.csv_rows.push_back({static_cast<double>(id), c.passed() ? 1.0 : 0.0, c.elapsed});
  }
  r.body["values"] = results;
  r.body["value"] = failed;
  r.body["diagnostics"] = {{"failed", failed}};
  return r;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"pf", run_pf},         {"res", run_res},         {"cov-check", run_cov},      {"stokes", run_stokes},
      {"expand", run_expand}, {"heat", run_heat},       {"zeta", run_zeta},          {"restrace", run_restrace},
      {"kv", run_kv},         {"dixmier", run_dixmier}, {"connes", run_connes},      {"param-tr", run_param_tr},
      {"thom-check", run_thom}, {"corpus", run_corpus}};
  return h;
}

void print_csv(const Result& r) {
  std::cout.precision(17);
  for (std::size_t i = 0; i < r.csv_header.size(); ++i) std::cout << (i ? "," : "") << r.csv_header[i];
  std::cout << "\n";
  for (const auto& row : r.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << format_double(row[i]);
    std::cout << "\n";
  }
}

int threads_from_env() {
  const char* s = std::getenv("REGTRACE_THREADS");
  if (s == nullptr) return 1;
  const int n = std::atoi(s);
  return n > 0 ? n : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regtrace: regularized integrals, residues and traces"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config, format = "json";
  app.add_option("--config", config, "rerun the subcommand and inputs stored in a previous JSON output");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

  // shared option storage; only the flags a subcommand declares land in its inputs
  std::string symbol_file, multiplier_file, model = "circle", normalization = "raw", sequence = "harmonic";
  double abs_tol = 1e-12, rel_tol = 1e-10, radius = 1.0, side = 1.0, kernel_s = 1.0, w = 2.0, s = 0.25, alpha = 0.0,
         exponent = 1.0;
  int max_depth = 25, j = 1, terms = -1, jmax = 4, samples = 50;
  std::uint64_t seed = 0;
  std::size_t N = 0;
  std::vector<double> sides, ts, lambdas, mus, matrix;
  std::vector<int> only;

  std::map<std::string, CLI::App*> sub;
  const auto add = [&](const std::string& name, const std::string& help) {
    auto* c = app.add_subcommand(name, help);
    sub[name] = c;
    return c;
  };
  const auto tol_opts = [&](CLI::App* c) {
    c->add_option("--abs-tol", abs_tol, "absolute quadrature tolerance")->capture_default_str();
    c->add_option("--rel-tol", rel_tol, "relative quadrature tolerance")->capture_default_str();
    c->add_option("--max-depth", max_depth, "quadrature bisection depth")->capture_default_str();
  };
  const auto model_opts = [&](CLI::App* c) {
    c->add_option("--model", model, "circle, torus1, torus2 or torus3")->capture_default_str();
    c->add_option("--radius", radius, "circle radius")->capture_default_str();
    c->add_option("--side", side, "torus side length")->capture_default_str();
    c->add_option("--sides", sides, "torus side lengths, one per dimension");
  };
  for (const char* name : {"pf", "res", "cov-check", "stokes", "expand"}) {
    auto* c = add(name, "");
    c->add_option("--symbol", symbol_file, "symbol JSON file")->required()->check(CLI::ExistingFile);
    if (std::string(name) != "res") tol_opts(c);
  }
  sub["pf"]->description("partie finie integral with its ball expansion");
  sub["res"]->description("residue integral of the degree -p term");
  sub["res"]->add_option("--normalization", normalization, "raw or two_pi")->capture_default_str();
  sub["cov-check"]->description("change of variables formula for pf f(Ax)");
  sub["cov-check"]->add_option("--matrix", matrix, "row-major entries; random if omitted");
  sub["cov-check"]->add_option("--seed", seed, "seed for the random matrix");
  sub["stokes"]->description("Stokes defect pf(d_j f): sphere formula and direct route");
  sub["stokes"]->add_option("--j", j, "derivative direction, 1-based")->capture_default_str();
  sub["expand"]->description("large-lambda expansion of int B(x) Q(x, lambda) dx, Q = (|x|^2+lambda^2)^(-s)");
  sub["expand"]->add_option("--kernel-s", kernel_s, "kernel exponent s")->capture_default_str();
  sub["expand"]->add_option("--terms", terms, "Taylor depth, -1 for automatic")->capture_default_str();
  sub["expand"]->add_option("--lambda", lambdas, "sample points for F and the truncated expansion");

  auto* heat = add("heat", "heat trace and heat coefficients of a model Laplacian");
  model_opts(heat);
  heat->add_option("--t", ts, "time(s)")->required();
  heat->add_option("--jmax", jmax, "number of heat coefficients")->capture_default_str();
  auto* zeta = add("zeta", "spectral zeta function Z(w)");
  model_opts(zeta);
  tol_opts(zeta);
  zeta->add_option("--w", w, "argument")->capture_default_str();
  auto* rt = add("restrace", "residue of Delta^alpha by the heat, zeta and density routes");
  model_opts(rt);
  tol_opts(rt);
  rt->add_option("--alpha", alpha, "power, default -n/2");
  auto* kv = add("kv", "canonical trace of Delta^(-s)");
  model_opts(kv);
  tol_opts(kv);
  kv->add_option("--s", s, "exponent")->capture_default_str();
  auto* dx = add("dixmier", "Dixmier averages of a nonincreasing sequence");
  model_opts(dx);
  dx->add_option("--sequence", sequence, "harmonic, power, plateau or model")->capture_default_str();
  dx->add_option("--exponent", exponent, "power sequence exponent")->capture_default_str();
  dx->add_option("--N", N, "number of terms (default 2^20)");
  auto* cn = add("connes", "Dixmier trace of Delta^(-n/2) against Res/n");
  model_opts(cn);
  cn->add_option("--N", N, "number of eigenvalues (default 2^23)");
  auto* pt = add("param-tr", "parametric trace TR, its expansion, tr_bar and res");
  pt->add_option("--multiplier", multiplier_file, "multiplier JSON file")->required()->check(CLI::ExistingFile);
  pt->add_option("--mu", mus, "sample points for TR(mu)");
  auto* th = add("thom-check", "homotopy formula and Thom section checks on the cone-form corpus");
  th->add_option("--samples", samples, "points per form")->capture_default_str();
  th->add_option("--seed", seed, "sampling seed");
  auto* co = add("corpus", "run the acceptance suite");
  co->add_option("--only", only, "criterion numbers to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  std::string name;
  json inputs = json::object();
  try {
    if (!config.empty()) {
      const json cfg = read_json_file(config);
      if (!cfg.contains("subcommand") || !cfg.contains("inputs"))
        throw ValidationError("config must contain 'subcommand' and 'inputs'");
      name = cfg["subcommand"].get<std::string>();
      inputs = cfg["inputs"];
    } else {
      for (const auto& [n, c] : sub)
        if (c->parsed()) name = n;
      if (name.empty()) {
        std::cout << app.help();
        return kExitValidation;
      }
      auto* c = sub[name];
      const auto given = [&](const std::string& flag) {
        const auto* o = c->get_option_no_throw(flag);
        return o != nullptr;
      };
      const auto put = [&](const std::string& flag, const std::string& key, const json& v) {
        if (given(flag)) inputs[key] = v;
      };
      if (given("--symbol")) inputs["symbol"] = read_json_file(symbol_file);
      if (given("--multiplier")) inputs["multiplier"] = read_json_file(multiplier_file);
      put("--abs-tol", "abs_tol", abs_tol);
      put("--rel-tol", "rel_tol", rel_tol);
      put("--max-depth", "max_depth", max_depth);
      put("--model", "model", model);
      put("--radius", "radius", radius);
      put("--side", "side", side);
      put("--sides", "sides", sides);
      put("--normalization", "normalization", normalization);
      put("--j", "j", j);
      put("--kernel-s", "kernel_s", kernel_s);
      put("--terms", "terms", terms);
      put("--lambda", "lambda", lambdas);
      put("--t", "t", ts);
      put("--jmax", "jmax", jmax);
      put("--w", "w", w);
      put("--s", "s", s);
      put("--sequence", "sequence", sequence);
      put("--exponent", "exponent", exponent);
      put("--samples", "samples", samples);
      put("--mu", "mu", mus);
      put("--only", "only", only);
      if (given("--alpha") && c->count("--alpha") > 0) inputs["alpha"] = alpha;
      if (given("--N") && c->count("--N") > 0) inputs["N"] = N;
      if (given("--seed") && c->count("--seed") > 0) inputs["seed"] = seed;
      if (given("--matrix") && !matrix.empty()) {
        const auto p = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(matrix.size()))));
        if (p * p != matrix.size()) throw ValidationError("--matrix needs p*p entries");
        json rows = json::array();
        for (std::size_t i = 0; i < p; ++i)
          rows.push_back(std::vector<double>(matrix.begin() + static_cast<long>(i * p),
                                             matrix.begin() + static_cast<long>((i + 1) * p)));
        inputs["matrix"] = rows;
      }
    }
    const auto it = handlers().find(name);
    if (it == handlers().end()) throw ValidationError("unknown subcommand '" + name + "'");

    const auto t0 = std::chrono::steady_clock::now();
    Result r = it->second(inputs);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.body.contains("diagnostics")) r.body["diagnostics"] = json::object();
    r.body["diagnostics"]["threads"] = threads_from_env();

    if (format == "csv") {
      print_csv(r);
    } else {
      json out = {{"subcommand", name}, {"inputs", inputs}};
      for (auto& [k, v] : r.body.items()) out[k] = v;
      out["elapsed"] = elapsed;
      std::cout << out.dump(2) << "\n";
    }
    if (name == "corpus" && r.body["value"].get<int>() != 0) return 1;
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
