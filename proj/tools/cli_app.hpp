#ifndef GERM_CLI_APP_HPP
#define GERM_CLI_APP_HPP

// The `germ` command line: a subcommand tree over the library with JSON,
// CSV and text renderings of the same result object.
//
// Exit codes: 0 success, 1 domain error (error name on stderr), 2 usage.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "germ/dynamics.hpp"
#include "germ/field.hpp"
#include "germ/normal_form.hpp"
#include "germ/pgroup.hpp"
#include "germ/series.hpp"

namespace germ::cli {

using Json = nlohmann::ordered_json;

/// A result: the JSON object, plus an explicit table for CSV when the data
/// has a natural row structure.
struct Output {
  Json data;
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

/// Shortest decimal string that reads back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline Json to_json(const Rational& v) { return v.to_string(); }
inline Json to_json(const ModInt& v) { return v.residue(); }

inline Json to_json(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

template <class Field>
Json coeffs_json(const TruncSeries<Field>& f) {
  Json out = Json::array();
  for (const auto& c : f.higher_coeffs()) out.push_back(to_json(c));
  return out;
}

template <class Field>
Output series_output(const TruncSeries<Field>& f) {
  Output out;
  out.data = {{"field", f.field().name()},
              {"precision", f.precision()},
              {"coeffs", coeffs_json(f)},
              {"polynomial", to_polynomial_string(f)}};
  out.header = {"degree", "coeff"};
  int d = 2;
  for (const auto& c : f.higher_coeffs()) out.rows.push_back({d++, to_json(c)});
  return out;
}

// ---- rendering --------------------------------------------------------------

inline std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "none";
  if (v.is_number_float()) return shortest(v.get<double>());
  if (v.is_array()) {
    if (v.empty()) return "[]";
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ", ") + scalar_text(e);
    return s;
  }
  return v.dump();
}

inline bool is_flat(const Json& v) {
  if (v.is_object()) return false;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (e.is_structured()) return false;
    }
  }
  return true;
}

inline void render_text(const Json& v, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      if (is_flat(value)) {
        os << pad << key << ": " << scalar_text(value) << "\n";
      } else {
        os << pad << key << ":\n";
        render_text(value, os, indent + 2);
      }
    }
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (is_flat(e)) {
        os << pad << "- " << scalar_text(e) << "\n";
      } else {
        os << pad << "-\n";
        render_text(e, os, indent + 2);
      }
    }
  } else {
    os << pad << scalar_text(v) << "\n";
  }
}

inline std::string csv_cell(const Json& v) {
  std::string s = v.is_array() ? [&] {
    std::string joined;
    for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar_text(e);
    return joined;
  }()
                               : (v.is_null() ? std::string() : scalar_text(v));
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  return s;
}

inline void render_csv(const Output& out, std::ostream& os) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  if (!out.header.empty()) {
    line(out.header);
    for (const auto& row : out.rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(csv_cell(c));
      line(cells);
    }
    return;
  }
  // No natural table: one row of the top-level fields.
  std::vector<std::string> header, cells;
  for (const auto& [key, value] : out.data.items()) {
    header.push_back(key);
    cells.push_back(csv_cell(value));
  }
  line(header);
  line(cells);
}

inline void render(const Output& out, const std::string& format, std::ostream& os) {
  if (format == "json") {
    os << out.data.dump(2) << "\n";
  } else if (format == "csv") {
    render_csv(out, os);
  } else {
    render_text(out.data, os, 0);
  }
}

// ---- commands ---------------------------------------------------------------

template <class Fn>
auto with_field(const std::string& field_text, Fn&& fn) {
  return std::visit([&](const auto& field) { return fn(field); }, parse_field(field_text));
}

template <class Field>
Output normal_form_output(const TruncSeries<Field>& f) {
  const auto nf = takens_normal_form(f);
  Output out;
  out.data = {{"field", f.field().name()}, {"precision", f.precision()}, {"flat", !nf.has_value()}};
  if (!nf) {
    out.data["r"] = nullptr;
    out.data["alpha"] = nullptr;
    out.data["beta"] = nullptr;
    out.data["beta_significant"] = false;
    out.data["conjugator"] = coeffs_json(TruncSeries<Field>::identity(f.field(), f.precision()));
    out.data["normalized"] = coeffs_json(f);
    return out;
  }
  out.data["r"] = nf->r;
  out.data["alpha"] = to_json(nf->alpha);
  out.data["beta"] = to_json(nf->beta);
  out.data["beta_significant"] = nf->beta_significant;
  out.data["conjugator"] = coeffs_json(nf->conjugator);
  out.data["normalized"] = coeffs_json(nf->normalized);
  return out;
}

inline Json prediction_json(const AsymptoticPrediction& p) {
  Json j = {{"b", p.b.to_string()},
            {"C_base", p.c_base.to_string()},
            {"C_root", p.c_root},
            {"C", p.c_value},
            {"gamma", p.gamma ? Json(p.gamma->to_string()) : Json(nullptr)},
            {"correction_orders", p.correction_orders},
            {"log_correction_order", p.log_correction_order ? Json(*p.log_correction_order) : Json(nullptr)}};
  return j;
}

inline Output asymptotics_output(const TruncSeries<Rationals>& f) {
  const auto nf = takens_normal_form(f);
  if (!nf) throw Error(ErrorKind::NegativeAlpha, "the identity has no decay asymptotics");
  const auto p = predicted_asymptotics(*nf);
  Output out;
  out.data = {{"r", nf->r}, {"alpha", nf->alpha.to_string()}, {"beta", nf->beta.to_string()}};
  const Json predicted = prediction_json(p);
  for (const auto& [key, value] : predicted.items()) out.data[key] = value;
  return out;
}

inline Json pelement_coeffs(const PElement& e) { return e.coeffs(); }

inline Output census_output(const ClassCensus& c) {
  Output out;
  Json classes = Json::array();
  out.header = {"rep_index", "rep_coeffs", "size"};
  for (const auto& cls : c.classes) {
    classes.push_back(
        {{"rep_index", cls.representative.index()}, {"rep_coeffs", pelement_coeffs(cls.representative)}, {"size", cls.size}});
    out.rows.push_back({cls.representative.index(), pelement_coeffs(cls.representative), cls.size});
  }
  out.data = {{"p", c.p}, {"order", c.order}, {"classes", std::move(classes)}};
  return out;
}

inline Output reps_output(std::uint32_t p) {
  Output out;
  Json reps = Json::array();
  out.header = {"index", "coeffs", "r", "alpha", "beta"};
  for (const auto& e : representative_list(p)) {
    const auto nf = takens_normal_form(e.to_series());
    const Json r = nf ? Json(nf->r) : Json(0);
    const Json alpha = nf ? Json(nf->alpha.residue()) : Json(nullptr);
    const Json beta = nf ? Json(nf->beta.residue()) : Json(nullptr);
    reps.push_back({{"index", e.index()}, {"coeffs", pelement_coeffs(e)}, {"r", r}, {"alpha", alpha}, {"beta", beta}});
    out.rows.push_back({e.index(), pelement_coeffs(e), r, alpha, beta});
  }
  out.data = {{"p", p}, {"count", reps.size()}, {"representatives", std::move(reps)}};
  return out;
}

inline Output count_output(std::uint32_t p) {
  (void)PrimeField(p);
  const std::uint64_t pp = p;
  Output out;
  out.data = {{"p", p},
              {"order", to_json(boost::multiprecision::pow(BigInt(p), p + 1))},
              {"class_count", class_count_formula(pp)},
              {"representative_count", pp * (pp - 1) * (pp + 1)}};
  return out;
}

inline Output qbound_output(const std::string& n_text) {
  const BigInt n = detail::parse_digits(n_text, 0);
  const auto q = qN_bound(n);
  Output out;
  out.data = {{"N", to_json(n)},
              {"p", q.p},
              {"order", to_json(q.order)},
              {"class_count", q.class_count},
              {"representative_count", q.representative_count},
              {"crude_bound", q.crude_bound}};
  return out;
}

inline Output landau_output(int k) {
  const auto res = landau_enumerate(k);
  Output out;
  Json sols = Json::array();
  for (int i = 1; i <= k; ++i) out.header.push_back("m" + std::to_string(i));
  for (const auto& s : res.solutions) {
    sols.push_back(s.parts);
    std::vector<Json> row(s.parts.begin(), s.parts.end());
    out.rows.push_back(std::move(row));
  }
  out.data = {{"k", k}, {"solutions", std::move(sols)}, {"max_order", res.max_order}};
  return out;
}

inline Output verify_output(const CensusReport& r) {
  Output out;
  out.data = {{"p", r.p},
              {"expected_classes", r.expected_classes},
              {"observed_classes", r.observed_classes},
              {"class_count_ok", r.class_count_ok},
              {"bijection_ok", r.bijection_ok},
              {"class_equation_ok", r.class_equation_ok},
              {"class_equation_sum", r.class_equation_sum.to_string()},
              {"centralizer_orders", r.centralizer_orders},
              {"failures", r.failures},
              {"ok", r.ok()}};
  return out;
}

/// Normal form of the map's Taylor expansion, carried far enough that the
/// x^{2r+1} coefficient is significant.
inline NormalForm<Rationals> map_normal_form(const RealMapSpec& spec) {
  int n = spec.kind == RealMapSpec::Kind::Sine ? 7 : static_cast<int>(spec.coeffs.size()) + 1;
  auto nf = takens_normal_form(spec.taylor(n));
  if (!nf) throw Error(ErrorKind::BasinViolation, "the identity map has no attracting fixed point");
  if (2 * nf->r + 1 > n) nf = takens_normal_form(spec.taylor(2 * nf->r + 1));
  return *nf;
}

inline Json map_json(const RealMapSpec& spec) { return {{"map", spec.name()}, {"x0", spec.x0}}; }

inline Output iterate_output(const RealMapSpec& spec, std::uint64_t n_max, const std::vector<std::uint64_t>& extra) {
  validate_map(spec);
  const auto trace = iterate_map(spec, n_max, extra);
  Output out;
  out.data = map_json(spec);
  out.data["n_max"] = n_max;
  Json points = Json::array();
  out.header = {"n", "x_n"};
  for (const auto& c : trace.points) {
    points.push_back({{"n", c.n}, {"x", c.x}});
    out.rows.push_back({c.n, c.x});
  }
  out.data["points"] = std::move(points);
  return out;
}

inline Output estimate_output(const RealMapSpec& spec, const std::vector<int>& ms, const std::vector<std::uint64_t>& ns,
                              std::optional<int> r_opt) {
  validate_map(spec);
  const int r = r_opt ? *r_opt : map_normal_form(spec).r;
  std::uint64_t n_max = 0;
  for (int m : ms) {
    if (m < 1 || m > 40) throw Error(ErrorKind::OutOfRange, "m must be in [1, 40]");
    n_max = std::max(n_max, std::uint64_t{1} << static_cast<unsigned>(m));
  }
  for (auto n : ns) n_max = std::max(n_max, n);
  const auto trace = iterate_map(spec, n_max, ns);
  Output out;
  out.data = map_json(spec);
  out.data["r"] = r;
  Json bs = Json::array(), cs = Json::array();
  out.header = {"estimator", "index", "value"};
  for (int m : ms) {
    const double v = estimate_b(trace, m);
    bs.push_back({{"m", m}, {"value", v}});
    out.rows.push_back({"b", m, v});
  }
  for (auto n : ns) {
    const double v = estimate_C(trace, r, n);
    cs.push_back({{"n", n}, {"value", v}});
    out.rows.push_back({"C^r", n, v});
  }
  out.data["b_estimates"] = std::move(bs);
  out.data["C_estimates"] = std::move(cs);
  return out;
}

inline Output fit_output(const RealMapSpec& spec, std::uint64_t lo, std::uint64_t hi, int points) {
  validate_map(spec);
  if (lo < 1 || hi <= lo) throw Error(ErrorKind::OutOfRange, "window needs 1 <= lo < hi");
  const auto prediction = predicted_asymptotics(map_normal_form(spec));
  const auto trace = iterate_map(spec, hi, log_spaced(lo, hi, points));
  const auto fit = fit_gamma(trace, prediction, {lo, hi});
  Output out;
  out.data = {{"b_hat", fit.b_hat},
              {"C_hat", fit.C_hat},
              {"gamma_hat", fit.gamma_hat},
              {"window", {fit.window.lo, fit.window.hi}},
              {"residual_norm", fit.residual_norm},
              {"points", fit.points}};
  const Json map = map_json(spec);
  for (const auto& [key, value] : map.items()) out.data[key] = value;
  out.data["predicted"] = prediction_json(prediction);
  return out;
}

inline Output sandwich_output(const RealMapSpec& spec, double delta, double grid_max, int grid_points,
                              std::uint64_t n_max) {
  validate_map(spec);
  if (!(grid_max > 0) || grid_points < 1) throw Error(ErrorKind::OutOfRange, "grid needs grid_max > 0 and points >= 1");
  const auto nf = map_normal_form(spec);
  if (nf.alpha.sign() <= 0) throw Error(ErrorKind::NegativeAlpha, "alpha must be positive");
  const PowerTransport transport{nf.r, nf.alpha.to_double()};
  std::vector<double> grid;
  for (int i = 1; i <= grid_points; ++i) grid.push_back(grid_max * i / grid_points);
  for (double z = grid_max / grid_points / 1.5; z > 1e-7; z /= 1.5) grid.push_back(z);
  const auto report = sandwich_check(spec, transport, delta, grid, n_max);
  Output out;
  out.data = map_json(spec);
  out.data["r"] = nf.r;
  out.data["alpha"] = nf.alpha.to_string();
  out.data["delta"] = delta;
  out.data["grid_points"] = report.grid_points;
  out.data["lower_violations"] = report.lower_violations;
  out.data["upper_violations"] = report.upper_violations;
  out.data["shift_k"] = report.shift_k ? Json(*report.shift_k) : Json(nullptr);
  out.data["trace_points"] = report.trace_points;
  out.data["pointwise_ok"] = report.pointwise_ok();
  out.data["ok"] = report.ok();
  return out;
}

// ---- argument parsing -------------------------------------------------------

inline unsigned default_threads() {
  if (const char* env = std::getenv("GERM_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v > 0) return v;
  }
  return 1;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs the command line `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formal changes of variable tangent to the identity: series algebra, normal forms, "
               "the p-groups G_p(F_p) and orbit asymptotics."};
  app.name("germ");
  app.require_subcommand(1);

  std::string format = "json";
  std::string out_file;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", out_file, "Write output to FILE instead of stdout");
  };

  std::optional<Output> result;
  int exit_code = 0;

  std::string field = "Q", f_text, g_text, coeffs;
  auto* series = app.add_subcommand("series", "Truncated series over Q or F_p")->require_subcommand(1);
  auto* s_compose = series->add_subcommand("compose", "f o g");
  auto* s_invert = series->add_subcommand("invert", "Compositional inverse");
  auto* s_conj = series->add_subcommand("conjugate", "g^{-1} o f o g");
  auto* s_nf = series->add_subcommand("normal-form", "Normal form x - alpha x^{r+1} + beta x^{2r+1}");
  auto* s_asym = series->add_subcommand("asymptotics", "Predicted decay of orbits (over Q)");
  for (auto* sub : {s_compose, s_conj}) {
    sub->add_option("--field", field, "Q or Fp:<p>");
    sub->add_option("--f", f_text, "Coefficients a_2,...,a_N of f")->required();
    sub->add_option("--g", g_text, "Coefficients of g")->required();
    common(sub);
  }
  for (auto* sub : {s_invert, s_nf}) {
    sub->add_option("--field", field, "Q or Fp:<p>");
    sub->add_option("--coeffs", coeffs, "Coefficients a_2,...,a_N")->required();
    common(sub);
  }
  s_asym->add_option("--coeffs", coeffs, "Coefficients a_2,...,a_N over Q")->required();
  common(s_asym);

  std::uint32_t p = 0;
  unsigned threads = default_threads();
  bool large = false;
  std::string n_text;
  int k = 0;
  auto* pgroup = app.add_subcommand("pgroup", "The finite p-groups G_p(F_p)")->require_subcommand(1);
  auto* p_census = pgroup->add_subcommand("census", "Conjugacy classes of G_p(F_p)");
  auto* p_reps = pgroup->add_subcommand("reps", "Predicted class representatives");
  auto* p_count = pgroup->add_subcommand("count", "Predicted class count");
  auto* p_qbound = pgroup->add_subcommand("qbound", "Smallest p with N <= p^{p+1}");
  auto* p_landau = pgroup->add_subcommand("landau", "Solutions of sum 1/m_i = 1 with k parts");
  auto* p_verify = pgroup->add_subcommand("verify", "Census against the predicted class list");
  for (auto* sub : {p_census, p_reps, p_count, p_verify}) {
    sub->add_option("--p", p, "Prime")->required();
    common(sub);
  }
  for (auto* sub : {p_census, p_verify}) {
    sub->add_option("--threads", threads, "Worker threads (default: GERM_THREADS or 1)")->check(CLI::PositiveNumber);
    sub->add_flag("--large", large, "Allow p = 7");
  }
  p_qbound->add_option("--N", n_text, "Group order to reach")->required();
  common(p_qbound);
  p_landau->add_option("--k", k, "Number of parts (1..6)")->required();
  common(p_landau);

  std::string map_name = "sin", poly;
  std::optional<double> x0, eps;
  std::uint64_t n_max = 0;
  std::vector<std::uint64_t> checkpoints, ns;
  std::vector<int> ms;
  std::optional<int> r_opt;
  std::uint64_t lo = 10000, hi = 1000000;
  int points = 200, grid_points = 500;
  double delta = 0.9, grid_max = 0.05;
  auto* dyn = app.add_subcommand("dyn", "Real orbits x_{n+1} = f(x_n)")->require_subcommand(1);
  auto* d_iter = dyn->add_subcommand("iterate", "Orbit checkpoints");
  auto* d_est = dyn->add_subcommand("estimate", "Exponent and constant estimators");
  auto* d_fit = dyn->add_subcommand("fit", "Least-squares fit of the log(n)/n coefficient");
  auto* d_sand = dyn->add_subcommand("sandwich", "Comparator sandwich check");
  for (auto* sub : {d_iter, d_est, d_fit, d_sand}) {
    sub->add_option("--map", map_name, "sin or poly")->check(CLI::IsMember({"sin", "poly"}));
    sub->add_option("--coeffs", poly, "Coefficients a_2,...,a_N over Q (poly maps)");
    sub->add_option("--x0", x0, "Starting point (default 1 for sin, 0.5 for poly)");
    sub->add_option("--eps", eps, "Basin bound (default 3 for sin, 1 for poly)");
    common(sub);
  }
  d_iter->add_option("--n-max", n_max, "Number of steps")->required();
  d_iter->add_option("--checkpoint", checkpoints, "Extra checkpoint indices")->delimiter(',');
  d_est->add_option("--m", ms, "Exponents m for -(1/m) log2 x_{2^m}")->delimiter(',');
  d_est->add_option("--n", ns, "Indices n for n x_n^r")->delimiter(',');
  d_est->add_option("--r", r_opt, "Power r (default from the normal form)")->check(CLI::PositiveNumber);
  d_fit->add_option("--lo", lo, "Window start");
  d_fit->add_option("--hi", hi, "Window end");
  d_fit->add_option("--points", points, "Log-spaced checkpoints in the window")->check(CLI::Range(20, 100000));
  d_sand->add_option("--delta", delta, "Comparator exponent in (0, 1)");
  d_sand->add_option("--grid-max", grid_max, "Grid upper end in transported coordinates");
  d_sand->add_option("--grid-points", grid_points, "Evenly spaced grid points");
  d_sand->add_option("--n-max", n_max, "Orbit length for the shift search");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto real_map = [&]() -> RealMapSpec {
    if (map_name == "sin") {
      if (!poly.empty()) throw UsageError("--coeffs is only valid with --map poly");
      return RealMapSpec::sine(x0.value_or(1.0), eps.value_or(3.0));
    }
    if (poly.empty()) throw UsageError("--map poly requires --coeffs");
    return RealMapSpec::polynomial(parse_series(poly, Rationals{}), x0.value_or(0.5), eps.value_or(1.0));
  };

  try {
    if (s_compose->parsed()) {
      result = with_field(field, [&](const auto& fd) {
        return series_output(compose(parse_series(f_text, fd), parse_series(g_text, fd)));
      });
    } else if (s_invert->parsed()) {
      result = with_field(field, [&](const auto& fd) { return series_output(invert(parse_series(coeffs, fd))); });
    } else if (s_conj->parsed()) {
      result = with_field(field, [&](const auto& fd) {
        return series_output(conjugate(parse_series(f_text, fd), parse_series(g_text, fd)));
      });
    } else if (s_nf->parsed()) {
      result = with_field(field, [&](const auto& fd) { return normal_form_output(parse_series(coeffs, fd)); });
    } else if (s_asym->parsed()) {
      result = asymptotics_output(parse_series(coeffs, Rationals{}));
    } else if (p_census->parsed()) {
      if (large && p != 7) throw UsageError("--large only applies to --p 7");
      result = census_output(class_census(p, threads, large));
    } else if (p_reps->parsed()) {
      (void)group_order(p);
      result = reps_output(p);
    } else if (p_count->parsed()) {
      result = count_output(p);
    } else if (p_qbound->parsed()) {
      result = qbound_output(n_text);
    } else if (p_landau->parsed()) {
      result = landau_output(k);
    } else if (p_verify->parsed()) {
      if (large && p != 7) throw UsageError("--large only applies to --p 7");
      const auto report = verify_census_vs_theory(class_census(p, threads, large));
      result = verify_output(report);
      if (!report.ok()) {
        err << error_name(ErrorKind::CensusMismatch) << ": "
            << (report.failures.empty() ? std::string("verification failed") : report.failures.front()) << "\n";
        exit_code = 1;
      }
    } else if (d_iter->parsed()) {
      result = iterate_output(real_map(), n_max, checkpoints);
    } else if (d_est->parsed()) {
      if (ms.empty() && ns.empty()) throw UsageError("dyn estimate needs --m or --n");
      result = estimate_output(real_map(), ms, ns, r_opt);
    } else if (d_fit->parsed()) {
      result = fit_output(real_map(), lo, hi, points);
    } else if (d_sand->parsed()) {
      result = sandwich_output(real_map(), delta, grid_max, grid_points, n_max == 0 ? 100000 : n_max);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    err << "InternalError: " << e.what() << "\n";
    return 1;
  }

  if (!result) return exit_code;
  if (out_file.empty()) {
    render(*result, format, out);
  } else {
    std::ofstream file(out_file, std::ios::binary);
    if (!file) {
      err << "usage error: cannot open --out " << out_file << "\n";
      return 2;
    }
    render(*result, format, file);
  }
  return exit_code;
}

}  // namespace germ::cli

#endif  // GERM_CLI_APP_HPP
