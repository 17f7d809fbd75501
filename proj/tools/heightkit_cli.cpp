// heightkit: command-line front end. Output is CSV-style text by default or JSON with --output json.
#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "heightkit/arakelov.hpp"
#include "heightkit/counts.hpp"
#include "heightkit/errors.hpp"
#include "heightkit/fibration.hpp"
#include "heightkit/heights.hpp"
#include "heightkit/lattice.hpp"
#include "heightkit/selftest.hpp"
#include "heightkit/tamagawa.hpp"
#include "heightkit/textio.hpp"
#include "heightkit/twist.hpp"

using namespace heightkit;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kDigits = 19;  // long double: 64-bit mantissa

struct Config {
  int precision_bits = 64;
  Real eps = 1e-12L;
  std::string output = "csv";
  int threads = 1;
  bool json() const { return output == "json"; }
};

std::string dec(Real x) { return format_real(x, kDigits); }

std::string dec(Complex z) {
  if (z.imag() == 0) return dec(z.real());
  return dec(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + dec(std::fabs(z.imag())) + "i";
}

json exact_json(const ExactReal& x) {
  json j;
  j["exact"] = x.exact ? json(format_rat(*x.exact)) : json(nullptr);
  j["decimal"] = dec(x.value);
  return j;
}

json series_json(const SeriesValue& v) {
  return {{"value", dec(v.value)}, {"error_bound", dec(v.error_bound)}, {"terms", v.terms_used},
          {"rigorous", v.rigorous}};
}

void print_json(const std::string& command, json body) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = command;
  out["precision"] = "long double, " + std::to_string(kDigits) + " significant digits";
  for (auto& [k, v] : body.items()) out[k] = v;
  std::cout << out.dump(2) << "\n";
}

/// Exact value on one line (when known), then the decimal with its precision.
void print_exact(const ExactReal& x) {
  if (x.exact) std::cout << format_rat(*x.exact) << "\n";
  std::cout << "~ " << dec(x.value) << " (" << kDigits << " digits)\n";
}

void print_series(const SeriesValue& v) {
  std::cout << "value," << dec(v.value) << "\n"
            << "error_bound," << dec(v.error_bound) << (v.rigorous ? "" : " (estimate)") << "\n"
            << "terms," << v.terms_used << "\n";
}

Real parse_real(const std::string& t, const std::string& whole) {
  std::size_t used = 0;
  Real v = 0;
  try {
    v = std::stold(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ValidationError("bad number '" + whole + "' (use e.g. 2, 0.7+0.3i)");
  return v;
}

// "2", "-1.5", "0.7+0.3i", "2-i", "3i"
Complex parse_complex(const std::string& text) {
  if (text.empty() || text.back() != 'i') return {parse_real(text, text), 0};
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < body.size(); ++k)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') split = k;
  const std::string re = split == std::string::npos ? "0" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+" || im == "-") im += "1";
  return {parse_real(re, text), parse_real(im, text)};
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw ValidationError("bad integer list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty integer list");
  return out;
}

ProjPoint point_from(const std::vector<std::string>& coords, std::size_t n) {
  if (coords.size() != n + 1) throw ValidationError("expected " + std::to_string(n + 1) + " coordinates");
  RatVector x;
  for (const auto& c : coords) x.push_back(parse_rat(c));
  return ProjPoint::from_rats(x);
}

std::vector<Real> parse_reals(const std::vector<std::string>& items) {
  std::vector<Real> out;
  for (const auto& s : items) out.push_back(to_real(parse_rat(s)));
  return out;
}

// ---------------------------------------------------------------- height / twist

struct HeightArgs {
  std::size_t n = 1;
  long m = 1;
  std::string arch = "max";
  std::vector<std::string> coords;
};

void add_point_args(CLI::App* c, HeightArgs& a) {
  c->add_option("n", a.n, "dimension of P^n")->required()->check(CLI::Range(1, 64));
  c->add_option("m", a.m, "degree of O(m)")->required();
  c->add_option("arch", a.arch, "archimedean metric: max or l2")->required();
  c->add_option("coords", a.coords, "n+1 rational coordinates")->required();
}

void cmd_height(const Config& cfg, const HeightArgs& a) {
  const MetrizedLineBundle L{a.n, a.m, parse_arch(a.arch)};
  const ProjPoint x = point_from(a.coords, a.n);
  const ExactReal h = height_point(L, x);
  if (cfg.json())
    print_json("height", {{"point", x.to_string()}, {"height", exact_json(h)}});
  else
    print_exact(h);
}

void cmd_twist(const Config& cfg, const HeightArgs& a, const std::string& file, bool compare,
               const std::string& section) {
  const MetrizedLineBundle L{a.n, a.m, parse_arch(a.arch)};
  const ProjPoint x = point_from(a.coords, a.n);
  const AdelicGroupElement g = load_twist(file);
  if (g.size() != a.n + 1) throw ValidationError("twist rank does not match n + 1");
  if (!compare) {
    const ExactReal h = twisted_height(L, g, x);
    if (cfg.json())
      print_json("twist", {{"point", x.to_string()}, {"twisted_height", exact_json(h)}});
    else
      print_exact(h);
    return;
  }
  const Form s = parse_form(section, a.n + 1);
  const TwistComparison c = compare_twisted(L, g, s, x);
  const bool exact_equal = c.lhs.exact && c.rhs.exact && *c.lhs.exact == *c.rhs.exact;
  if (cfg.json()) {
    print_json("twist --compare", {{"point", x.to_string()},
                                   {"section", s.to_string()},
                                   {"lhs", exact_json(c.lhs)},
                                   {"rhs", exact_json(c.rhs)},
                                   {"exact_equal", exact_equal}});
  } else {
    std::cout << "side,exact,decimal\n"
              << "lhs," << (c.lhs.exact ? format_rat(*c.lhs.exact) : "") << "," << dec(c.lhs.value) << "\n"
              << "rhs," << (c.rhs.exact ? format_rat(*c.rhs.exact) : "") << "," << dec(c.rhs.value) << "\n"
              << "exact_equal," << (exact_equal ? "true" : "false") << "\n";
  }
}

// ---------------------------------------------------------------- lattice

void cmd_lattice(const Config& cfg, const std::string& what, const std::string& gram, Real t, const std::string& s_text) {
  const HermitianLattice l = load_gram(gram);
  json body{{"rank", l.rank()}, {"vol", exact_json(vol(l))}};
  if (what == "theta") {
    if (!(t > 0)) throw ValidationError("t must be positive");
    const SeriesValue v = theta(l, t, cfg.eps);
    body["t"] = dec(t);
    body["theta"] = series_json(v);
    if (cfg.json()) return print_json("lattice theta", body);
    print_series(v);
  } else if (what == "zeta" || what == "lambda") {
    const Complex s = parse_complex(s_text);
    const SeriesValue v = what == "zeta" ? lattice_zeta(l, s, cfg.eps) : completed_lambda(l, s, cfg.eps);
    body["s"] = dec(s);
    body[what] = series_json(v);
    if (cfg.json()) return print_json("lattice " + what, body);
    print_series(v);
  } else {
    if (!(t > 0)) throw ValidationError("t must be positive");
    const FunctionalEquationCheck c = theta_functional_equation_defect(l, t, cfg.eps);
    body["t"] = dec(t);
    body["lhs"] = series_json(c.lhs);
    body["rhs"] = series_json(c.rhs);
    body["defect"] = dec(c.defect);
    body["bound"] = dec(c.bound);
    body["within_bound"] = c.defect <= c.bound;
    if (cfg.json()) return print_json("lattice check-fe", body);
    std::cout << "lhs," << dec(c.lhs.value) << "\nrhs," << dec(c.rhs.value) << "\ndefect," << dec(c.defect)
              << "\nbound," << dec(c.bound) << "\nwithin_bound," << (c.defect <= c.bound ? "true" : "false") << "\n";
  }
}

// ---------------------------------------------------------------- arakelov

struct ArakelovArgs {
  std::string degrees = "1";
  std::string s = "4";
  std::uint64_t cutoff = 10;
  std::string arch = "max";
  std::string phi = "theta";
  bool duality = false;
  std::uint64_t grouped = 0;
  bool terms = false;
  std::vector<std::string> probe;
};

void cmd_arakelov(const Config& cfg, const ArakelovArgs& a) {
  ArakelovSeriesSpec spec;
  spec.bundle_degrees.clear();
  for (auto d : parse_ints(a.degrees)) spec.bundle_degrees.push_back(d);
  spec.arch = parse_arch(a.arch);
  spec.s = parse_complex(a.s);
  spec.cutoff = a.cutoff;
  spec.phi_kind = parse_phi_kind(a.phi);

  if (a.grouped > 0) {
    const GroupedSeries g = grouped_series_coefficients(spec.bundle_degrees, spec.s, a.grouped, cfg.eps);
    if (cfg.json()) {
      json rows = json::array();
      for (const auto& c : g.coefficients)
        rows.push_back({{"N", c.N}, {"c_N", c.count}, {"printed_coefficient", c.printed_count},
                        {"theta", dec(c.theta)}, {"term", dec(c.term)}});
      return print_json("arakelov --grouped", {{"s", dec(spec.s)},
                                               {"coefficients", rows},
                                               {"grouped_sum", dec(g.grouped_sum)},
                                               {"direct", series_json(g.direct)},
                                               {"exact_match", g.exact_match}});
    }
    std::cout << "N,c_N,printed_coefficient,theta,term\n";
    for (const auto& c : g.coefficients)
      std::cout << c.N << "," << c.count << "," << c.printed_count << "," << dec(c.theta) << "," << dec(c.term) << "\n";
    std::cout << "# grouped_sum," << dec(g.grouped_sum) << "\n# direct," << dec(g.direct.value)
              << "\n# exact_match," << (g.exact_match ? "true" : "false") << "\n";
    return;
  }
  if (a.duality) {
    const DualityCheck c = theta_duality_defect(spec, cfg.eps);
    if (cfg.json())
      return print_json("arakelov --duality", {{"s", dec(spec.s)},
                                               {"lhs", series_json(c.lhs)},
                                               {"rhs", series_json(c.rhs)},
                                               {"defect", dec(c.defect)},
                                               {"bound", dec(c.bound)}});
    std::cout << "lhs," << dec(c.lhs.value) << "\nrhs," << dec(c.rhs.value) << "\ndefect," << dec(c.defect)
              << "\nbound," << dec(c.bound) << "\n";
    return;
  }
  if (!a.probe.empty()) {
    std::vector<Complex> grid;
    for (const auto& s : a.probe) grid.push_back(parse_complex(s));
    const auto rows = convergence_abscissa_probe(spec, grid, cfg.eps);
    if (cfg.json()) {
      json out = json::array();
      for (const auto& r : rows)
        out.push_back({{"s", dec(r.s)}, {"partial_B", dec(r.partial_b)}, {"partial_2B", dec(r.partial_2b)},
                       {"partial_4B", dec(r.partial_4b)}, {"growth_exponent", dec(r.growth_exponent)},
                       {"convergent", r.convergent}});
      return print_json("arakelov --probe", {{"cutoff", spec.cutoff}, {"rows", out}});
    }
    std::cout << "s,partial_B,partial_2B,partial_4B,growth_exponent,convergent\n";
    for (const auto& r : rows)
      std::cout << dec(r.s) << "," << dec(r.partial_b) << "," << dec(r.partial_2b) << "," << dec(r.partial_4b) << ","
                << dec(r.growth_exponent) << "," << (r.convergent ? "true" : "false") << "\n";
    return;
  }
  std::vector<ArakelovTerm> terms;
  const SeriesValue v = arakelov_L_partial(spec, cfg.eps, &terms);
  if (cfg.json()) {
    json body{{"s", dec(spec.s)}, {"phi", to_string(spec.phi_kind)}, {"cutoff", spec.cutoff}, {"series", series_json(v)}};
    if (a.terms) {
      json rows = json::array();
      for (const auto& t : terms)
        rows.push_back({{"b", t.b.to_string()}, {"height", exact_json(t.height)}, {"vol", exact_json(t.vol)},
                        {"phi", dec(t.phi)}, {"term", dec(t.term)}, {"error_bound", dec(t.error_bound)}});
      body["terms"] = rows;
    }
    return print_json("arakelov", body);
  }
  print_series(v);
  if (a.terms) {
    std::cout << "b,height,vol,phi,term,error_bound\n";
    for (const auto& t : terms)
      std::cout << '"' << t.b.to_string() << "\"," << dec(t.height.value) << "," << dec(t.vol.value) << ","
                << dec(t.phi) << "," << dec(t.term) << "," << dec(t.error_bound) << "\n";
  }
}

// ---------------------------------------------------------------- count / zeta / fit

struct CountArgs {
  std::size_t n = 1;
  long m = 1;
  std::string arch = "max";
  std::vector<std::string> H;
  std::string s = "3";
  bool grouped = false;
  std::string pin_a, pin_b;
  Real top_fraction = 0.6L;
};

MetrizedLineBundle bundle_of(const CountArgs& a) { return {a.n, a.m, parse_arch(a.arch)}; }

void cmd_count(const Config& cfg, const CountArgs& a) {
  const auto L = bundle_of(a);
  json rows = json::array();
  if (!cfg.json()) std::cout << "H,count\n";
  for (const auto& h : a.H) {
    const std::uint64_t c = count_points(L, parse_rat(h));
    if (cfg.json())
      rows.push_back({{"H", h}, {"count", c}});
    else
      std::cout << h << "," << c << "\n";
  }
  if (cfg.json()) print_json("count", {{"n", a.n}, {"m", a.m}, {"arch", a.arch}, {"table", rows}});
}

void cmd_zeta(const Config& cfg, const CountArgs& a) {
  const auto L = bundle_of(a);
  const Complex s = parse_complex(a.s);
  json rows = json::array();
  if (!cfg.json()) std::cout << "H,partial_sum,terms\n";
  for (const auto& h : a.H) {
    const SeriesValue v = a.grouped ? height_zeta_partial_grouped(L, s, parse_rat(h)) : height_zeta_partial(L, s, parse_rat(h));
    if (cfg.json())
      rows.push_back({{"H", h}, {"partial_sum", dec(v.value)}, {"terms", v.terms_used}});
    else
      std::cout << h << "," << dec(v.value) << "," << v.terms_used << "\n";
  }
  if (cfg.json()) print_json("zeta", {{"n", a.n}, {"m", a.m}, {"arch", a.arch}, {"s", dec(s)}, {"table", rows}});
}

void cmd_fit(const Config& cfg, const CountArgs& a) {
  const auto L = bundle_of(a);
  const CountTable table = count_table(L, parse_reals(a.H));
  FitOptions opt;
  if (!a.pin_a.empty()) opt.pin_a = to_real(parse_rat(a.pin_a));
  if (!a.pin_b.empty()) opt.pin_b = to_real(parse_rat(a.pin_b));
  opt.top_fraction = a.top_fraction;
  const AsymptoticFit f = fit_asymptotics(table, opt);
  if (cfg.json()) {
    json rows = json::array();
    for (std::size_t i = 0; i < table.counts.size(); ++i)
      rows.push_back({{"H", dec(table.thresholds[i])}, {"count", table.counts[i]}, {"model", dec(f.model(table.thresholds[i]))}});
    return print_json("fit", {{"a", dec(f.a)}, {"b", dec(f.b)}, {"theta", dec(f.theta)}, {"residual", dec(f.residual)},
                              {"points_used", f.points_used}, {"table", rows}});
  }
  std::cout << "a," << dec(f.a) << "\nb," << dec(f.b) << "\ntheta," << dec(f.theta) << "\nresidual," << dec(f.residual)
            << "\npoints_used," << f.points_used << "\nH,count,model\n";
  for (std::size_t i = 0; i < table.counts.size(); ++i)
    std::cout << dec(table.thresholds[i]) << "," << table.counts[i] << "," << dec(f.model(table.thresholds[i])) << "\n";
}

// ---------------------------------------------------------------- hirzebruch

struct FnArgs {
  long n = 1;
  std::string cls = "2,1,2";
  std::string arch = "max";
  std::string point;
  std::string bound = "10";
  bool exclude_exceptional = false;
};

FibrationLineClass class_of(const std::string& text) {
  const auto v = parse_ints(text);
  if (v.size() != 3) throw ValidationError("a line class is k,w,j");
  return {v[0], v[1], v[2]};
}

FnPoint fn_point(const HirzebruchSurface& Y, const std::string& text) {
  const auto v = parse_ints(text);
  if (v.size() != 4) throw ValidationError("a point of F_n is u,v,s,t");
  return FnPoint::from_cox(Y, v);
}

void cmd_hirzebruch(const Config& cfg, const std::string& what, const FnArgs& a) {
  const auto Y = HirzebruchSurface::make(a.n);
  const auto arch = parse_arch(a.arch);
  if (what == "anticanonical") {
    const auto K = anticanonical_class(Y);
    const std::string k = std::to_string(K.k) + "," + std::to_string(K.w) + "," + std::to_string(K.j);
    if (cfg.json())
      return print_json("hirzebruch anticanonical", {{"n", a.n}, {"class", {K.k, K.w, K.j}},
                                                     {"base_exponent", K.base_exponent(Y.n)},
                                                     {"effective", is_effective(Y, K)}});
    std::cout << "k,w,j\n" << k << "\n";
    return;
  }
  const auto c = class_of(a.cls);
  if (what == "height") {
    const auto P = fn_point(Y, a.point);
    const auto h = height_Fn(Y, c, P, arch);
    if (cfg.json()) return print_json("hirzebruch height", {{"point", P.to_string()}, {"height", exact_json(h)}});
    print_exact(h);
  } else if (what == "check-shift") {
    const auto P = fn_point(Y, a.point);
    const auto [lhs, rhs] = character_shift_invariance(Y, c, P, arch);
    // Exact comparison when both sides are rational, bitwise otherwise (L2 heights involve square roots).
    const bool equal = lhs.exact && rhs.exact ? *lhs.exact == *rhs.exact : lhs.value == rhs.value;
    if (cfg.json())
      return print_json("hirzebruch check-shift",
                        {{"point", P.to_string()}, {"lhs", exact_json(lhs)}, {"rhs", exact_json(rhs)}, {"equal", equal}});
    std::cout << "lhs," << dec(lhs.value) << "\nrhs," << dec(rhs.value) << "\nequal," << (equal ? "true" : "false")
              << "\n";
  } else {
    FnEnumerationOptions opt;
    opt.exclude_exceptional = a.exclude_exceptional;
    const auto pts = enumerate_Fn(Y, c, arch, parse_rat(a.bound), opt);
    if (cfg.json()) {
      json rows = json::array();
      for (const auto& P : pts) rows.push_back({{"point", P.to_string()}, {"height", exact_json(height_Fn(Y, c, P, arch))}});
      return print_json("hirzebruch enumerate", {{"n", a.n}, {"bound", a.bound}, {"count", pts.size()}, {"points", rows}});
    }
    std::cout << "point,height\n";
    for (const auto& P : pts) std::cout << '"' << P.to_string() << "\"," << dec(height_Fn(Y, c, P, arch).value) << "\n";
    std::cout << "# count," << pts.size() << "\n";
  }
}

// ---------------------------------------------------------------- tamagawa

struct TamagawaArgs {
  std::string variety = "P1";
  std::string arch = "max";
  std::uint64_t primes = 100000;
  std::string sigma;
  bool peyre = false;
  std::string H = "1e6";
};

Variety variety_of(const std::string& name) {
  static const std::regex re("([PF])(-?[0-9]+)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) throw ValidationError("variety must be P<n> or F<n>");
  const long n = std::stol(m[2].str());
  return m[1] == "P" ? Variety::Pn(n) : Variety::Fn(n);
}

void cmd_tamagawa(const Config& cfg, const TamagawaArgs& a) {
  const Variety X = variety_of(a.variety);
  const auto arch = parse_arch(a.arch);
  if (a.peyre) {
    if (X.kind != Variety::Kind::PN) throw ValidationError("--peyre-check is available for P^n");
    const PeyreCheck c = peyre_constant_check(X.n, arch, a.primes, to_real(parse_rat(a.H)));
    if (cfg.json())
      return print_json("tamagawa --peyre-check", {{"variety", X.name()}, {"predicted", dec(c.predicted)},
                                                   {"fitted", dec(c.fit.theta)}, {"relative_gap", dec(c.relative_gap)}});
    std::cout << "predicted," << dec(c.predicted) << "\nfitted," << dec(c.fit.theta) << "\nrelative_gap,"
              << dec(c.relative_gap) << "\n";
    return;
  }
  TamagawaSpec spec{X, arch, a.primes, {}, std::min<Real>(cfg.eps * 100, 1e-10L)};
  if (!a.sigma.empty())
    for (auto p : parse_ints(a.sigma)) {
      if (p < 2) throw ValidationError("primes in Sigma must be at least 2");
      spec.sigma_primes.push_back(static_cast<std::uint64_t>(p));
    }
  const TamagawaReport r = tamagawa_number(spec);
  json factors = json::array();
  for (const auto& f : r.first_factors)
    factors.push_back({{"p", f.p}, {"density", format_rat(f.density)}, {"convergence", format_rat(f.convergence)}});
  // The report is JSON in either output mode.
  print_json("tamagawa", {{"variety", X.name()},
                          {"arch", to_string(arch)},
                          {"prime_cutoff", a.primes},
                          {"sigma", spec.sigma_primes},
                          {"tau", dec(r.tau)},
                          {"mu_infinity", dec(r.mu_infinity)},
                          {"mu_infinity_exact", r.mu_infinity_exact ? json(format_rat(*r.mu_infinity_exact)) : json(nullptr)},
                          {"quadrature_error", dec(r.quadrature_error)},
                          {"l_star", dec(r.l_star)},
                          {"euler_product", dec(r.euler_product)},
                          {"tail_estimate", dec(r.tail_estimate)},
                          {"error_budget", dec(r.error_budget)},
                          {"primes_used", r.primes_used},
                          {"first_factors", factors}});
}

int fail(const char* kind, int code, const std::string& what) {
  std::cerr << "error: " << kind << ": " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heightkit: heights, lattices and point counts over Q"};
  app.footer(
      "CSV columns: count -> H,count; zeta -> H,partial_sum,terms; arakelov --terms -> b,height,vol,phi,term,error_bound;\n"
      "arakelov --grouped -> N,c_N,printed_coefficient,theta,term; fit -> H,count,model (after a,b,theta,residual);\n"
      "hirzebruch enumerate -> point,height.\n"
      "Exit codes: 0 ok, 1 other failure, 2 validation error, 3 capacity exceeded.");
  Config cfg;
  bool selftest = false;
  app.add_flag("--selftest", selftest, "run the property suite and exit");
  app.add_option("--precision-bits", cfg.precision_bits, "working precision (only 64 is supported)");
  app.add_option("--eps", cfg.eps, "target error for series and quadrature")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.threads, "worker threads (computations are sequential; accepted for compatibility)")
      ->check(CLI::PositiveNumber);
  app.require_subcommand(0, 1);

  HeightArgs ha;
  auto* height = app.add_subcommand("height", "height of a point of P^n for O(m)");
  add_point_args(height, ha);

  HeightArgs ta;
  std::string twist_file, section = "x0";
  bool compare = false;
  auto* twist = app.add_subcommand("twist", "twisted height from a twist description file");
  add_point_args(twist, ta);
  twist->add_option("--file", twist_file, "twist description file")->required();
  twist->add_flag("--compare", compare, "compare with prod_v |chi(g_v)|^-1 H(L, s; g.x)");
  twist->add_option("--section", section, "monomial section for --compare, e.g. x0*x1");

  std::string lattice_what, gram, s_text = "2";
  Real t = 1;
  auto* lattice = app.add_subcommand("lattice", "theta, zeta and Lambda of a lattice");
  lattice->add_option("what", lattice_what, "theta|zeta|lambda|check-fe")
      ->required()
      ->check(CLI::IsMember({"theta", "zeta", "lambda", "check-fe"}));
  lattice->add_option("--gram", gram, "Gram file or I<d>")->required();
  lattice->add_option("--t", t, "theta parameter");
  lattice->add_option("--s", s_text, "complex s, e.g. 2 or 0.7+0.3i");

  ArakelovArgs aa;
  auto* arakelov = app.add_subcommand("arakelov", "partial Arakelov L-series over P^1");
  arakelov->add_option("--degrees", aa.degrees, "bundle degrees, e.g. 1,2");
  arakelov->add_option("--s", aa.s, "complex s");
  arakelov->add_option("--cutoff", aa.cutoff, "height cutoff B");
  arakelov->add_option("--arch", aa.arch, "max or l2");
  arakelov->add_option("--phi", aa.phi, "theta, zeta or norm");
  arakelov->add_flag("--duality", aa.duality, "report the termwise duality defect");
  arakelov->add_option("--grouped", aa.grouped, "coefficient table for N up to this bound (max metric)");
  arakelov->add_flag("--terms", aa.terms, "print the per-term table");
  arakelov->add_option("--probe", aa.probe, "convergence probe at these s (B, 2B, 4B)");

  CountArgs ca;
  auto add_count_args = [&](CLI::App* c) {
    c->add_option("--n", ca.n, "dimension of P^n")->check(CLI::Range(1, 64));
    c->add_option("--m", ca.m, "degree of O(m)");
    c->add_option("--arch", ca.arch, "max or l2");
    c->add_option("--H", ca.H, "height bounds")->required();
  };
  auto* count = app.add_subcommand("count", "number of points with H <= bound");
  add_count_args(count);
  auto* zeta = app.add_subcommand("zeta", "partial height zeta sums");
  add_count_args(zeta);
  zeta->add_option("--s", ca.s, "complex s");
  zeta->add_flag("--grouped", ca.grouped, "group equal heights");
  auto* fit = app.add_subcommand("fit", "fit theta H^a (log H)^(b-1) to counts at the given bounds");
  add_count_args(fit);
  fit->add_option("--pin-a", ca.pin_a, "fix a");
  fit->add_option("--pin-b", ca.pin_b, "fix b");
  fit->add_option("--top-fraction", ca.top_fraction, "fraction of the largest bounds used");

  std::string fn_what;
  FnArgs fa;
  auto* hirz = app.add_subcommand("hirzebruch", "heights and points on F_n");
  hirz->add_option("what", fn_what, "height|enumerate|check-shift|anticanonical")
      ->required()
      ->check(CLI::IsMember({"height", "enumerate", "check-shift", "anticanonical"}));
  hirz->add_option("--n", fa.n, "twist n of F_n");
  hirz->add_option("--class", fa.cls, "line class k,w,j");
  hirz->add_option("--arch", fa.arch, "max or l2");
  hirz->add_option("--point", fa.point, "Cox coordinates u,v,s,t");
  hirz->add_option("--bound", fa.bound, "height bound for enumerate");
  hirz->add_flag("--exclude-exceptional", fa.exclude_exceptional, "drop points on the section s = 0");

  TamagawaArgs tg;
  auto* tama = app.add_subcommand("tamagawa", "Tamagawa number report (JSON)");
  tama->add_option("--variety", tg.variety, "P<n> or F<n>");
  tama->add_option("--arch", tg.arch, "max or l2");
  tama->add_option("--primes", tg.primes, "Euler product cutoff");
  tama->add_option("--sigma", tg.sigma, "primes without convergence factor, e.g. 2,3");
  tama->add_flag("--peyre-check", tg.peyre, "compare alpha beta tau with fitted counts");
  tama->add_option("--H", tg.H, "anticanonical height bound for --peyre-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("validation", 2, e.what());
  }

  try {
    if (cfg.precision_bits != 64) throw ValidationError("only --precision-bits 64 is supported");
    if (selftest) return run_selftest(std::cout) ? 0 : 1;
    if (*height) cmd_height(cfg, ha);
    else if (*twist) cmd_twist(cfg, ta, twist_file, compare, section);
    else if (*lattice) cmd_lattice(cfg, lattice_what, gram, t, s_text);
    else if (*arakelov) cmd_arakelov(cfg, aa);
    else if (*count) cmd_count(cfg, ca);
    else if (*zeta) cmd_zeta(cfg, ca);
    else if (*fit) cmd_fit(cfg, ca);
    else if (*hirz) cmd_hirzebruch(cfg, fn_what, fa);
    else if (*tama) cmd_tamagawa(cfg, tg);
    else {
      std::cout << app.help();
      return 2;
    }
  } catch (const CapacityError& e) {
    return fail("capacity", 3, e.what());
  } catch (const ValidationError& e) {
    return fail("validation", 2, e.what());
  } catch (const std::exception& e) {
    return fail("runtime", 1, e.what());
  }
  return 0;
}
