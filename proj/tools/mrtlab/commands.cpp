#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "mrtlab/archimedean.hpp"
#include "mrtlab/error.hpp"
#include "mrtlab/expsum.hpp"
#include "mrtlab/furstenberg.hpp"
#include "mrtlab/mrt.hpp"
#include "mrtlab/nud.hpp"
#include "mrtlab/poly_family.hpp"
#include "mrtlab/prime_arith.hpp"
#include "mrtlab/rng.hpp"

namespace mrtcli {
namespace {

using nlohmann::json;
using namespace mrtlab;

template <class T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ArgumentError(std::string("parameter '") + key + "' has the wrong type");
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw ArgumentError(std::string("missing parameter '") + key + "'");
  return get<T>(j, key, T{});
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError(what);
}

// Numbers such as 1e6 arrive as doubles; accept them when integral.
std::uint64_t as_u64(const json& v, const char* key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    check(v.get<long long>() >= 0, std::string(key) + " must be non-negative");
    return static_cast<std::uint64_t>(v.get<long long>());
  }
  if (v.is_number_float()) {
    const double x = v.get<double>();
    check(x >= 0 && x < 1.8e19 && x == std::floor(x), std::string(key) + " must be a non-negative integer");
    return static_cast<std::uint64_t>(x);
  }
  throw ArgumentError(std::string(key) + " must be an integer");
}

std::uint64_t u64(const json& j, const char* key, std::optional<std::uint64_t> fallback = std::nullopt) {
  if (!j.contains(key) || j[key].is_null()) {
    if (!fallback) throw ArgumentError(std::string("missing parameter '") + key + "'");
    return *fallback;
  }
  return as_u64(j[key], key);
}

std::vector<std::uint64_t> u64_list(const json& j, const char* key, std::vector<std::uint64_t> fallback) {
  if (!j.contains(key)) return fallback;
  check(j[key].is_array(), std::string(key) + " must be a list");
  std::vector<std::uint64_t> out;
  for (const auto& v : j[key]) out.push_back(as_u64(v, key));
  return out;
}

int degree_index(const json& j, const char* key = "d", std::optional<int> fallback = std::nullopt) {
  const int d = j.contains(key) ? get<int>(j, key, 0) : fallback ? *fallback : require<int>(j, key);
  check(d >= 0 && d <= kMaxPolyDegreeIndex, "d must lie in [0, " + std::to_string(kMaxPolyDegreeIndex) + "]");
  return d;
}

std::filesystem::path resolve(const Context& ctx, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : ctx.base_dir / path;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string hex_u(std::uint64_t x) { return std::to_string(x); }

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::shared_ptr<const PhaseFunction> phase_function(int d) {
  return std::make_shared<const PhaseFunction>(make_phase_function(d));
}

TPolicy parse_policy(const json& j) {
  TPolicy p;
  if (!j.contains("policy")) return p;
  const auto& v = j["policy"];
  if (v.is_string() && v.get<std::string>() == "square") return p;
  check(v.is_object(), "policy must be \"square\", {\"value\": t} or {\"exponent\": k}");
  if (v.contains("value")) {
    p.kind = TPolicy::Kind::explicit_value;
    p.value = as_u64(v["value"], "policy.value");
  } else {
    p.kind = TPolicy::Kind::exponent;
    p.exponent = static_cast<unsigned>(as_u64(v.at("exponent"), "policy.exponent"));
    check(p.exponent >= 2, "policy exponent must be at least 2");
  }
  return p;
}

std::map<std::uint64_t, Turns> parse_initial_values(const json& j) {
  std::map<std::uint64_t, Turns> out;
  if (!j.contains("initial_values")) return out;
  check(j["initial_values"].is_object(), "initial_values maps primes to phases in turns");
  for (const auto& [k, v] : j["initial_values"].items()) {
    const auto p = std::stoull(k);
    out[p] = v.is_string() ? Turns::from_hex(v.get<std::string>()) : Turns::from_double(v.get<double>());
  }
  return out;
}

std::shared_ptr<const PrimeTable> sieve_for(const json& j, std::uint64_t default_limit) {
  const auto limit = u64(j, "sieve_limit", default_limit);
  check(limit >= 2, "sieve_limit must be at least 2");
  return std::make_shared<const PrimeTable>(PrimeTable::sieve(limit));
}

std::vector<std::vector<std::string>> stage_rows(const MrtFunction& fn) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t m = 1; m <= fn.stage_count(); ++m) {
    std::vector<std::string> r{std::to_string(m), hex_u(fn.t(m)), hex_u(fn.s(m))};
    if (m < fn.stage_count()) {
      r.push_back(num(stage_prime_deviation(fn, m)));
      r.push_back(num(mean_surrogate_deviation(fn, m, fn.t(m + 1))));
      r.push_back(num(surrogate_discrepancy(fn, m, fn.t(m + 1))));
    } else {
      r.insert(r.end(), {"", "", ""});
    }
    rows.push_back(r);
  }
  return rows;
}

const std::vector<std::string> kStageColumns = {"stage", "t", "s", "prime_deviation_next", "mean_deviation_next",
                                                "discrepancy_next"};

// Loads params (and the prime cache when given) from the block.
std::shared_ptr<const MrtFunction> load_mrt(const Context& ctx, const json& j) {
  const auto params = MrtParams::from_json(read_file(resolve(ctx, require<std::string>(j, "params"))));
  params.validate();
  auto table = sieve_for(j, params.stages.back().t);
  if (j.contains("primes"))
    return std::make_shared<const MrtFunction>(
        MrtFunction::from_cache(params, table, read_file(resolve(ctx, j["primes"].get<std::string>()))));
  auto fn = MrtFunction::initial(params.stages.front().t, table, params.initial_values, params.aperiodic_mode,
                                 params.policy);
  for (std::size_t m = 1; m < params.stages.size(); ++m)
    fn = extend_stage(fn, params.stages[m].t, params.stages[m].s);
  return std::make_shared<const MrtFunction>(std::move(fn));
}

// ---------------------------------------------------------------------------

void cmd_construct(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  std::optional<MrtFunction> fn;
  if (j.contains("stages_explicit")) {
    MrtParams p;
    for (const auto& st : j["stages_explicit"]) {
      check(st.is_array() && st.size() == 2, "stages_explicit entries are [t, s]");
      p.stages.push_back({as_u64(st[0], "t"), as_u64(st[1], "s")});
    }
    check(!p.stages.empty(), "stages_explicit is empty");
    p.initial_values = parse_initial_values(j);
    p.aperiodic_mode = get<bool>(j, "aperiodic", false);
    p.validate();
    auto table = sieve_for(j, p.stages.back().t);
    fn = MrtFunction::initial(p.stages[0].t, table, p.initial_values, p.aperiodic_mode);
    for (std::size_t m = 1; m < p.stages.size(); ++m) fn = extend_stage(*fn, p.stages[m].t, p.stages[m].s);
  } else {
    const auto t1 = u64(j, "t1", 2);
    const auto stages = u64(j, "stages", 2);
    check(t1 >= 2, "t1 must be at least 2");
    check(stages >= 1 && stages <= 8, "stages must lie in [1, 8]");
    MrtParams base;
    base.initial_values = parse_initial_values(j);
    base.aperiodic_mode = get<bool>(j, "aperiodic", false);
    base.policy = parse_policy(j);
    auto table = sieve_for(j, stages == 1 ? std::max<std::uint64_t>(t1, 2) : 10'000'000);
    fn = build_mrt(t1, stages, table, u64(j, "search_cap", 100'000'000), base);
  }
  out.text("params.json", fn->params().to_json());
  out.text("primes.txt", fn->prime_values_text());
  out.csv("stages.csv", kStageColumns, stage_rows(*fn));
}

struct CriterionRow {
  int d;
  std::uint64_t s;
  double beta;
};

void cmd_report(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  std::vector<int> ds;
  for (auto d : u64_list(j, "d", {0, 1, 2})) {
    check(d <= static_cast<std::uint64_t>(kMaxPolyDegreeIndex), "d out of range");
    ds.push_back(static_cast<int>(d));
  }
  const auto svals = u64_list(j, "s", {1'000'000});
  for (auto s : svals) check(s >= 2, "s must be at least 2");
  std::vector<double> betas = get<std::vector<double>>(j, "beta", {});
  for (double b : betas) check(b > 0 && b <= 2, "beta must lie in (0, 2]");
  const long ell_max = get<long>(j, "ell_max", 3);
  const double tol = get<double>(j, "tol", 0.05);
  check(ell_max >= 1, "ell_max must be positive");
  check(tol > 0, "tol must be positive");
  const std::uint64_t max_terms = u64(j, "max_terms", 2'000'000'000);
  std::shared_ptr<const MrtFunction> mrt;
  if (j.contains("params")) mrt = load_mrt(ctx, j);

  std::vector<CriterionRow> cases;
  for (int d : ds)
    for (auto s : svals) {
      if (betas.empty()) cases.push_back({d, s, window_midpoint(d)});
      for (double b : betas) cases.push_back({d, s, b});
    }
  for (const auto& c : cases) {
    const double N = std::floor(std::pow(static_cast<double>(c.s), c.beta));
    if (N > static_cast<double>(max_terms))
      throw ResourceError("window N = " + num(N) + " for d=" + std::to_string(c.d) +
                          " exceeds max_terms; lower s or beta, or raise max_terms");
  }

  std::vector<std::vector<std::string>> crit, kl;
  for (const auto& c : cases) {
    const auto N = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(c.s), c.beta)));
    SurrogateFunction u(c.s);
    const auto r = criterion_check(u, c.d, N, ell_max, tol, ctx.parallel);
    crit.push_back({std::to_string(c.d), hex_u(c.s), num(c.beta), hex_u(N), num(r.next_deviation),
                    num(r.powers_max), r.passed ? "1" : "0"});
    const auto pf = make_phase_function(c.d);
    const double alpha = default_alpha(c.d, c.beta);
    for (long ell = 1; ell <= ell_max; ++ell) {
      try {
        const auto split = kl_split(pf, c.s, ell, N, alpha);
        kl.push_back({std::to_string(c.d), hex_u(c.s), num(c.beta), std::to_string(ell), hex_u(split.head),
                      num(split.tail.lambda1), num(split.bound), "certified"});
      } catch (const CertificateRefused& e) {
        kl.push_back({std::to_string(c.d), hex_u(c.s), num(c.beta), std::to_string(ell), "", "", "", "refused"});
      }
    }
  }
  out.csv("criterion.csv", {"d", "s", "beta", "N", "next_deviation", "powers_max", "passed"}, crit);
  out.csv("kl.csv", {"d", "s", "beta", "ell", "head_terms", "lambda1", "bound", "status"}, kl);

  if (j.contains("delta")) {
    const auto& dj = j["delta"];
    const auto samples = u64(dj, "samples", 20'000);
    DeltaConfig cfg;
    cfg.depth = u64(dj, "depth", 40);
    check(samples >= 1 && cfg.depth >= 1, "delta.samples and delta.depth must be positive");
    std::vector<std::vector<std::string>> rows;
    for (int d : ds) {
      const auto set = sample_set(d, samples, 16, ctx.seed);
      EnsembleAverager ens(set);
      const auto r = delta_distance([&](const MomentSpec& s) { return ens.moment(s); },
                                    [d](const MomentSpec& s) { return nu_d_moment(NuDOracle{d}, s); }, cfg);
      rows.push_back({std::to_string(d), hex_u(samples), std::to_string(r.terms), num(r.value), num(r.tail_bound)});
    }
    out.csv("delta.csv", {"d", "samples", "terms", "delta", "tail_bound"}, rows);
  }
  if (j.contains("independence")) {
    const auto& ij = j["independence"];
    const auto samples = u64(ij, "samples", 20'000);
    const long E = get<long>(ij, "max_exponent", 2);
    const double thr = get<double>(ij, "threshold", 0.05);
    std::vector<std::vector<std::string>> rows;
    for (int d : ds) {
      const auto set = sample_set(d, samples, static_cast<std::size_t>(d) + 1, ctx.seed);
      const auto r = independence_report(set, static_cast<std::size_t>(d) + 1, E, thr);
      rows.push_back({std::to_string(d), hex_u(samples), std::to_string(r.entries.size()), num(r.max_magnitude),
                      r.passed ? "1" : "0"});
    }
    out.csv("independence.csv", {"d", "samples", "entries", "max_magnitude", "passed"}, rows);
  }
  if (j.contains("stationarity")) {
    const auto& sj = j["stationarity"];
    const auto rs = u64_list(sj, "r", {2, 3, 5});
    const auto family = spec_family(u64(sj, "max_lag", 4), u64(sj, "max_terms", 3), get<long>(sj, "max_exp", 2));
    std::vector<std::vector<std::string>> rows;
    for (int d : ds)
      for (auto r : rs) {
        std::size_t fails = 0;
        for (const auto& s : family) fails += !strong_stationarity_check(d, s, r);
        rows.push_back({std::to_string(d), hex_u(r), std::to_string(family.size()), std::to_string(fails)});
      }
    out.csv("stationarity.csv", {"d", "r", "specs", "failures"}, rows);
  }
  if (j.contains("rotation")) {
    const auto& rj = j["rotation"];
    const auto rep = rotation_family_check(u64_list(rj, "N", {1000, 10000, 100000}), get<long>(rj, "k_max", 5),
                                           ctx.parallel);
    json rows = json::array();
    for (const auto& row : rep.rows)
      rows.push_back({{"N", row.N}, {"c", complex_json(row.c)}, {"max_deviation", row.max_deviation}});
    out.json("rotation.json", {{"k_max", rep.k_max}, {"rows", rows}});
  }
  if (mrt) out.csv("stages.csv", kStageColumns, stage_rows(*mrt));
}

void cmd_poly(const Context& ctx, Output& out) {
  const int d = degree_index(ctx.params);
  const auto pf = make_phase_function(d);
  auto coeffs = [](const IntPoly& p) {
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(c.get_str());
    return a;
  };
  json body = {{"d", d},
               {"P", coeffs(pf.triple.P)},
               {"Q", coeffs(pf.triple.Q)},
               {"R", coeffs(pf.triple.R)},
               {"P_text", pf.triple.P.to_string()},
               {"Q_text", pf.triple.Q.to_string()},
               {"P_factors", pf.triple.P_factors},
               {"Q_factors", pf.triple.Q_factors},
               {"L", pf.L.get_str()},
               {"monotone_from", pf.H}};
  if (pf.K) body["K"] = pf.K->get_str();
  out.json("poly.json", body);
}

void cmd_expsum(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  ExpSumSpec sp;
  const int d = degree_index(j);
  sp.phase = phase_function(d);
  sp.s = u64(j, "s");
  sp.ell = get<long>(j, "ell", 1);
  sp.a = u64(j, "a", 1);
  sp.b = u64(j, "b");
  sp.precision = ctx.precision;
  sp.parallel = ctx.parallel;
  sp.track_max_partial = get<bool>(j, "max_partial", false);
  check(sp.s >= 1 && sp.ell != 0, "s must be positive and ell nonzero");
  check(sp.a >= 1 && sp.a <= sp.b, "need 1 <= a <= b");
  const auto r = exp_sum(sp);
  json body = {{"d", d},           {"s", sp.s},       {"ell", sp.ell},
               {"a", sp.a},        {"b", sp.b},       {"value", complex_json(r.value)},
               {"raw", complex_json(r.raw)},          {"terms", r.terms},
               {"error_bound", r.error_bound}};
  if (sp.track_max_partial) body["max_partial"] = r.max_partial;
  try {
    const auto c = kl_certificate(*sp.phase, sp.s, sp.ell, sp.a, sp.b);
    body["kl"] = {{"lambda1", c.lambda1}, {"bound", c.bound}, {"normalized_bound", c.bound / double(r.terms)}};
  } catch (const CertificateRefused& e) {
    body["kl"] = {{"refused", e.what()}};
  }
  out.json("expsum.json", body);
}

void cmd_sample(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const int d = degree_index(j);
  const auto count = u64(j, "count", 4);
  const auto length = u64(j, "length", 16);
  check(count >= 1 && length >= 1 && count * length <= 100'000'000, "count * length must lie in [1, 1e8]");
  std::vector<std::vector<std::string>> rows;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto z = sample_nu_d(d, length, ctx.seed, i);
    for (std::uint64_t n = 0; n < length; ++n) {
      const auto v = z[n].unit();
      rows.push_back({hex_u(i), hex_u(n), z[n].hex(), num(v.real()), num(v.imag())});
    }
  }
  out.csv("samples.csv", {"path", "n", "phase_hex", "re", "im"}, rows);
}

void cmd_independence(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const int d = degree_index(j);
  const auto samples = u64(j, "samples", 20'000);
  const auto window = u64(j, "window", static_cast<std::uint64_t>(d) + 1);
  const long E = get<long>(j, "max_exponent", 2);
  check(samples >= 1 && E >= 1, "samples and max_exponent must be positive");
  const auto set = sample_set(d, samples, window, ctx.seed);
  const auto r = independence_report(set, window, E, get<double>(j, "threshold", 0.05));
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"exponents", e.exponents}, {"magnitude", e.magnitude}});
  out.json("independence.json", {{"d", d},
                                 {"window", window},
                                 {"samples", samples},
                                 {"threshold", r.threshold},
                                 {"max_magnitude", r.max_magnitude},
                                 {"passed", r.passed},
                                 {"entries", entries}});
}

void cmd_stationarity(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const int d = degree_index(j);
  const auto count = u64(j, "count", 10'000);
  const auto rs = u64_list(j, "r", {2, 3, 5});
  check(!rs.empty(), "r is empty");
  for (auto r : rs) check(r >= 1, "r must be positive");
  CounterRng rng(ctx.seed, 0);
  std::size_t fails = 0, ones = 0;
  json counterexamples = json::array();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<MomentTerm> terms;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < k; ++t) terms.push_back({rng() % 9, static_cast<long>(rng() % 7) - 3});
    const MomentSpec spec(terms);
    const auto r = rs[rng() % rs.size()];
    ones += nu_d_moment(NuDOracle{d}, spec) == 1.0;
    if (!strong_stationarity_check(d, spec, r)) {
      ++fails;
      if (counterexamples.size() < 10) counterexamples.push_back({{"spec", spec.to_string()}, {"r", r}});
    }
  }
  out.json("stationarity.json", {{"d", d},
                                 {"cases", count},
                                 {"moment_one", ones},
                                 {"failures", fails},
                                 {"counterexamples", counterexamples}});
}

void cmd_rotation(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const auto grid = u64_list(j, "N", {1000, 10'000, 100'000, 1'000'000});
  for (auto N : grid) check(N >= 1, "N must be positive");
  const long k_max = get<long>(j, "k_max", 5);
  check(k_max >= 0, "k_max must be non-negative");
  const auto rep = rotation_family_check(grid, k_max, ctx.parallel);
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"N", r.N}, {"c", complex_json(r.c)}, {"deviations", r.deviations}, {"max_deviation", r.max_deviation}});
  out.json("rotation.json", {{"k_max", k_max}, {"rows", rows}});
}

void cmd_gdensity(const Context& ctx, Output& out) {
  const auto points = u64(ctx.params, "points", 101);
  check(points >= 2 && points <= 10'000'000, "points must lie in [2, 1e7]");
  std::vector<std::vector<std::string>> rows;
  for (std::uint64_t i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(points - 1);
    rows.push_back({num(x), num(density_g(x))});
  }
  out.csv("gdensity.csv", {"x", "g"}, rows);
}

void cmd_sarnak(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const auto stage = u64(j, "stage", 1);
  check(stage >= 1, "stage must be positive");
  json body;
  if (j.contains("params")) {
    const auto fn = load_mrt(ctx, j);
    check(stage < fn->stage_count(), "stage must be below the number of stages");
    const auto sv = SarnakV::from_params(fn->params());
    MrtSequence u(fn);
    const auto r = correlation_uv(u, sv, stage, u64(j, "budget", 100'000'000));
    body = {{"mode", "direct"},
            {"correlation", complex_json(r.value)},
            {"error_radius", r.error_radius},
            {"explicit_terms", r.explicit_terms},
            {"r_next", sv.r[stage + 1]},
            {"t_next", fn->t(stage + 1)},
            {"mean_surrogate_deviation", mean_surrogate_deviation(*fn, stage, fn->t(stage + 1))}};
  } else {
    MrtParams p;
    p.stages = {{u64(j, "t1", 1000), 0}, {u64(j, "t", 1'000'000'000'000ULL), u64(j, "s", 1'000'000)}};
    p.validate();
    const auto sv = SarnakV::from_params(p);
    const auto r = correlation_uv_surrogate(sv, stage, u64(j, "budget", 10'000'000));
    body = {{"mode", "surrogate"},
            {"correlation", complex_json(r.value)},
            {"error_radius", r.error_radius},
            {"explicit_terms", r.explicit_terms},
            {"r_next", sv.r[stage + 1]},
            {"t_next", p.stages[stage].t},
            {"lower_bound", r.value.real() - r.error_radius}};
  }
  out.json("sarnak.json", body);
}

void cmd_criterion(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const int d = degree_index(j);
  const long ell_max = get<long>(j, "ell_max", 3);
  const double tol = get<double>(j, "tol", 0.05);
  check(ell_max >= 1 && tol > 0, "ell_max and tol must be positive");
  std::unique_ptr<SequenceSource> u;
  std::shared_ptr<const MrtFunction> fn;
  std::uint64_t s = 0;
  if (j.contains("params")) {
    fn = load_mrt(ctx, j);
    s = fn->s(fn->stage_count());
    u = std::make_unique<MrtSequence>(fn);
  } else {
    s = u64(j, "s");
    check(s >= 2, "s must be at least 2");
    u = std::make_unique<SurrogateFunction>(s);
  }
  const double beta = get<double>(j, "beta", window_midpoint(d));
  check(beta > 0 && beta <= 2, "beta must lie in (0, 2]");
  const auto N = u64(j, "N", static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(s), beta))));
  check(N >= 1, "window N must be positive");
  const auto r = criterion_check(*u, d, N, ell_max, tol, ctx.parallel);
  json powers = json::array();
  for (auto z : r.powers) powers.push_back(complex_json(z));
  out.json("criterion.json", {{"d", d},
                              {"source", u->describe()},
                              {"N", N},
                              {"ell_max", ell_max},
                              {"tol", tol},
                              {"next_statistic", complex_json(r.next_statistic)},
                              {"next_deviation", r.next_deviation},
                              {"powers", powers},
                              {"powers_max", r.powers_max},
                              {"passed", r.passed}});
}

void cmd_delta(const Context& ctx, Output& out) {
  const auto& j = ctx.params;
  const int d = degree_index(j);
  DeltaConfig cfg;
  cfg.depth = u64(j, "depth", 40);
  check(cfg.depth >= 1, "depth must be positive");
  const auto oracle = [d](const MomentSpec& s) { return nu_d_moment(NuDOracle{d}, s); };
  DeltaResult r;
  json body = {{"d", d}, {"depth", cfg.depth}};
  if (j.contains("s")) {
    const auto s = u64(j, "s");
    const auto N = u64(j, "N");
    SurrogateFunction u(s);
    EmpiricalAverager avg(u, N, cfg.depth, get<std::string>(j, "weighting", "cesaro") == "log"
                                               ? Weighting::logarithmic
                                               : Weighting::cesaro);
    r = delta_distance(avg, oracle, cfg);
    body["source"] = u.describe();
    body["N"] = N;
  } else {
    const auto samples = u64(j, "samples", 20'000);
    check(samples >= 1, "samples must be positive");
    const auto set = sample_set(d, samples, 16, ctx.seed);
    EnsembleAverager ens(set);
    r = delta_distance([&](const MomentSpec& s) { return ens.moment(s); }, oracle, cfg);
    body["source"] = "nu_d ensemble";
    body["samples"] = samples;
  }
  body["delta"] = r.value;
  body["tail_bound"] = r.tail_bound;
  body["terms"] = r.terms;
  out.json("delta.json", body);
}

}  // namespace

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"construct", cmd_construct},     {"report", cmd_report},       {"poly", cmd_poly},
      {"expsum", cmd_expsum},           {"sample", cmd_sample},       {"independence", cmd_independence},
      {"stationarity", cmd_stationarity}, {"rotation", cmd_rotation}, {"gdensity", cmd_gdensity},
      {"sarnak", cmd_sarnak},           {"criterion", cmd_criterion}, {"delta", cmd_delta},
  };
  return table;
}

}  // namespace mrtcli
