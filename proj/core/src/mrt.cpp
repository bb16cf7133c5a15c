#include "mrtlab/mrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "mrtlab/error.hpp"
#include "mrtlab/phase_eval.hpp"
#include "mrtlab/summation.hpp"

namespace mrtlab {
namespace {

using nlohmann::json;

std::string stage_label(std::size_t m) { return "stage " + std::to_string(m); }

std::uint64_t checked_square(std::uint64_t s) {
  if (s > 0xffffffffULL) throw ResourceError("s = " + std::to_string(s) + ": s^2 overflows 64 bits");
  return s * s;
}

void deviation_budget(std::uint64_t t, double& bound) {
  bound = 1.0 / (static_cast<double>(t) * static_cast<double>(t));
}

}  // namespace

void MrtParams::validate() const {
  if (stages.empty()) throw InvariantError("MrtParams: no stages");
  if (stages.front().t < 2) throw InvariantError("MrtParams: t_1 must be at least 2");
  for (std::size_t i = 1; i < stages.size(); ++i) {
    const auto& prev = stages[i - 1];
    const auto& cur = stages[i];
    const std::string at = stage_label(i + 1);
    if (cur.s <= prev.t) throw InvariantError("MrtParams: " + at + " needs t_m < s_{m+1}");
    if (cur.s > 0xffffffffULL || cur.s * cur.s > cur.t)
      throw InvariantError("MrtParams: " + at + " needs s_{m+1}^2 <= t_{m+1}");
    if (i >= 2 && cur.s <= prev.s) throw InvariantError("MrtParams: s_m must increase at " + at);
    if (cur.t <= prev.t) throw InvariantError("MrtParams: t_m must increase at " + at);
  }
  for (const auto& [p, ph] : initial_values)
    if (p > stages.front().t) throw InvariantError("MrtParams: initial value for p = " + std::to_string(p) + " > t_1");
}

std::string MrtParams::to_json() const {
  json j;
  j["format"] = "mrtlab.params/1";
  j["aperiodic_mode"] = aperiodic_mode;
  json pol;
  switch (policy.kind) {
    case TPolicy::Kind::square: pol["kind"] = "square"; break;
    case TPolicy::Kind::explicit_value: pol["kind"] = "explicit"; pol["value"] = policy.value; break;
    case TPolicy::Kind::exponent: pol["kind"] = "exponent"; pol["exponent"] = policy.exponent; break;
  }
  j["policy"] = pol;
  j["stages"] = json::array();
  for (std::size_t i = 0; i < stages.size(); ++i) {
    json st{{"t", stages[i].t}};
    if (i > 0) st["s"] = stages[i].s;
    j["stages"].push_back(st);
  }
  json iv = json::object();
  for (const auto& [p, ph] : initial_values) iv[std::to_string(p)] = ph.hex();
  j["initial_values"] = iv;
  return j.dump(2);
}

MrtParams MrtParams::from_json(const std::string& text) {
  MrtParams out;
  try {
    json j = json::parse(text);
    out.aperiodic_mode = j.value("aperiodic_mode", false);
    if (j.contains("policy")) {
      const auto& pol = j["policy"];
      const std::string kind = pol.value("kind", "square");
      if (kind == "square") out.policy.kind = TPolicy::Kind::square;
      else if (kind == "explicit") {
        out.policy.kind = TPolicy::Kind::explicit_value;
        out.policy.value = pol.at("value").get<std::uint64_t>();
      } else if (kind == "exponent") {
        out.policy.kind = TPolicy::Kind::exponent;
        out.policy.exponent = pol.at("exponent").get<unsigned>();
      } else {
        throw ArgumentError("MrtParams: unknown policy kind '" + kind + "'");
      }
    }
    for (const auto& st : j.at("stages"))
      out.stages.push_back({st.at("t").get<std::uint64_t>(), st.value("s", std::uint64_t{0})});
    if (j.contains("initial_values"))
      for (const auto& [k, v] : j["initial_values"].items())
        out.initial_values[std::stoull(k)] = Turns::from_hex(v.get<std::string>());
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("MrtParams: malformed JSON: ") + e.what());
  }
  return out;
}

MrtFunction MrtFunction::initial(std::uint64_t t1, std::shared_ptr<const PrimeTable> table,
                                 std::map<std::uint64_t, Turns> initial_values, bool aperiodic_mode,
                                 TPolicy policy) {
  if (t1 < 2) throw ArgumentError("MrtFunction: t_1 must be at least 2 (no primes below)");
  if (!table) throw ArgumentError("MrtFunction: missing prime table");
  if (table->limit() < t1) throw ResourceError("MrtFunction: sieve limit below t_1");
  MrtFunction fn;
  fn.table_ = std::move(table);
  fn.params_.stages.push_back({t1, 0});
  fn.params_.aperiodic_mode = aperiodic_mode;
  fn.params_.policy = policy;
  fn.params_.initial_values = std::move(initial_values);
  fn.params_.validate();
  for (auto p : fn.table_->primes()) {
    if (p > t1) break;
    auto it = fn.params_.initial_values.find(p);
    fn.phases_.push_back(it == fn.params_.initial_values.end() ? Turns() : it->second);
  }
  for (const auto& [p, ph] : fn.params_.initial_values)
    if (!fn.table_->is_prime(p)) throw ArgumentError("MrtFunction: initial value given for non-prime " + std::to_string(p));
  return fn;
}

std::span<const std::uint32_t> MrtFunction::primes() const { return table_->primes().first(phases_.size()); }

Turns MrtFunction::prime_phase(std::uint64_t p) const {
  auto ps = primes();
  auto it = std::lower_bound(ps.begin(), ps.end(), p);
  if (it == ps.end() || *it != p)
    throw StateError("MrtFunction: no stored value for p = " + std::to_string(p));
  return phases_[static_cast<std::size_t>(it - ps.begin())];
}

Turns MrtFunction::phase(std::uint64_t n) const {
  if (n == 0) throw ArgumentError("MrtFunction: n must be >= 1");
  if (n > table_->limit()) throw ArgumentError("MrtFunction: n = " + std::to_string(n) + " beyond sieve limit");
  Turns acc;
  for (const auto& pp : factorize(n, *table_)) acc += pp.exponent * prime_phase(pp.prime);
  return acc;
}

std::string MrtFunction::prime_values_text() const {
  std::ostringstream os;
  auto ps = primes();
  for (std::size_t i = 0; i < ps.size(); ++i) os << ps[i] << ' ' << phases_[i].hex() << '\n';
  return os.str();
}

MrtFunction MrtFunction::from_cache(const MrtParams& params, std::shared_ptr<const PrimeTable> table,
                                    const std::string& text) {
  params.validate();
  MrtFunction fn = initial(params.stages.front().t, table, params.initial_values, params.aperiodic_mode,
                           params.policy);
  fn.params_ = params;
  std::istringstream is(text);
  std::vector<Turns> phases;
  std::uint64_t p;
  std::string hex;
  auto ps = table->primes();
  while (is >> p >> hex) {
    if (phases.size() >= ps.size() || ps[phases.size()] != p)
      throw IoError("prime-value cache: unexpected entry for p = " + std::to_string(p));
    phases.push_back(Turns::from_hex(hex));
  }
  const std::size_t want = table->prime_count(params.stages.back().t);
  if (phases.size() != want) throw IoError("prime-value cache: wrong number of entries");
  // Entries above t_1 are determined by the stages; spot-check them all.
  for (std::size_t i = fn.phases_.size(), m = 1; i < phases.size(); ++i) {
    while (ps[i] > params.stages[m].t) ++m;
    if (phase_at(LogCombination::single_log(params.stages[m].s), ps[i]) != phases[i])
      throw IoError("prime-value cache: stale phase for p = " + std::to_string(ps[i]));
  }
  for (std::size_t i = 0; i < fn.phases_.size(); ++i)
    if (fn.phases_[i] != phases[i]) throw IoError("prime-value cache: stage-1 values disagree with params");
  fn.phases_ = std::move(phases);
  return fn;
}

std::uint64_t find_next_s(const MrtFunction& fn, std::uint64_t search_cap) {
  const std::uint64_t tm = fn.last_t();
  auto ps = fn.primes();
  if (ps.empty()) throw ArgumentError("find_next_s: no primes <= t_m");
  double bound;
  deviation_budget(tm, bound);
  std::uint64_t start = tm + 1;
  if (fn.params().aperiodic_mode) {
    const double e = std::ceil(std::exp(static_cast<double>(tm)));
    if (e >= static_cast<double>(search_cap))
      throw SearchExhausted("find_next_s: e^{t_m} exceeds the search cap in aperiodic mode", -1,
                            std::numeric_limits<double>::infinity());
    start = std::max(start, static_cast<std::uint64_t>(e) + 1);
  }
  if (start > search_cap)
    throw SearchExhausted("find_next_s: empty search interval", -1, std::numeric_limits<double>::infinity());

  const std::size_t k = ps.size();
  std::vector<Turns> step(k), cur(k), target(fn.prime_phases().begin(), fn.prime_phases().end());
  for (std::size_t i = 0; i < k; ++i) {
    step[i] = phase_at(LogCombination::single_log(1), ps[i]);
    cur[i] = start * step[i];
  }
  long long best = -1;
  double best_dev = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = start;; ++s) {
    double worst = 0;
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      const double dev = chord(cur[i], target[i]);
      worst = std::max(worst, dev);
      if (dev >= bound) {
        ok = false;
        if (worst >= best_dev) break;
      }
    }
    if (ok) return s;
    if (worst < best_dev) {
      best_dev = worst;
      best = static_cast<long long>(s);
    }
    if (s == search_cap) break;
    for (std::size_t i = 0; i < k; ++i) cur[i] += step[i];
  }
  std::ostringstream os;
  os << "find_next_s: no admissible s in (" << tm << ", " << search_cap << "]; best candidate s = " << best
     << " with worst-prime deviation " << best_dev << " (need < " << bound << ")";
  throw SearchExhausted(os.str(), best, best_dev);
}

std::uint64_t next_t(std::uint64_t s, const TPolicy& policy) {
  if (s < 2) throw ArgumentError("next_t: s_next must be at least 2");
  const std::uint64_t sq = checked_square(s);
  switch (policy.kind) {
    case TPolicy::Kind::square:
      return sq;
    case TPolicy::Kind::explicit_value:
      if (policy.value < sq)
        throw InvariantError("next_t: explicit t = " + std::to_string(policy.value) + " < s^2 = " + std::to_string(sq));
      return policy.value;
    case TPolicy::Kind::exponent: {
      if (policy.exponent < 2) throw ArgumentError("next_t: growth exponent must be at least 2");
      std::uint64_t t = 1;
      for (unsigned i = 0; i < policy.exponent; ++i) {
        if (t > std::numeric_limits<std::uint64_t>::max() / s) throw ResourceError("next_t: s^a overflows 64 bits");
        t *= s;
      }
      return t;
    }
  }
  throw ArgumentError("next_t: unknown policy");
}

MrtFunction extend_stage(const MrtFunction& fn, std::uint64_t new_t, std::uint64_t s_next) {
  MrtFunction out = fn;
  out.params_.stages.push_back({new_t, s_next});
  out.params_.validate();
  if (fn.table().limit() < new_t)
    throw ResourceError("extend_stage: sieve limit " + std::to_string(fn.table().limit()) + " below t = " +
                        std::to_string(new_t));
  const std::size_t m = fn.stage_count();
  const double dev = [&] {
    double worst = 0;
    const auto ps = fn.primes();
    for (std::size_t i = 0; i < ps.size(); ++i)
      worst = std::max(worst, chord(fn.prime_phases()[i], phase_at(LogCombination::single_log(s_next), ps[i])));
    return worst;
  }();
  double bound;
  deviation_budget(fn.t(m), bound);
  if (!(dev < bound)) {
    std::ostringstream os;
    os << "extend_stage: s = " << s_next << " gives max |u(p) - p^{is}| = " << dev << ", need < " << bound;
    throw InvariantError(os.str());
  }
  const LogCombination comb = LogCombination::single_log(s_next);
  for (auto p : fn.table().primes()) {
    if (p <= fn.last_t()) continue;
    if (p > new_t) break;
    out.phases_.push_back(phase_at(comb, p));
  }
  return out;
}

MrtFunction build_mrt(std::uint64_t t1, std::size_t stages, std::shared_ptr<const PrimeTable> table,
                      std::uint64_t search_cap, const MrtParams& base) {
  if (stages == 0) throw ArgumentError("build_mrt: need at least one stage");
  MrtFunction fn = MrtFunction::initial(t1, std::move(table), base.initial_values, base.aperiodic_mode, base.policy);
  for (std::size_t m = 1; m < stages; ++m) {
    const std::uint64_t s = find_next_s(fn, search_cap);
    fn = extend_stage(fn, next_t(s, base.policy), s);
  }
  return fn;
}

double stage_prime_deviation(const MrtFunction& fn, std::size_t m) {
  if (m < 1 || m >= fn.stage_count()) throw ArgumentError("stage_prime_deviation: stage m+1 undefined");
  const LogCombination comb = LogCombination::single_log(fn.s(m + 1));
  double worst = 0;
  const auto ps = fn.primes();
  for (std::size_t i = 0; i < ps.size() && ps[i] <= fn.t(m); ++i)
    worst = std::max(worst, chord(fn.prime_phases()[i], phase_at(comb, ps[i])));
  return worst;
}

namespace {

template <class Fn>
void scan_against_surrogate(const MrtFunction& fn, std::size_t m, std::uint64_t N, const char* who, Fn&& fn_dev) {
  if (m < 1 || m >= fn.stage_count()) throw ArgumentError(std::string(who) + ": stage m+1 undefined");
  if (N == 0) throw ArgumentError(std::string(who) + ": N must be >= 1");
  if (N > fn.t(m + 1))
    throw ArgumentError(std::string(who) + ": N = " + std::to_string(N) + " exceeds t_{m+1} = " +
                        std::to_string(fn.t(m + 1)));
  for_each_phase(LogCombination::single_log(fn.s(m + 1)), 1, N,
                 [&](std::uint64_t n, Turns ph) { fn_dev(chord(fn.phase(n), ph)); });
}

}  // namespace

double surrogate_discrepancy(const MrtFunction& fn, std::size_t m, std::uint64_t N) {
  const double thr = 1.0 / static_cast<double>(fn.t(m));
  std::uint64_t bad = 0;
  scan_against_surrogate(fn, m, N, "surrogate_discrepancy", [&](double dev) { bad += dev > thr; });
  return static_cast<double>(bad) / static_cast<double>(N);
}

double mean_surrogate_deviation(const MrtFunction& fn, std::size_t m, std::uint64_t N) {
  CompensatedSum acc;
  scan_against_surrogate(fn, m, N, "mean_surrogate_deviation", [&](double dev) { acc.add(dev); });
  return acc.value() / static_cast<double>(N);
}

std::string MrtSequence::describe() const {
  std::ostringstream os;
  os << "mrt(t_1=" << fn_->t(1) << ", stages=" << fn_->stage_count() << ")";
  return os.str();
}

void MrtSequence::phases(std::uint64_t first, std::span<Turns> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn_->phase(first + i);
}

Turns SurrogateFunction::phase(std::uint64_t n) const {
  if (n == 0) throw ArgumentError("SurrogateFunction: n must be >= 1");
  return phase_at(LogCombination::single_log(s_), n);
}

std::string SurrogateFunction::describe() const { return "surrogate(s=" + std::to_string(s_) + ")"; }

void SurrogateFunction::phases(std::uint64_t first, std::span<Turns> out) const {
  if (out.empty()) return;
  if (first == 0) throw ArgumentError("SurrogateFunction: n must be >= 1");
  for_each_phase(LogCombination::single_log(s_), first, first + out.size() - 1,
                 [&](std::uint64_t n, Turns ph) { out[n - first] = ph; });
}

}  // namespace mrtlab
